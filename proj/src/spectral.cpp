#include "ssc/spectral.hpp"
#include "ssc/errors.hpp"
#include "ssc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ssc {

Mat normalized_laplacian(const AffinityGraph& graph) {
    const std::size_t N = graph.g.rows();
    Vec dinv_sqrt(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < N; ++j) deg += graph.g(i, j);
        dinv_sqrt[i] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
    }
    Mat L(N, N);
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = 0; i < N; ++i)
            L(i, j) = (i == j ? 1.0 : 0.0) - dinv_sqrt[i] * graph.g(i, j) * dinv_sqrt[j];
    return L;
}

EigenDecomposition symmetric_eig(const Mat& matrix, double tol) {
    const std::size_t n = matrix.rows();
    if (matrix.cols() != n) throw InvalidInputError("symmetric_eig: matrix must be square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(matrix(i, j) - matrix(j, i)) > 1e-10)
                throw InvalidInputError("symmetric_eig: matrix not symmetric");

    Mat A = matrix;
    Mat V = Mat::identity(n);
    const double scale = std::max(frobenius_norm(A), 1e-300);

    // Cyclic sweeps over the strict upper triangle.
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (std::sqrt(2.0 * off) <= tol * scale) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = A(p, i), aqi = A(q, i);
                    A(p, i) = c * api - s * aqi;
                    A(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    EigenDecomposition ed;
    ed.values.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Vec diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = A(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
    ed.vectors = Mat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        ed.values[k] = diag[order[k]];
        for (std::size_t i = 0; i < n; ++i) ed.vectors(i, k) = V(i, order[k]);
    }
    return ed;
}

KMeansResult kmeans(const Mat& X_rows, std::size_t k, const SpectralConfig& cfg) {
    const std::size_t N = X_rows.rows();
    const std::size_t dim = X_rows.cols();
    if (k < 1 || k > N) throw InvalidInputError("kmeans: bad cluster count");

    auto sqdist = [&](std::size_t i, const Vec& center) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = X_rows(i, d) - center[d];
            s += diff * diff;
        }
        return s;
    };

    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < std::max(1, cfg.kmeans_restarts); ++restart) {
        Rng rng(derive_seed(cfg.seed, 0x4d5 + static_cast<std::uint64_t>(restart)));

        // k-means++ seeding.
        std::vector<Vec> centers;
        centers.reserve(k);
        {
            const std::size_t first = static_cast<std::size_t>(rng.uniform() * N) % N;
            Vec c0(dim);
            for (std::size_t d = 0; d < dim; ++d) c0[d] = X_rows(first, d);
            centers.push_back(std::move(c0));
        }
        Vec d2(N);
        while (centers.size() < k) {
            double total = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                double m = std::numeric_limits<double>::infinity();
                for (const Vec& c : centers) m = std::min(m, sqdist(i, c));
                d2[i] = m;
                total += m;
            }
            std::size_t pick = 0;
            if (total > 0.0) {
                const double r = rng.uniform() * total;
                double acc = 0.0;
                for (std::size_t i = 0; i < N; ++i) {
                    acc += d2[i];
                    if (acc >= r) { pick = i; break; }
                }
            } else {
                pick = static_cast<std::size_t>(rng.uniform() * N) % N;
            }
            Vec c(dim);
            for (std::size_t d = 0; d < dim; ++d) c[d] = X_rows(pick, d);
            centers.push_back(std::move(c));
        }

        std::vector<int> labels(N, 0);
        double inertia = 0.0;
        for (int it = 0; it < cfg.kmeans_max_iter; ++it) {
            bool changed = false;
            inertia = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                double m = std::numeric_limits<double>::infinity();
                int arg = 0;
                for (std::size_t c = 0; c < k; ++c) {
                    const double dd = sqdist(i, centers[c]);
                    if (dd < m) { m = dd; arg = static_cast<int>(c); }
                }
                if (labels[i] != arg) { labels[i] = arg; changed = true; }
                inertia += m;
            }

            std::vector<Vec> sums(k, Vec(dim, 0.0));
            std::vector<std::size_t> cnt(k, 0);
            for (std::size_t i = 0; i < N; ++i) {
                for (std::size_t d = 0; d < dim; ++d) sums[labels[i]][d] += X_rows(i, d);
                ++cnt[labels[i]];
            }
            for (std::size_t c = 0; c < k; ++c) {
                if (cnt[c] == 0) {
                    // Empty cluster: reseed at the point farthest from its center.
                    std::size_t far = 0;
                    double far_d = -1.0;
                    for (std::size_t i = 0; i < N; ++i) {
                        const double dd = sqdist(i, centers[labels[i]]);
                        if (dd > far_d) { far_d = dd; far = i; }
                    }
                    for (std::size_t d = 0; d < dim; ++d) centers[c][d] = X_rows(far, d);
                    changed = true;
                } else {
                    for (std::size_t d = 0; d < dim; ++d)
                        centers[c][d] = sums[c][d] / static_cast<double>(cnt[c]);
                }
            }
            if (!changed && it > 0) break;
        }

        if (inertia < best.inertia) {
            best.inertia = inertia;
            best.labels = labels;
        }
    }
    return best;
}

Labeling spectral_cluster(const AffinityGraph& graph, std::size_t L, const SpectralConfig& cfg) {
    const std::size_t N = graph.g.rows();
    if (L < 1 || L > N) throw InvalidInputError("spectral_cluster: need 1 <= L <= N");

    Labeling out;
    out.L = L;
    if (L == 1) {
        out.labels.assign(N, 0);
        return out;
    }

    const Mat Lsym = normalized_laplacian(graph);
    const EigenDecomposition ed = symmetric_eig(Lsym, cfg.eig_tol);

    // Embedding: rows are points, columns the L smallest eigenvectors.
    Mat X(N, L);
    for (std::size_t k = 0; k < L; ++k)
        for (std::size_t i = 0; i < N; ++i) X(i, k) = ed.vectors(i, k);
    for (std::size_t i = 0; i < N; ++i) {
        double nrm = 0.0;
        for (std::size_t k = 0; k < L; ++k) nrm += X(i, k) * X(i, k);
        nrm = std::sqrt(nrm);
        if (nrm > 0.0)
            for (std::size_t k = 0; k < L; ++k) X(i, k) /= nrm;
    }

    out.labels = kmeans(X, L, cfg).labels;
    return out;
}

std::size_t estimate_num_clusters(const AffinityGraph& graph, std::size_t max_L) {
    const std::size_t N = graph.g.rows();
    if (max_L < 1 || max_L > N) throw InvalidInputError("estimate_num_clusters: bad max_L");

    const EigenDecomposition ed = symmetric_eig(normalized_laplacian(graph));
    std::size_t best = 1;
    double best_gap = -1.0;
    for (std::size_t k = 1; k <= max_L && k < N + 1; ++k) {
        const double gap = (k < N ? ed.values[k] : ed.values[N - 1]) - ed.values[k - 1];
        if (gap > best_gap + 1e-15) { // strict improvement; ties break low
            best_gap = gap;
            best = k;
        }
    }
    return best;
}

} // namespace ssc
