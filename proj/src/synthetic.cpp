#include "ssc/synthetic.hpp"
#include "ssc/errors.hpp"
#include "ssc/rng.hpp"

#include <algorithm>
#include <cmath>

namespace ssc {

namespace {

bool is_orthonormal(const Mat& U, double tol) {
    const Mat G = matmul_tn(U, U);
    for (std::size_t i = 0; i < G.rows(); ++i)
        for (std::size_t j = 0; j < G.cols(); ++j)
            if (std::fabs(G(i, j) - (i == j ? 1.0 : 0.0)) > tol) return false;
    return true;
}

} // namespace

SubspaceEnsemble build_equiaffine_subspaces(std::size_t n, std::size_t L, std::size_t d,
                                            double rho, std::uint64_t seed) {
    if (d < 1 || d > n || L < 1) throw InvalidInputError("build_equiaffine_subspaces: bad dims");
    if (2 * L * d > n)
        throw InvalidInputError("build_equiaffine_subspaces: need 2*L*d <= n");
    if (rho < 0.0 || rho > 1.0)
        throw InvalidInputError("build_equiaffine_subspaces: rho must be in [0, 1]");

    const double c = std::sqrt(rho);
    const double s = std::sqrt(1.0 - rho);

    // Canonical frame: shared block on axes 0..d-1, private block of subspace
    // k on axes d + k*d .. d + (k+1)*d - 1; then one random rotation of
    // everything.
    Rng rng(derive_seed(seed, 0xf7a3e));
    const Mat Q = rng.orthogonal(n);

    SubspaceEnsemble ens;
    ens.n = n;
    ens.dims.assign(L, d);
    ens.bases.reserve(L);
    for (std::size_t k = 0; k < L; ++k) {
        Mat U(n, d);
        for (std::size_t col = 0; col < d; ++col) {
            // cos(theta) * C[:, col] + sin(theta) * P_k[:, col], expressed in
            // the rotated frame: the canonical vectors pick columns of Q.
            const std::size_t shared_axis = col;
            const std::size_t private_axis = d + k * d + col;
            for (std::size_t i = 0; i < n; ++i)
                U(i, col) = c * Q(i, shared_axis) + s * Q(i, private_axis);
        }
        ens.bases.push_back(std::move(U));
    }
    return ens;
}

double affinity_between(const Mat& U_i, const Mat& U_j) {
    if (!is_orthonormal(U_i, 1e-8) || !is_orthonormal(U_j, 1e-8))
        throw InvalidInputError("affinity_between: inputs must have orthonormal columns");
    const Mat G = matmul_tn(U_i, U_j);
    const double aff = frobenius_norm(G) /
                       std::sqrt(static_cast<double>(std::min(U_i.cols(), U_j.cols())));
    return std::clamp(aff, 0.0, 1.0);
}

Dataset sample_dataset(const SubspaceEnsemble& ensemble, double density, double sigma,
                       std::uint64_t seed) {
    if (density < 1.0) throw InvalidInputError("sample_dataset: density must be >= 1");
    if (sigma < 0.0) throw InvalidInputError("sample_dataset: sigma must be >= 0");

    const std::size_t n = ensemble.n;
    std::size_t N = 0;
    std::vector<std::size_t> counts(ensemble.bases.size());
    for (std::size_t k = 0; k < ensemble.bases.size(); ++k) {
        counts[k] = static_cast<std::size_t>(std::floor(density * ensemble.dims[k]));
        N += counts[k];
    }

    Dataset data;
    data.points = Mat(n, N);
    data.labels = std::vector<int>(N);

    const double noise_sd = sigma / std::sqrt(static_cast<double>(n));
    std::size_t col = 0;
    for (std::size_t k = 0; k < ensemble.bases.size(); ++k) {
        // Per-cluster substream so parallel generation stays schedule-independent.
        Rng rng(derive_seed(seed, k + 1));
        const Mat& U = ensemble.bases[k];
        for (std::size_t t = 0; t < counts[k]; ++t) {
            const Vec g = rng.unit_sphere(ensemble.dims[k]);
            Vec x = matvec(U, g); // unit norm: U has orthonormal columns
            for (std::size_t i = 0; i < n; ++i) x[i] += noise_sd * rng.normal();
            data.points.set_col(col, x);
            (*data.labels)[col] = static_cast<int>(k);
            ++col;
        }
    }
    return data;
}

} // namespace ssc
