#include "ssc/pipeline.hpp"
#include "ssc/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ssc {

Vec compute_weights(const Coefficients& coarse, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidInputError("compute_weights: epsilon must be positive");
    Vec w(coarse.values.size());
    for (std::size_t j = 0; j < w.size(); ++j)
        w[j] = epsilon / (std::fabs(coarse.values[j]) + epsilon);
    return w;
}

namespace {

// Y_{-i}: all data columns with column i removed.
Dictionary drop_column(const Mat& points, std::size_t i) {
    Dictionary d{Mat(points.rows(), points.cols() - 1)};
    std::size_t col = 0;
    for (std::size_t j = 0; j < points.cols(); ++j) {
        if (j == i) continue;
        d.Y.set_col(col++, points.col_vec(j));
    }
    return d;
}

CoefficientRow regress_row(const Dataset& data, const PipelineConfig& cfg, std::size_t i) {
    CoefficientRow row;
    const Dictionary Yi = drop_column(data.points, i);
    const Vec yi = data.points.col_vec(i);

    const ConstrainedL1Result coarse =
        solve_constrained_l1(Yi, yi, 2.0 * cfg.sigma, cfg.solver);
    row.coarse_l1 = norm1(coarse.coeffs.values);

    if (row.coarse_l1 == 0.0) {
        // tau >= ||y_i||: the lambda rule divides by zero. Emit an empty row
        // with a diagnostic instead of aborting the whole sweep.
        row.degenerate = true;
        row.diagnostic = "coarse solve returned zero (tau >= ||y||), lambda rule undefined";
        row.coeffs.values.assign(Yi.m(), 0.0);
        refresh_support(row.coeffs, cfg.solver.support_threshold);
        return row;
    }

    row.lambda = 0.707 * cfg.sigma / row.coarse_l1;
    const Vec w = cfg.weighted ? compute_weights(coarse.coeffs, cfg.epsilon)
                               : Vec(Yi.m(), 1.0);
    row.coeffs = solve_weighted_lasso(Yi, yi, row.lambda, w, cfg.solver);
    row.kkt = kkt_residual(Yi, yi, row.lambda, w, row.coeffs);
    return row;
}

} // namespace

CoefficientMatrix two_step_regress(const Dataset& data, const PipelineConfig& cfg) {
    const std::size_t N = data.N();
    if (N < 3) throw InvalidInputError("two_step_regress: need at least 3 samples");
    if (!(cfg.sigma > 0.0)) throw InvalidInputError("two_step_regress: sigma must be positive");
    if (!(cfg.epsilon > 0.0)) throw InvalidInputError("two_step_regress: epsilon must be positive");

    CoefficientMatrix out;
    out.N = N;
    out.rows.resize(N);

    unsigned nthreads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    nthreads = std::max(1u, std::min<unsigned>(nthreads, static_cast<unsigned>(N)));

    // Rows are independent; each worker claims the next index. Output only
    // depends on the row index, never on scheduling.
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::string> errors(N);

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= N) return;
            try {
                out.rows[i] = regress_row(data, cfg, i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
                failed.store(true);
            }
        }
    };

    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    if (failed.load()) {
        for (std::size_t i = 0; i < N; ++i)
            if (!errors[i].empty())
                throw ConvergenceError("two_step_regress: row " + std::to_string(i) + ": " +
                                           errors[i],
                                       {}, 0.0);
    }

    for (const CoefficientRow& r : out.rows) out.max_kkt = std::max(out.max_kkt, r.kkt);
    return out;
}

AffinityGraph build_affinity(const CoefficientMatrix& coeffs) {
    const std::size_t N = coeffs.N;
    AffinityGraph graph{Mat(N, N)};

    // Embed each row to length N with a zero at the self position and
    // normalize to unit l2 norm (zero rows stay zero).
    Mat c_bar(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        const Vec& v = coeffs.rows[i].coeffs.values;
        const double nrm = norm2(v);
        const double scale = nrm > 0.0 ? 1.0 / nrm : 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            if (j == i) { c_bar(i, j) = 0.0; continue; }
            const std::size_t idx = j < i ? j : j - 1;
            c_bar(i, j) = std::fabs(v[idx]) * scale;
        }
    }
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j)
            graph.g(i, j) = i == j ? 0.0 : c_bar(i, j) + c_bar(j, i);
    }
    return graph;
}

} // namespace ssc
