#include "ssc/solver.hpp"

#include <algorithm>
#include <cmath>

namespace ssc {

namespace {

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

// Covariance-form workspace: coordinate updates run on G = Y^T Y and
// b = Y^T y, so one sweep costs O(m^2) regardless of the ambient dimension.
struct LassoWorkspace {
    Mat gram;     // m x m
    Vec b;        // Y^T y
    Vec diag;     // column squared norms
    std::size_t m = 0;

    LassoWorkspace(const Mat& Y, const Vec& y)
        : gram(matmul_tn(Y, Y)), b(matvec_t(Y, y)), m(Y.cols()) {
        diag.resize(m);
        for (std::size_t j = 0; j < m; ++j) diag[j] = gram(j, j);
    }

    // Subgradient violation computed from the maintained q = G c.
    double kkt(const Vec& c, const Vec& q, double lambda) const {
        double worst = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double g = q[j] - b[j]; // y_j^T (Yc - y)
            double viol;
            if (c[j] != 0.0)
                viol = std::fabs(g + lambda * (c[j] > 0.0 ? 1.0 : -1.0));
            else
                viol = std::max(0.0, std::fabs(g) - lambda);
            worst = std::max(worst, viol);
        }
        return worst;
    }
};

// Cyclic coordinate descent with exact soft-threshold updates. `c` is the
// warm start and is overwritten with the solution.
void cd_lasso(const LassoWorkspace& ws, double lambda, const SolveConfig& cfg, Vec& c) {
    const std::size_t m = ws.m;
    Vec q = Vec(m, 0.0); // q = G c
    for (std::size_t j = 0; j < m; ++j) {
        if (c[j] == 0.0) continue;
        const double cj = c[j];
        for (std::size_t i = 0; i < m; ++i) q[i] += ws.gram(i, j) * cj;
    }

    for (int it = 0; it < cfg.max_iter; ++it) {
        double max_change = 0.0;
        double max_c = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (ws.diag[j] <= 0.0) { c[j] = 0.0; continue; }
            const double z = ws.b[j] - (q[j] - ws.diag[j] * c[j]);
            const double cj_new = soft_threshold(z, lambda) / ws.diag[j];
            const double delta = cj_new - c[j];
            if (delta != 0.0) {
                c[j] = cj_new;
                for (std::size_t i = 0; i < m; ++i) q[i] += ws.gram(i, j) * delta;
            }
            max_change = std::max(max_change, std::fabs(delta));
            max_c = std::max(max_c, std::fabs(c[j]));
        }
        if (max_change <= cfg.tol * (1.0 + max_c)) {
            // Stationary per coordinate change; accept only with a KKT
            // certificate. Recompute q first so incremental roundoff drift
            // cannot fail the check.
            std::fill(q.begin(), q.end(), 0.0);
            for (std::size_t j = 0; j < m; ++j) {
                if (c[j] == 0.0) continue;
                const double cj = c[j];
                for (std::size_t i = 0; i < m; ++i) q[i] += ws.gram(i, j) * cj;
            }
            if (ws.kkt(c, q, lambda) <= 10.0 * cfg.tol) return;
        }
    }
    throw ConvergenceError("solve_lasso: iteration cap reached", c, ws.kkt(c, q, lambda));
}

void validate_inputs(const Dictionary& dict, const Vec& target, double lambda,
                     const SolveConfig& cfg) {
    if (dict.n() < 1 || dict.m() < 1) throw InvalidInputError("solver: empty dictionary");
    if (target.size() != dict.n()) throw InvalidInputError("solver: target length != n");
    if (!dict.Y.all_finite() || !all_finite(target))
        throw InvalidInputError("solver: non-finite input entries");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidInputError("solver: lambda must be positive");
    if (!(cfg.tol > 0.0) || cfg.max_iter < 1 || cfg.support_threshold < 0.0)
        throw InvalidInputError("solver: invalid SolveConfig");
}

} // namespace

void refresh_support(Coefficients& c, double support_threshold_rel) {
    const double thr = support_threshold_rel * std::max(1.0, max_abs(c.values));
    c.support_threshold = thr;
    c.support.clear();
    for (std::size_t j = 0; j < c.values.size(); ++j)
        if (std::fabs(c.values[j]) > thr) c.support.push_back(j);
}

Coefficients solve_lasso(const Dictionary& dict, const Vec& target, double lambda,
                         const SolveConfig& cfg) {
    validate_inputs(dict, target, lambda, cfg);
    LassoWorkspace ws(dict.Y, target);
    Coefficients out;
    out.values.assign(dict.m(), 0.0);
    cd_lasso(ws, lambda, cfg, out.values);
    refresh_support(out, cfg.support_threshold);
    return out;
}

Coefficients solve_weighted_lasso(const Dictionary& dict, const Vec& target, double lambda,
                                  const Vec& weights, const SolveConfig& cfg) {
    validate_inputs(dict, target, lambda, cfg);
    if (weights.size() != dict.m()) throw InvalidInputError("solver: weights length != m");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw InvalidInputError("solver: weights must be positive");

    // Change of variable d = W c: solve the plain LASSO on Y W^{-1}.
    Dictionary scaled{Mat(dict.n(), dict.m())};
    for (std::size_t j = 0; j < dict.m(); ++j) {
        const double* src = dict.Y.col(j);
        double* dst = scaled.Y.col(j);
        const double inv_w = 1.0 / weights[j];
        for (std::size_t i = 0; i < dict.n(); ++i) dst[i] = src[i] * inv_w;
    }
    Coefficients d = solve_lasso(scaled, target, lambda, cfg);

    Coefficients out;
    out.values.resize(dict.m());
    for (std::size_t j = 0; j < dict.m(); ++j) out.values[j] = d.values[j] / weights[j];
    refresh_support(out, cfg.support_threshold);
    return out;
}

ConstrainedL1Result solve_constrained_l1(const Dictionary& dict, const Vec& target, double tau,
                                         const SolveConfig& cfg) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw InvalidInputError("solver: tau must be positive");
    validate_inputs(dict, target, 1.0, cfg);

    const double ynorm = norm2(target);
    ConstrainedL1Result res;
    res.coeffs.values.assign(dict.m(), 0.0);

    LassoWorkspace ws(dict.Y, target);
    const double lambda_max = norm_inf(ws.b);

    if (ynorm <= tau || lambda_max == 0.0) {
        // c = 0 is feasible (and l1-minimal), or no column correlates with y at all.
        refresh_support(res.coeffs, cfg.support_threshold);
        res.residual_norm = ynorm;
        res.lambda = std::max(lambda_max, 1e-12);
        res.constraint_met = ynorm <= tau + 10.0 * cfg.tol;
        return res;
    }

    const double stop = 1e-8 * std::max(1.0, tau);
    auto resid_norm = [&](const Vec& c) { return norm2(residual(dict.Y, c, target)); };

    // Shrink lambda geometrically until the residual drops below tau.
    double hi = lambda_max, lo = lambda_max;
    Vec c(dict.m(), 0.0);
    double r_lo = ynorm;
    while (true) {
        lo *= 0.5;
        cd_lasso(ws, lo, cfg, c);
        r_lo = resid_norm(c);
        if (r_lo < tau || lo <= 1e-12) break;
        hi = lo;
    }

    double lambda = lo, r = r_lo;
    if (r_lo >= tau) {
        // Even at the lambda floor the constraint cannot be met: return the
        // best achievable fit and flag it.
        res.coeffs.values = c;
        refresh_support(res.coeffs, cfg.support_threshold);
        res.residual_norm = r_lo;
        res.lambda = lo;
        res.constraint_met = r_lo <= tau + 10.0 * cfg.tol;
        return res;
    }

    for (int it = 0; it < 200 && std::fabs(r - tau) > stop; ++it) {
        lambda = 0.5 * (lo + hi);
        cd_lasso(ws, lambda, cfg, c);
        r = resid_norm(c);
        if (r < tau) lo = lambda; else hi = lambda;
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }

    res.coeffs.values = c;
    refresh_support(res.coeffs, cfg.support_threshold);
    res.residual_norm = r;
    res.lambda = lambda;
    res.constraint_met = r <= tau + 10.0 * cfg.tol;
    return res;
}

double kkt_residual(const Dictionary& dict, const Vec& target, double lambda,
                    const Vec& weights, const Coefficients& coeffs) {
    if (coeffs.values.size() != dict.m() || weights.size() != dict.m() ||
        target.size() != dict.n())
        throw InvalidInputError("kkt_residual: dimension mismatch");

    const Vec r = residual(dict.Y, coeffs.values, target); // y - Yc
    double worst = 0.0;
    for (std::size_t j = 0; j < dict.m(); ++j) {
        const double g = -dot(dict.Y.col_vec(j), r); // y_j^T (Yc - y)
        const double cj = coeffs.values[j];
        double viol;
        if (cj != 0.0)
            viol = std::fabs(g / weights[j] + lambda * (cj > 0.0 ? 1.0 : -1.0));
        else
            viol = std::max(0.0, std::fabs(g) / weights[j] - lambda);
        worst = std::max(worst, viol);
    }
    return worst;
}

} // namespace ssc
