#pragma once

#include "ssc/errors.hpp"
#include "ssc/linalg.hpp"

#include <cstddef>
#include <vector>

namespace ssc {

// Regression dictionary: m ambient columns of dimension n.
struct Dictionary {
    Mat Y; // n x m

    std::size_t n() const { return Y.rows(); }
    std::size_t m() const { return Y.cols(); }
};

struct SolveConfig {
    double tol = 1e-8;       // relative coordinate-change tolerance
    int max_iter = 100000;   // full coordinate sweeps
    // Reported-zero cutoff, relative: effective threshold is
    // support_threshold * max(1, max|c_j|).
    double support_threshold = 1e-6;
};

struct Coefficients {
    Vec values;
    std::vector<std::size_t> support; // indices with |c_j| above the effective threshold
    double support_threshold = 0.0;   // the effective (absolute) threshold used
};

// Result of the quadratically-constrained l1 solve. Carries the bisection
// endpoint so callers can reuse the equivalent LASSO level.
struct ConstrainedL1Result {
    Coefficients coeffs;
    double residual_norm = 0.0;
    double lambda = 0.0;        // LASSO level whose solution was returned
    bool constraint_met = true; // false when ||y - Yc|| > tau + 10*tol
};

// min_c lambda*||c||_1 + 0.5*||y - Yc||_2^2 by cyclic coordinate descent.
Coefficients solve_lasso(const Dictionary& dict, const Vec& target, double lambda,
                         const SolveConfig& cfg = {});

// As above with per-coefficient penalties lambda*||W c||_1; solved on the
// column-scaled dictionary Y W^{-1} and mapped back through c = W^{-1} d.
Coefficients solve_weighted_lasso(const Dictionary& dict, const Vec& target, double lambda,
                                  const Vec& weights, const SolveConfig& cfg = {});

// min ||c||_1  s.t.  ||y - Yc||_2 <= tau, via bisection on the LASSO level
// (the LASSO residual norm is nondecreasing in lambda).
ConstrainedL1Result solve_constrained_l1(const Dictionary& dict, const Vec& target, double tau,
                                         const SolveConfig& cfg = {});

// Max subgradient violation of the weighted-LASSO optimality conditions;
// zero exactly at the optimum.
double kkt_residual(const Dictionary& dict, const Vec& target, double lambda,
                    const Vec& weights, const Coefficients& coeffs);

// Helper shared with Coefficients producers: recompute the support set.
void refresh_support(Coefficients& c, double support_threshold_rel);

} // namespace ssc
