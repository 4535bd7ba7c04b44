#include "ssc/duality.hpp"
#include "ssc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ssc {

DualPoint dual_residual(const Vec& target, const Dictionary& dict, const Vec& weights,
                        const Coefficients& coeffs, double lambda) {
    if (target.size() != dict.n() || weights.size() != dict.m() ||
        coeffs.values.size() != dict.m())
        throw InvalidInputError("dual_residual: dimension mismatch");

    DualPoint dp;
    dp.z = residual(dict.Y, coeffs.values, target);
    dp.lambda = lambda;

    const Vec corr = matvec_t(dict.Y, dp.z);
    double worst = 0.0;
    for (std::size_t j = 0; j < dict.m(); ++j)
        worst = std::max(worst, std::fabs(corr[j]) / weights[j] - lambda);
    if (worst > 1e-4 * lambda)
        throw StaleSolutionError("dual_residual: z infeasible, coefficients not optimal");
    return dp;
}

ConstraintPartition classify_constraints(const DualPoint& z, const Dictionary& dict,
                                         const Vec& weights, double activity_tol) {
    ConstraintPartition p;
    p.tol_used = activity_tol;
    const Vec corr = matvec_t(dict.Y, z.z);
    const double edge = z.lambda * (1.0 - activity_tol);
    for (std::size_t j = 0; j < dict.m(); ++j) {
        const double v = corr[j] / weights[j];
        if (v >= edge)
            p.plus.push_back(j);
        else if (v <= -edge)
            p.minus.push_back(j);
        else
            p.inactive.push_back(j);
    }
    return p;
}

SupportActivityReport check_support_activity(const Coefficients& coeffs, const ConstraintPartition& partition) {
    SupportActivityReport rep;
    auto is_active = [&](std::size_t j) {
        return std::binary_search(partition.plus.begin(), partition.plus.end(), j) ||
               std::binary_search(partition.minus.begin(), partition.minus.end(), j);
    };
    for (std::size_t j : coeffs.support)
        if (!is_active(j)) rep.violations.push_back(j);
    return rep;
}

BoundaryDictionary boundary_dictionary(const Dictionary& dict, double lambda) {
    const std::size_t n = dict.n(), m = dict.m();
    if (m >= n) throw InvalidInputError("boundary_dictionary: requires m < n");

    BoundaryDictionary bd;
    bd.lambda = lambda;

    // Orthonormal null-space basis of Y^T: trailing columns of the full Q of Y.
    const Mat Q = householder_q(dict.Y);
    bd.null_basis = Mat(n, n - m);
    for (std::size_t k = 0; k < n - m; ++k)
        for (std::size_t i = 0; i < n; ++i) bd.null_basis(i, k) = Q(i, m + k);

    // A = [Y  N]; boundary vectors are the first m columns of lambda * (A^T)^{-1}.
    Mat At(n, n);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) At(j, i) = dict.Y(i, j);
    for (std::size_t k = 0; k < n - m; ++k)
        for (std::size_t i = 0; i < n; ++i) At(m + k, i) = bd.null_basis(i, k);

    Mat rhs(n, m);
    for (std::size_t j = 0; j < m; ++j) rhs(j, j) = lambda;
    try {
        bd.bar_y = lu_solve_multi(At, rhs);
    } catch (const SingularError&) {
        throw SingularError("boundary_dictionary: rank-deficient dictionary");
    }
    return bd;
}

RepresentationWitness representation_witness(const Vec& target, const Dictionary& dict,
                                             const DualPoint& z,
                                             const ConstraintPartition& partition,
                                             const BoundaryDictionary& boundary,
                                             const Vec& weights, const Coefficients& coeffs) {
    const std::size_t n = target.size();
    const std::size_t m = weights.size();
    const std::size_t n_null = boundary.null_basis.cols();
    (void)z;
    (void)coeffs;

    RepresentationWitness w;
    w.inactive = partition.inactive;
    w.active = partition.plus;
    w.active.insert(w.active.end(), partition.minus.begin(), partition.minus.end());
    w.target_norm = norm2(target);

    if (dict.n() != n || dict.m() != m)
        throw InvalidInputError("representation_witness: dimension mismatch");
    if (w.inactive.size() + w.active.size() != m)
        throw InvalidInputError("representation_witness: partition does not cover the dictionary");

    // Move the fixed active boundary terms to the right-hand side:
    // y - [sum_plus w_j bar_y_j - sum_minus w_j bar_y_j]
    //   = sum_inactive a_j (w_j bar_y_j) + sum_plus b_j y_j - sum_minus b_j y_j
    //     + sum_k h_k n_k.
    Vec rhs = target;
    for (std::size_t j : partition.plus)
        for (std::size_t i = 0; i < n; ++i) rhs[i] -= weights[j] * boundary.bar_y(i, j);
    for (std::size_t j : partition.minus)
        for (std::size_t i = 0; i < n; ++i) rhs[i] += weights[j] * boundary.bar_y(i, j);

    // Square anchor system: |inactive| + |active| + (n - m) = n unknowns.
    Mat A(n, n);
    std::size_t col = 0;
    for (std::size_t j : w.inactive) {
        for (std::size_t i = 0; i < n; ++i) A(i, col) = weights[j] * boundary.bar_y(i, j);
        ++col;
    }
    // Dictionary columns for the witness, signed per the partition; the
    // b coefficients multiply the raw data columns y_j.
    for (std::size_t j : partition.plus) {
        const double* yj = dict.Y.col(j);
        for (std::size_t i = 0; i < n; ++i) A(i, col) = yj[i];
        ++col;
    }
    for (std::size_t j : partition.minus) {
        const double* yj = dict.Y.col(j);
        for (std::size_t i = 0; i < n; ++i) A(i, col) = -yj[i];
        ++col;
    }
    for (std::size_t k = 0; k < n_null; ++k) {
        for (std::size_t i = 0; i < n; ++i) A(i, col) = boundary.null_basis(i, k);
        ++col;
    }

    Vec sol;
    try {
        sol = lu_solve(A, rhs);
    } catch (const SingularError&) {
        throw SingularError("representation_witness: degenerate anchor geometry");
    }

    w.a.assign(sol.begin(), sol.begin() + w.inactive.size());
    w.b.assign(sol.begin() + w.inactive.size(),
               sol.begin() + w.inactive.size() + w.active.size());
    w.h.assign(sol.begin() + w.inactive.size() + w.active.size(), sol.end());

    Vec recon = matvec(A, sol);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err += (recon[i] - rhs[i]) * (recon[i] - rhs[i]);
    w.reconstruction_error = std::sqrt(err);
    return w;
}

bool verify_witness(const RepresentationWitness& w, double slack) {
    for (double a : w.a)
        if (!(std::fabs(a) < 1.0 + slack)) return false;
    for (double b : w.b)
        if (!(b >= -slack)) return false;
    return w.reconstruction_error <= slack * (1.0 + w.target_norm);
}

} // namespace ssc
