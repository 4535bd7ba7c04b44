#pragma once

#include "ssc/linalg.hpp"
#include "ssc/solver.hpp"

#include <cstddef>
#include <vector>

namespace ssc {

// Optimal point of the dual polyhedron projection, together with the
// regularization level it certifies.
struct DualPoint {
    Vec z;
    double lambda = 0.0;
};

// Partition of the m scalar dual constraints into positively active,
// negatively active, and inactive index sets.
struct ConstraintPartition {
    std::vector<std::size_t> plus;
    std::vector<std::size_t> minus;
    std::vector<std::size_t> inactive;
    double tol_used = 0.0;
};

struct SupportActivityReport {
    std::vector<std::size_t> violations; // support entries outside the active set
};

// Boundary vectors of the dual polyhedron plus an orthonormal null-space
// completion: y_i^T bar_y_j = lambda * delta_ij and Y^T n_k = 0.
struct BoundaryDictionary {
    Mat bar_y;      // n x m
    Mat null_basis; // n x (n - m), orthonormal columns
    double lambda = 0.0;
};

// Decomposition of the target over the anchor dictionary
// {boundary vectors of inactive constraints, data columns of active
// constraints, null-space basis}.
struct RepresentationWitness {
    std::vector<std::size_t> inactive; // indices the a coefficients refer to
    std::vector<std::size_t> active;   // indices the b coefficients refer to (plus then minus)
    Vec a;
    Vec b;
    Vec h;
    double reconstruction_error = 0.0;
    double target_norm = 0.0;
};

// z = y - Yc, the primal residual of a converged weighted-LASSO solve.
// Throws StaleSolutionError when z violates dual feasibility by more than
// 1e-4 * lambda, i.e. when coeffs was not actually optimal.
DualPoint dual_residual(const Vec& target, const Dictionary& dict, const Vec& weights,
                        const Coefficients& coeffs, double lambda);

ConstraintPartition classify_constraints(const DualPoint& z, const Dictionary& dict,
                                         const Vec& weights, double activity_tol = 1e-6);

SupportActivityReport check_support_activity(const Coefficients& coeffs, const ConstraintPartition& partition);

// Requires m < n and full column rank.
BoundaryDictionary boundary_dictionary(const Dictionary& dict, double lambda);

// Solves the square anchor system for the target. The boundary vectors are
// rescaled to w_j * bar_y_j so the decomposition matches the weighted
// problem's scaled dictionary.
RepresentationWitness representation_witness(const Vec& target, const Dictionary& dict,
                                             const DualPoint& z,
                                             const ConstraintPartition& partition,
                                             const BoundaryDictionary& boundary,
                                             const Vec& weights, const Coefficients& coeffs);

// |a_j| < 1 + slack, b_j >= -slack, reconstruction error within slack.
bool verify_witness(const RepresentationWitness& w, double slack);

} // namespace ssc
