#pragma once

#include "ssc/pipeline_types.hpp"
#include "ssc/solver.hpp"

#include <string>
#include <vector>

namespace ssc {

struct PipelineConfig {
    double sigma = 0.25;    // noise scale: tau = 2*sigma, lambda = 0.707*sigma/||c~||_1
    double epsilon = 0.01;  // weighting constant
    bool weighted = true;   // proposed method vs unit-weight baseline
    SolveConfig solver{};
    unsigned threads = 0;   // 0 = hardware concurrency
};

// One regression row: the sparse representation of sample i over Y_{-i}
// (self index removed), plus the per-row parameters actually used.
struct CoefficientRow {
    Coefficients coeffs;    // length N-1
    double lambda = 0.0;
    double coarse_l1 = 0.0; // ||c~_i||_1
    double kkt = 0.0;       // KKT residual of the final weighted solve
    bool degenerate = false;
    std::string diagnostic;
};

struct CoefficientMatrix {
    std::vector<CoefficientRow> rows; // one per sample
    std::size_t N = 0;
    double max_kkt = 0.0;             // worst KKT residual over all rows
};

// Symmetric nonnegative similarity with zero diagonal.
struct AffinityGraph {
    Mat g; // N x N
};

// w_j = epsilon / (|c~_j| + epsilon); always in (0, 1].
Vec compute_weights(const Coefficients& coarse, double epsilon);

// Table of sparse self-representations: constrained l1 pre-solve, the
// lambda rule, the weighting rule, then a weighted LASSO per sample.
CoefficientMatrix two_step_regress(const Dataset& data, const PipelineConfig& cfg);

// Row-normalize (l2), take magnitudes, symmetrize: g_ij = |c_ij| + |c_ji|.
AffinityGraph build_affinity(const CoefficientMatrix& coeffs);

} // namespace ssc
