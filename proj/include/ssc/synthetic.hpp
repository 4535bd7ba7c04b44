#pragma once

#include "ssc/linalg.hpp"
#include "ssc/pipeline_types.hpp"

#include <cstdint>
#include <vector>

namespace ssc {

// Orthonormal bases U_1..U_L of the ground-truth subspaces.
struct SubspaceEnsemble {
    std::vector<Mat> bases; // each n x d_k, orthonormal columns
    std::size_t n = 0;
    std::vector<std::size_t> dims;
};

struct GenerationConfig {
    std::size_t n = 100;
    std::size_t L = 3;
    std::size_t d = 4;
    double rho = 0.5;      // target pairwise subspace affinity
    double density = 5.0;  // samples per subspace dimension
    double sigma = 0.25;   // ambient noise scale
    std::uint64_t seed = 0;
};

// L subspaces of common dimension d with aff(i, j) = rho for every pair,
// built from one shared orthonormal block and L mutually orthogonal private
// blocks mixed with cos(theta) = sqrt(rho), then rotated by a seeded random
// orthogonal frame. Requires 2*L*d <= n.
SubspaceEnsemble build_equiaffine_subspaces(std::size_t n, std::size_t L, std::size_t d,
                                            double rho, std::uint64_t seed);

// ||U_i^T U_j||_F / sqrt(min(d_i, d_j)), clamped to [0, 1].
double affinity_between(const Mat& U_i, const Mat& U_j);

// floor(density * d_k) samples per subspace: unit-sphere signals in the
// subspace plus ambient N(0, sigma^2/n I) noise; labels record the subspace.
Dataset sample_dataset(const SubspaceEnsemble& ensemble, double density, double sigma,
                       std::uint64_t seed);

} // namespace ssc
