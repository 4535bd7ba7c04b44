#pragma once

#include "ssc/linalg.hpp"
#include "ssc/pipeline.hpp"

#include <cstdint>
#include <vector>

namespace ssc {

struct Labeling {
    std::vector<int> labels;
    std::size_t L = 0;
};

struct SpectralConfig {
    int kmeans_restarts = 10;
    int kmeans_max_iter = 300;
    std::uint64_t seed = 0;
    double eig_tol = 1e-10;
};

struct EigenDecomposition {
    Vec values;   // ascending
    Mat vectors;  // orthonormal columns, matching order
};

// L_sym = I - D^{-1/2} G D^{-1/2}; zero-degree vertices get a zero scaling
// factor (their row reduces to the identity row).
Mat normalized_laplacian(const AffinityGraph& graph);

// Cyclic Jacobi rotations. Input must be symmetric within 1e-10.
EigenDecomposition symmetric_eig(const Mat& matrix, double tol = 1e-10);

// Ng-Jordan-Weiss: embed into the L smallest eigenvectors of L_sym,
// row-normalize, k-means++ with seeded restarts.
Labeling spectral_cluster(const AffinityGraph& graph, std::size_t L, const SpectralConfig& cfg);

// Largest eigengap of the L_sym spectrum over 1..max_L; ties break low.
std::size_t estimate_num_clusters(const AffinityGraph& graph, std::size_t max_L);

// Seeded k-means over row vectors (points are rows of X). Exposed for tests.
struct KMeansResult {
    std::vector<int> labels;
    double inertia = 0.0;
};
KMeansResult kmeans(const Mat& X_rows, std::size_t k, const SpectralConfig& cfg);

} // namespace ssc
