#include "ssc/rng.hpp"

#include <cmath>

namespace ssc {

Vec Rng::unit_sphere(std::size_t n) {
    Vec v = normal_vec(n);
    double nv = norm2(v);
    while (nv < 1e-12) { // astronomically unlikely, but keep it well-defined
        v = normal_vec(n);
        nv = norm2(v);
    }
    for (auto& x : v) x /= nv;
    return v;
}

Mat Rng::orthogonal(std::size_t n) {
    Mat G(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) G(i, j) = normal();
    Mat Q = householder_q(G);
    // Fix column signs against the diagonal of R (= Q^T G) for a Haar draw.
    for (std::size_t j = 0; j < n; ++j) {
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) r += Q(i, j) * G(i, j);
        if (r < 0.0)
            for (std::size_t i = 0; i < n; ++i) Q(i, j) = -Q(i, j);
    }
    return Q;
}

} // namespace ssc
