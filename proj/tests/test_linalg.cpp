#include "ssc/errors.hpp"
#include "ssc/linalg.hpp"
#include "ssc/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace ssc;

TEST_CASE("lu_solve recovers a known solution") {
    Rng rng(11);
    const std::size_t n = 8;
    Mat A(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) A(i, j) = rng.normal();
    Vec x_true = rng.normal_vec(n);
    Vec b = matvec(A, x_true);
    Vec x = lu_solve(A, b);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-9));
}

TEST_CASE("lu_solve rejects singular matrices") {
    Mat A(3, 3);
    A(0, 0) = 1.0;
    A(1, 1) = 1.0; // third row/column zero
    CHECK_THROWS_AS(lu_solve(A, Vec(3, 1.0)), SingularError);
}

TEST_CASE("householder_q gives an orthonormal completion") {
    Rng rng(3);
    const std::size_t n = 10, m = 4;
    Mat A(n, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) A(i, j) = rng.normal();

    Mat Q = householder_q(A);
    Mat QtQ = matmul_tn(Q, Q);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            CHECK(std::fabs(QtQ(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);

    // Trailing columns are orthogonal to range(A).
    for (std::size_t k = m; k < n; ++k) {
        Vec q = Q.col_vec(k);
        Vec At_q = matvec_t(A, q);
        CHECK(norm_inf(At_q) < 1e-12);
    }
}

TEST_CASE("orthogonal draw is orthogonal and seed-deterministic") {
    Rng a(42), b(42);
    Mat Q1 = a.orthogonal(6);
    Mat Q2 = b.orthogonal(6);
    CHECK(Q1.data() == Q2.data());

    Mat QtQ = matmul_tn(Q1, Q1);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(std::fabs(QtQ(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
}
