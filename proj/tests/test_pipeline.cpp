#include <doctest.h>

#include "ssc/duality.hpp"
#include "ssc/errors.hpp"
#include "ssc/pipeline.hpp"
#include "ssc/rng.hpp"
#include "ssc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace ssc;

namespace {

Dataset small_synthetic(std::uint64_t seed, double sigma = 0.1) {
    const SubspaceEnsemble ens = build_equiaffine_subspaces(16, 2, 2, 0.2, seed);
    return sample_dataset(ens, 4.0, sigma, seed + 1);
}

} // namespace

TEST_CASE("weight rule reproduces the worked two-coefficient example") {
    Coefficients coarse;
    coarse.values = {0.02, 0.91};
    const Vec w = compute_weights(coarse, 0.01);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == doctest::Approx(0.333).epsilon(2e-3));
    CHECK(w[1] == doctest::Approx(0.011).epsilon(5e-2));
    // 3-decimal rounding as printed in the source of the example
    CHECK(std::round(w[0] * 1000.0) == 333.0);
    CHECK(std::round(w[1] * 1000.0) == 11.0);
}

TEST_CASE("weight rule edge values") {
    SUBCASE("zero coarse vector gives unit weights") {
        Coefficients coarse;
        coarse.values = {0.0, 0.0, 0.0};
        const Vec w = compute_weights(coarse, 0.01);
        for (double v : w) CHECK(v == 1.0);
    }
    SUBCASE("magnitude equal to epsilon gives one half") {
        Coefficients coarse;
        coarse.values = {0.01};
        const Vec w = compute_weights(coarse, 0.01);
        CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("weights lie in (0, 1]") {
        Rng rng(8);
        Coefficients coarse;
        for (int i = 0; i < 40; ++i) coarse.values.push_back(rng.normal());
        const Vec w = compute_weights(coarse, 0.02);
        for (double v : w) {
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
    }
    SUBCASE("epsilon must be positive") {
        Coefficients coarse;
        coarse.values = {1.0};
        CHECK_THROWS_AS(compute_weights(coarse, 0.0), InvalidInputError);
    }
}

TEST_CASE("duplicate point is recovered exactly by its twin") {
    // Three points with y2 == y0; the regression for point 2 should select
    // point 0 (its first remaining neighbor) and nothing else.
    Mat pts(4, 3, 0.0);
    pts(0, 0) = 1.0;                  // y0 = e0
    pts(1, 1) = 1.0;                  // y1 = e1
    pts(0, 2) = 1.0;                  // y2 = e0 = y0
    Dataset data{pts, std::nullopt};

    PipelineConfig cfg;
    cfg.sigma = 0.01;
    cfg.epsilon = 0.01;
    const CoefficientMatrix cm = two_step_regress(data, cfg);
    REQUIRE(cm.rows.size() == 3);
    const CoefficientRow& row = cm.rows[2];
    CHECK(!row.degenerate);
    REQUIRE(row.coeffs.support.size() == 1);
    CHECK(row.coeffs.support[0] == 0);
    CHECK(row.coeffs.values[0] == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("unweighted runs equal explicit unit-weight solves bit for bit") {
    const Dataset data = small_synthetic(21);
    PipelineConfig cfg;
    cfg.sigma = 0.1;
    cfg.weighted = false;
    cfg.threads = 1;
    const CoefficientMatrix cm = two_step_regress(data, cfg);

    const std::size_t N = data.N();
    for (std::size_t i = 0; i < N; ++i) {
        const CoefficientRow& row = cm.rows[i];
        if (row.degenerate) continue;
        // Rebuild Y_{-i} and run step 4 with explicit unit weights.
        Mat Y(data.n(), N - 1);
        std::size_t c = 0;
        for (std::size_t j = 0; j < N; ++j)
            if (j != i) Y.set_col(c++, data.points.col_vec(j));
        const Vec ones(N - 1, 1.0);
        const Coefficients ref =
            solve_weighted_lasso(Dictionary{Y}, data.points.col_vec(i), row.lambda, ones,
                                 cfg.solver);
        REQUIRE(ref.values.size() == row.coeffs.values.size());
        for (std::size_t j = 0; j < ref.values.size(); ++j)
            CHECK(ref.values[j] == row.coeffs.values[j]); // bitwise
    }
}

TEST_CASE("lambda rule and self-exclusion hold on a synthetic run") {
    const Dataset data = small_synthetic(3);
    PipelineConfig cfg;
    cfg.sigma = 0.1;
    const CoefficientMatrix cm = two_step_regress(data, cfg);
    REQUIRE(cm.N == data.N());
    for (const CoefficientRow& row : cm.rows) {
        REQUIRE(row.coeffs.values.size() == data.N() - 1); // self index removed
        if (row.degenerate) continue;
        CHECK(row.coarse_l1 > 0.0);
        CHECK(std::fabs(row.lambda - 0.707 * cfg.sigma / row.coarse_l1) <=
              1e-12 * std::max(1.0, row.lambda));
    }
}

TEST_CASE("regression output is independent of the thread count") {
    const Dataset data = small_synthetic(14);
    PipelineConfig a;
    a.sigma = 0.1;
    a.threads = 1;
    PipelineConfig b = a;
    b.threads = 4;
    const CoefficientMatrix ca = two_step_regress(data, a);
    const CoefficientMatrix cb = two_step_regress(data, b);
    for (std::size_t i = 0; i < ca.rows.size(); ++i) {
        CHECK(ca.rows[i].lambda == cb.rows[i].lambda);
        CHECK(ca.rows[i].coeffs.values == cb.rows[i].coeffs.values);
    }
}

TEST_CASE("a zero sample degrades to a diagnosed empty row, not an abort") {
    Mat pts(3, 4, 0.0);
    pts(0, 0) = 1.0;
    pts(1, 1) = 1.0;
    pts(2, 2) = 1.0;
    // column 3 stays zero: tau = 2*sigma >= ||y_3|| = 0
    Dataset data{pts, std::nullopt};
    PipelineConfig cfg;
    cfg.sigma = 0.05;
    const CoefficientMatrix cm = two_step_regress(data, cfg);
    const CoefficientRow& row = cm.rows[3];
    CHECK(row.degenerate);
    CHECK(!row.diagnostic.empty());
    for (double v : row.coeffs.values) CHECK(v == 0.0);
    CHECK(row.coeffs.support.empty());
}

TEST_CASE("two_step_regress validates its inputs") {
    Mat pts(2, 2, 1.0);
    Dataset tiny{pts, std::nullopt};
    PipelineConfig cfg;
    CHECK_THROWS_AS(two_step_regress(tiny, cfg), InvalidInputError); // N >= 3

    Dataset ok{Mat(2, 3, 1.0), std::nullopt};
    PipelineConfig bad;
    bad.sigma = 0.0;
    CHECK_THROWS_AS(two_step_regress(ok, bad), InvalidInputError);
    bad.sigma = 0.1;
    bad.epsilon = -1.0;
    CHECK_THROWS_AS(two_step_regress(ok, bad), InvalidInputError);
}

TEST_CASE("affinity graph on hand-built coefficient rows") {
    SUBCASE("two points referencing each other give g = [[0,2],[2,0]]") {
        CoefficientMatrix cm;
        cm.N = 2;
        cm.rows.resize(2);
        cm.rows[0].coeffs.values = {1.0};
        cm.rows[1].coeffs.values = {1.0};
        const AffinityGraph g = build_affinity(cm);
        CHECK(g.g(0, 0) == 0.0);
        CHECK(g.g(1, 1) == 0.0);
        CHECK(g.g(0, 1) == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(g.g(1, 0) == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("all-zero coefficients give the zero graph") {
        CoefficientMatrix cm;
        cm.N = 3;
        cm.rows.resize(3);
        for (auto& r : cm.rows) r.coeffs.values = {0.0, 0.0};
        const AffinityGraph g = build_affinity(cm);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(g.g(i, j) == 0.0);
    }
    SUBCASE("asymmetric support still produces a positive symmetric entry") {
        CoefficientMatrix cm;
        cm.N = 3;
        cm.rows.resize(3);
        cm.rows[0].coeffs.values = {-0.6, 0.8}; // selects points 1 and 2
        cm.rows[1].coeffs.values = {0.0, 0.0};
        cm.rows[2].coeffs.values = {0.0, 0.0};
        const AffinityGraph g = build_affinity(cm);
        // Row 0 is already unit norm; magnitudes survive.
        CHECK(g.g(0, 1) == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(g.g(1, 0) == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(g.g(0, 2) == doctest::Approx(0.8).epsilon(1e-15));
    }
}

TEST_CASE("affinity symmetry, nonnegativity, and zero diagonal on real runs") {
    const Dataset data = small_synthetic(99);
    PipelineConfig cfg;
    cfg.sigma = 0.1;
    const AffinityGraph g = build_affinity(two_step_regress(data, cfg));
    const std::size_t N = data.N();
    for (std::size_t i = 0; i < N; ++i) {
        CHECK(g.g(i, i) == 0.0);
        for (std::size_t j = 0; j < N; ++j) {
            CHECK(g.g(i, j) == g.g(j, i));
            CHECK(g.g(i, j) >= 0.0);
        }
    }
}

TEST_CASE("every pipeline row satisfies the support-activity property") {
    // Reconstruct the per-row weighted problem and confirm the solution's
    // support sits inside the active set of its own dual point.
    const Dataset data = small_synthetic(123, 0.15);
    PipelineConfig cfg;
    cfg.sigma = 0.15;
    cfg.epsilon = 0.02;
    const std::size_t N = data.N();

    for (const bool weighted : {true, false}) {
        PipelineConfig run = cfg;
        run.weighted = weighted;
        const CoefficientMatrix cm = two_step_regress(data, run);
        for (std::size_t i = 0; i < N; ++i) {
            const CoefficientRow& row = cm.rows[i];
            if (row.degenerate) continue;

            Mat Y(data.n(), N - 1);
            std::size_t c = 0;
            for (std::size_t j = 0; j < N; ++j)
                if (j != i) Y.set_col(c++, data.points.col_vec(j));
            const Dictionary dict{Y};
            const Vec y = data.points.col_vec(i);

            Vec w(N - 1, 1.0);
            if (weighted) {
                const ConstrainedL1Result coarse =
                    solve_constrained_l1(dict, y, 2.0 * run.sigma, run.solver);
                w = compute_weights(coarse.coeffs, run.epsilon);
            }

            const DualPoint z = dual_residual(y, dict, w, row.coeffs, row.lambda);
            const ConstraintPartition part = classify_constraints(z, dict, w);
            const SupportActivityReport rep = check_support_activity(row.coeffs, part);
            CHECK(rep.violations.empty());
        }
    }
}
