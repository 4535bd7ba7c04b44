#include <doctest.h>

#include "ssc/errors.hpp"
#include "ssc/metrics.hpp"
#include "ssc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace ssc;

namespace {

// Build a CoefficientMatrix from explicit full-length rows (self entry
// included, must be zero); the self index is stripped the way the pipeline
// stores rows.
CoefficientMatrix matrix_from_full_rows(const std::vector<Vec>& full_rows) {
    CoefficientMatrix cm;
    cm.N = full_rows.size();
    cm.rows.resize(cm.N);
    for (std::size_t i = 0; i < cm.N; ++i) {
        REQUIRE(full_rows[i].size() == cm.N);
        REQUIRE(full_rows[i][i] == 0.0);
        Vec v;
        for (std::size_t j = 0; j < cm.N; ++j)
            if (j != i) v.push_back(full_rows[i][j]);
        cm.rows[i].coeffs.values = v;
    }
    return cm;
}

double brute_force_ccr(const std::vector<int>& pred, const std::vector<int>& truth) {
    int Lp = 1 + *std::max_element(pred.begin(), pred.end());
    int Lt = 1 + *std::max_element(truth.begin(), truth.end());
    const int L = std::max(Lp, Lt);
    std::vector<int> perm(L);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t matches = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (perm[pred[i]] == truth[i]) ++matches;
        best = std::max(best, matches);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(pred.size());
}

} // namespace

TEST_CASE("discovery tally: all-zero coefficients give empty tallies") {
    CoefficientMatrix cm = matrix_from_full_rows({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
    const std::vector<int> labels = {0, 0, 1};
    const DiscoveryTally t = discovery_tally(cm, labels, 1e-6);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(t.true_count[i] == 0);
        CHECK(t.false_count[i] == 0);
    }
}

TEST_CASE("discovery tally: same-cluster-only row has no false discoveries") {
    // 4 points, clusters {0,1} and {2,3}. Row 0 selects only point 1.
    CoefficientMatrix cm = matrix_from_full_rows(
        {{0, 0.8, 0, 0}, {0.5, 0, 0, 0}, {0, 0, 0, 0.3}, {0, 0, 0.3, 0}});
    const std::vector<int> labels = {0, 0, 1, 1};
    const DiscoveryTally t = discovery_tally(cm, labels, 1e-6);
    for (std::size_t i = 0; i < 4; ++i) CHECK(t.false_count[i] == 0);
    CHECK(t.true_count[0] == 1);
    CHECK(t.true_count[2] == 1);
}

TEST_CASE("discovery tally: mixed row counts 3 true and 1 false") {
    // 5 points; point 0 shares cluster 0 with points 1..3, point 4 differs.
    CoefficientMatrix cm = matrix_from_full_rows({{0, 0.2, -0.4, 0.1, 0.05},
                                                  {0, 0, 0, 0, 0},
                                                  {0, 0, 0, 0, 0},
                                                  {0, 0, 0, 0, 0},
                                                  {0, 0, 0, 0, 0}});
    const std::vector<int> labels = {0, 0, 0, 0, 1};
    const DiscoveryTally t = discovery_tally(cm, labels, 1e-6);
    CHECK(t.true_count[0] == 3);
    CHECK(t.false_count[0] == 1);
}

TEST_CASE("discovery tally: the self index is skipped when unshifting columns") {
    // Row 1 selects points 0 and 2 (columns 0 and 1 after self removal).
    CoefficientMatrix cm =
        matrix_from_full_rows({{0, 0, 0}, {1.0, 0, 1.0}, {0, 0, 0}});
    const std::vector<int> labels = {0, 0, 1};
    const DiscoveryTally t = discovery_tally(cm, labels, 1e-6);
    CHECK(t.true_count[1] == 1);
    CHECK(t.false_count[1] == 1);
}

TEST_CASE("discovery tally rejects missing labels length") {
    CoefficientMatrix cm = matrix_from_full_rows({{0, 1}, {1, 0}});
    CHECK_THROWS_AS(discovery_tally(cm, {0}, 1e-6), InvalidInputError);
}

TEST_CASE("dcr arithmetic") {
    SUBCASE("N=3 with one nonzero per row") {
        CoefficientMatrix cm =
            matrix_from_full_rows({{0, 1, 0}, {1, 0, 0}, {0, 1, 0}});
        CHECK(dcr(cm, 1e-6) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("all-zero rows") {
        CoefficientMatrix cm = matrix_from_full_rows({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
        CHECK(dcr(cm, 1e-6) == 0.0);
    }
    SUBCASE("fully dense rows") {
        CoefficientMatrix cm =
            matrix_from_full_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
        CHECK(dcr(cm, 1e-6) == 1.0);
    }
}

TEST_CASE("tdr arithmetic and absence") {
    DiscoveryTally t;
    SUBCASE("all discoveries true") {
        t.true_count = {2, 1};
        t.false_count = {0, 0};
        REQUIRE(tdr(t).has_value());
        CHECK(*tdr(t) == 1.0);
    }
    SUBCASE("tallies (3,1) on a single sample") {
        t.true_count = {3};
        t.false_count = {1};
        REQUIRE(tdr(t).has_value());
        CHECK(*tdr(t) == doctest::Approx(0.75).epsilon(1e-12));
    }
    SUBCASE("no discoveries at all") {
        t.true_count = {0, 0};
        t.false_count = {0, 0};
        CHECK(!tdr(t).has_value());
    }
}

TEST_CASE("dcr/tdr consistency: tdr times total discoveries equals true count") {
    Rng rng(11);
    const std::size_t N = 12;
    std::vector<Vec> rows(N, Vec(N, 0.0));
    std::vector<int> labels(N);
    for (std::size_t i = 0; i < N; ++i) {
        labels[i] = static_cast<int>(i % 3);
        for (std::size_t j = 0; j < N; ++j)
            if (j != i && rng.uniform() < 0.4) rows[i][j] = rng.normal();
    }
    CoefficientMatrix cm = matrix_from_full_rows(rows);
    const DiscoveryTally t = discovery_tally(cm, labels, 1e-6);
    std::size_t truths = 0, total = 0;
    for (std::size_t i = 0; i < N; ++i) {
        truths += t.true_count[i];
        total += t.true_count[i] + t.false_count[i];
    }
    if (total > 0) {
        REQUIRE(tdr(t).has_value());
        CHECK(*tdr(t) * static_cast<double>(total) ==
              doctest::Approx(static_cast<double>(truths)).epsilon(1e-12));
    }
}

TEST_CASE("ccr exact cases") {
    SUBCASE("predicted equals truth") {
        Labeling p{{0, 0, 1, 1, 2}, 3};
        CHECK(ccr(p, {0, 0, 1, 1, 2}) == 1.0);
    }
    SUBCASE("predicted equals truth with ids swapped") {
        Labeling p{{1, 1, 0, 0, 2}, 3};
        CHECK(ccr(p, {0, 0, 1, 1, 2}) == 1.0);
    }
    SUBCASE("half-crossed two-cluster case") {
        Labeling p{{0, 1, 0, 1}, 2};
        CHECK(ccr(p, {0, 0, 1, 1}) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("different numbers of clusters") {
        Labeling p{{0, 1, 2, 3}, 4};
        CHECK(ccr(p, {0, 0, 1, 1}) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("ccr equals the brute-force permutation maximum on random cases") {
    Rng rng(202);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t N = 4 + static_cast<std::size_t>(rng.uniform() * 27.0); // 4..30
        const int L = 2 + static_cast<int>(rng.uniform() * 4.0);                  // 2..5
        std::vector<int> truth(N), pred(N);
        for (std::size_t i = 0; i < N; ++i) {
            truth[i] = static_cast<int>(rng.uniform() * L) % L;
            pred[i] = static_cast<int>(rng.uniform() * L) % L;
        }
        // Make label 0 present in both so L is well-defined.
        truth[0] = 0;
        pred[0] = 0;
        Labeling p{pred, static_cast<std::size_t>(L)};
        CHECK(ccr(p, truth) == doctest::Approx(brute_force_ccr(pred, truth)).epsilon(1e-12));
    }
}

TEST_CASE("ccr respects the majority-class lower bound") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t N = 10;
        std::vector<int> truth(N), pred(N, 0);
        std::vector<std::size_t> counts(3, 0);
        for (std::size_t i = 0; i < N; ++i) {
            truth[i] = static_cast<int>(rng.uniform() * 3.0) % 3;
            ++counts[truth[i]];
            pred[i] = static_cast<int>(rng.uniform() * 3.0) % 3;
        }
        Labeling everything_one_cluster{std::vector<int>(N, 0), 1};
        const double majority =
            static_cast<double>(*std::max_element(counts.begin(), counts.end())) / N;
        CHECK(ccr(everything_one_cluster, truth) == doctest::Approx(majority).epsilon(1e-12));
        // Any L-way prediction matches at least N/L points under the best
        // alignment (averaging over cyclic relabelings).
        CHECK(ccr(Labeling{pred, 3}, truth) >= 1.0 / 3.0 - 1e-12);
    }
}

TEST_CASE("event indicators match their definitions") {
    SUBCASE("(5,0) with k_t=3, k_f=1") {
        const EventIndicators e = event_indicators(5, 0, EventSpec{3, 1});
        CHECK(!e.event1);
        CHECK(e.event2);
        CHECK(e.event3);
    }
    SUBCASE("(0,0) with k_t=1, k_f=0") {
        const EventIndicators e = event_indicators(0, 0, EventSpec{1, 0});
        CHECK(e.event1);
        CHECK(e.event2);
        CHECK(!e.event3);
    }
    SUBCASE("too many false discoveries disables everything") {
        const EventIndicators e = event_indicators(4, 3, EventSpec{2, 1});
        CHECK(!e.event1);
        CHECK(!e.event2);
        CHECK(!e.event3);
    }
    SUBCASE("k_t must be positive") {
        CHECK_THROWS_AS(event_indicators(0, 0, EventSpec{0, 0}), InvalidInputError);
    }
}

TEST_CASE("event identity: event3 == event2 and not event1, over a tally grid") {
    for (std::size_t kt = 1; kt <= 4; ++kt)
        for (std::size_t kf = 0; kf <= 3; ++kf)
            for (std::size_t T = 0; T <= 6; ++T)
                for (std::size_t F = 0; F <= 6; ++F) {
                    const EventIndicators e = event_indicators(T, F, EventSpec{kt, kf});
                    CHECK(e.event3 == (e.event2 && !e.event1));
                }
}

TEST_CASE("hungarian max_assignment agrees with brute force on rectangular scores") {
    Rng rng(314);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t r = 2 + static_cast<std::size_t>(rng.uniform() * 3.99);
        const std::size_t c = 2 + static_cast<std::size_t>(rng.uniform() * 3.99);
        Mat s(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) s(i, j) = rng.uniform() * 10.0;

        const std::vector<int> a = max_assignment(s);
        double got = 0.0;
        std::vector<bool> used(c, false);
        for (std::size_t i = 0; i < r; ++i) {
            if (a[i] < 0) continue;
            CHECK(!used[a[i]]);
            used[a[i]] = true;
            got += s(i, a[i]);
        }

        // Brute force over injections of the shorter side into the longer.
        const std::size_t n = std::max(r, c);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double best = 0.0;
        do {
            double v = 0.0;
            for (std::size_t i = 0; i < r; ++i)
                if (static_cast<std::size_t>(perm[i]) < c) v += s(i, perm[i]);
            best = std::max(best, v);
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(got == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("monte carlo events: reproducible, and SE absent for a single trial") {
    GenerationConfig gen;
    gen.n = 24;
    gen.L = 2;
    gen.d = 2;
    gen.rho = 0.1;
    gen.density = 4;
    gen.sigma = 0.05;
    PipelineConfig pipe;
    pipe.sigma = gen.sigma;
    pipe.epsilon = 0.01;
    const EventSpec spec{1, 0};

    const MonteCarloEventsResult a = monte_carlo_events(gen, pipe, spec, 2, 99);
    const MonteCarloEventsResult b = monte_carlo_events(gen, pipe, spec, 2, 99);
    CHECK(a.weighted.p1 == b.weighted.p1);
    CHECK(a.weighted.p2 == b.weighted.p2);
    CHECK(a.weighted.p3 == b.weighted.p3);
    CHECK(a.unweighted.p3 == b.unweighted.p3);
    CHECK(a.weighted.trials_used == 2);
    REQUIRE(a.weighted.se2.has_value());
    CHECK(*a.weighted.se2 >= 0.0);

    const MonteCarloEventsResult single = monte_carlo_events(gen, pipe, spec, 1, 99);
    CHECK(single.weighted.trials_used == 1);
    CHECK(!single.weighted.se1.has_value());
    CHECK(!single.weighted.se2.has_value());
    CHECK(!single.weighted.se3.has_value());
    CHECK(single.weighted.p2 >= 0.0);
    CHECK(single.weighted.p2 <= 1.0);

    CHECK_THROWS_AS(monte_carlo_events(gen, pipe, spec, 0, 1), InvalidInputError);
}
