#include "ssc/metrics.hpp"
#include "ssc/errors.hpp"
#include "ssc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssc {

DiscoveryTally discovery_tally(const CoefficientMatrix& coeffs, const std::vector<int>& labels,
                               double threshold) {
    if (labels.size() != coeffs.N)
        throw InvalidInputError("discovery_tally: labels length != N");

    DiscoveryTally tally;
    tally.threshold = threshold;
    tally.true_count.assign(coeffs.N, 0);
    tally.false_count.assign(coeffs.N, 0);

    for (std::size_t i = 0; i < coeffs.N; ++i) {
        const Vec& v = coeffs.rows[i].coeffs.values;
        for (std::size_t col = 0; col < v.size(); ++col) {
            if (std::fabs(v[col]) <= threshold) continue;
            const std::size_t j = col < i ? col : col + 1; // undo self-removal shift
            if (labels[i] == labels[j])
                ++tally.true_count[i];
            else
                ++tally.false_count[i];
        }
    }
    return tally;
}

double dcr(const CoefficientMatrix& coeffs, double threshold) {
    std::size_t nonzeros = 0;
    for (const auto& row : coeffs.rows)
        for (double v : row.coeffs.values)
            if (std::fabs(v) > threshold) ++nonzeros;
    const double denom = static_cast<double>(coeffs.N) * static_cast<double>(coeffs.N - 1);
    return static_cast<double>(nonzeros) / denom;
}

std::optional<double> tdr(const DiscoveryTally& tally) {
    std::size_t t = 0, total = 0;
    for (std::size_t i = 0; i < tally.true_count.size(); ++i) {
        t += tally.true_count[i];
        total += tally.true_count[i] + tally.false_count[i];
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(t) / static_cast<double>(total);
}

// Jonker-style Hungarian algorithm with potentials, O(n^3), minimizing.
// Input must be square.
namespace {

std::vector<int> min_assignment_square(const Mat& cost) {
    const int n = static_cast<int>(cost.rows());
    const double INF = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, INF);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = INF;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                if (minv[j] < delta) { delta = minv[j]; j1 = j; }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

} // namespace

std::vector<int> max_assignment(const Mat& scores) {
    const std::size_t n = std::max(scores.rows(), scores.cols());
    Mat cost(n, n, 0.0);
    for (std::size_t i = 0; i < scores.rows(); ++i)
        for (std::size_t j = 0; j < scores.cols(); ++j) cost(i, j) = -scores(i, j);
    std::vector<int> a = min_assignment_square(cost);
    a.resize(scores.rows());
    for (auto& c : a)
        if (c >= static_cast<int>(scores.cols())) c = -1; // padded column
    return a;
}

double ccr(const Labeling& predicted, const std::vector<int>& truth) {
    if (predicted.labels.size() != truth.size())
        throw InvalidInputError("ccr: size mismatch");
    const std::size_t N = truth.size();
    if (N == 0) throw InvalidInputError("ccr: empty labeling");

    int max_true = 0;
    for (int t : truth) max_true = std::max(max_true, t);
    int max_pred = 0;
    for (int p : predicted.labels) max_pred = std::max(max_pred, p);
    const std::size_t Lp =
        std::max<std::size_t>(std::max<std::size_t>(predicted.L, 1),
                              static_cast<std::size_t>(max_pred) + 1);
    const std::size_t Lt = static_cast<std::size_t>(max_true) + 1;

    Mat confusion(Lp, Lt, 0.0);
    for (std::size_t i = 0; i < N; ++i)
        confusion(predicted.labels[i], truth[i]) += 1.0;

    const std::vector<int> assign = max_assignment(confusion);
    double matches = 0.0;
    for (std::size_t c = 0; c < Lp; ++c)
        if (assign[c] >= 0) matches += confusion(c, assign[c]);
    return matches / static_cast<double>(N);
}

EventIndicators event_indicators(std::size_t true_count, std::size_t false_count,
                                 const EventSpec& spec) {
    if (spec.k_t < 1) throw InvalidInputError("event_indicators: k_t must be >= 1");
    EventIndicators e;
    const bool few_false = false_count <= spec.k_f;
    e.event1 = (true_count < spec.k_t) && few_false;
    e.event2 = few_false;
    e.event3 = (true_count >= spec.k_t) && few_false;
    return e;
}

namespace {

struct TrialAccumulator {
    std::vector<double> m1, m2, m3; // per-trial sample means

    void add(const DiscoveryTally& tally, const EventSpec& spec) {
        double s1 = 0, s2 = 0, s3 = 0;
        const std::size_t N = tally.true_count.size();
        for (std::size_t i = 0; i < N; ++i) {
            const EventIndicators e =
                event_indicators(tally.true_count[i], tally.false_count[i], spec);
            s1 += e.event1;
            s2 += e.event2;
            s3 += e.event3;
        }
        m1.push_back(s1 / N);
        m2.push_back(s2 / N);
        m3.push_back(s3 / N);
    }

    EventEstimate finalize(std::size_t failed) const {
        EventEstimate est;
        est.trials_used = m1.size();
        est.trials_failed = failed;
        auto mean = [](const std::vector<double>& x) {
            double s = 0;
            for (double v : x) s += v;
            return x.empty() ? 0.0 : s / x.size();
        };
        est.p1 = mean(m1);
        est.p2 = mean(m2);
        est.p3 = mean(m3);
        if (m1.size() >= 2) {
            auto se = [&](const std::vector<double>& x, double mu) {
                double s = 0;
                for (double v : x) s += (v - mu) * (v - mu);
                return std::sqrt(s / (x.size() * (x.size() - 1.0)));
            };
            est.se1 = se(m1, est.p1);
            est.se2 = se(m2, est.p2);
            est.se3 = se(m3, est.p3);
        }
        return est;
    }
};

} // namespace

MonteCarloEventsResult monte_carlo_events(const GenerationConfig& gen, const PipelineConfig& pipe,
                                          const EventSpec& spec, std::size_t trials,
                                          std::uint64_t seed) {
    if (trials < 1) throw InvalidInputError("monte_carlo_events: trials must be >= 1");

    TrialAccumulator acc_w, acc_u;
    std::size_t failed_w = 0, failed_u = 0;

    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(seed, t);
        const SubspaceEnsemble ens =
            build_equiaffine_subspaces(gen.n, gen.L, gen.d, gen.rho, trial_seed);
        const Dataset data =
            sample_dataset(ens, gen.density, gen.sigma, derive_seed(trial_seed, 0xda7a));

        for (bool weighted : {true, false}) {
            PipelineConfig cfg = pipe;
            cfg.weighted = weighted;
            try {
                const CoefficientMatrix cm = two_step_regress(data, cfg);
                const DiscoveryTally tally =
                    discovery_tally(cm, *data.labels, cfg.solver.support_threshold);
                (weighted ? acc_w : acc_u).add(tally, spec);
            } catch (const std::exception&) {
                ++(weighted ? failed_w : failed_u);
            }
        }
    }

    MonteCarloEventsResult res;
    res.weighted = acc_w.finalize(failed_w);
    res.unweighted = acc_u.finalize(failed_u);
    return res;
}

} // namespace ssc
