#pragma once

#include "ssc/pipeline.hpp"
#include "ssc/spectral.hpp"
#include "ssc/synthetic.hpp"

#include <optional>
#include <vector>

namespace ssc {

// Per-sample counts of true and false discoveries.
struct DiscoveryTally {
    std::vector<std::size_t> true_count;
    std::vector<std::size_t> false_count;
    double threshold = 0.0;
};

struct MetricsReport {
    double dcr = 0.0;
    std::optional<double> tdr; // absent when there are no discoveries
    double ccr = 0.0;
    std::size_t total_discoveries = 0;
    std::size_t true_discoveries = 0;
    double threshold = 0.0;
};

struct EventSpec {
    std::size_t k_t = 1; // >= 1
    std::size_t k_f = 0;
};

// Per-sample indicators of the three recovery events.
struct EventIndicators {
    bool event1 = false; // |T| < k_t and |F| <= k_f
    bool event2 = false; // |F| <= k_f
    bool event3 = false; // |T| >= k_t and |F| <= k_f
};

struct EventEstimate {
    double p1 = 0.0, p2 = 0.0, p3 = 0.0;
    std::optional<double> se1, se2, se3; // absent for a single trial
    std::size_t trials_used = 0;
    std::size_t trials_failed = 0;
};

struct MonteCarloEventsResult {
    EventEstimate weighted;
    EventEstimate unweighted;
};

// (i, j) counts as a discovery iff |c*_ij| > threshold.
DiscoveryTally discovery_tally(const CoefficientMatrix& coeffs, const std::vector<int>& labels,
                               double threshold);

double dcr(const CoefficientMatrix& coeffs, double threshold);
std::optional<double> tdr(const DiscoveryTally& tally);

// Fraction of correctly classified points under the best label alignment
// (optimal assignment on the confusion matrix).
double ccr(const Labeling& predicted, const std::vector<int>& truth);

EventIndicators event_indicators(std::size_t true_count, std::size_t false_count,
                                 const EventSpec& spec);

MonteCarloEventsResult monte_carlo_events(const GenerationConfig& gen, const PipelineConfig& pipe,
                                          const EventSpec& spec, std::size_t trials,
                                          std::uint64_t seed);

// Maximum-total assignment on a cost matrix (returns assigned column per
// row, -1 when unassigned). Exposed for the brute-force cross-check.
std::vector<int> max_assignment(const Mat& scores);

} // namespace ssc
