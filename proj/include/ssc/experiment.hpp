#pragma once

#include "ssc/metrics.hpp"
#include "ssc/pipeline.hpp"
#include "ssc/spectral.hpp"
#include "ssc/synthetic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ssc {

inline constexpr int kResultsSchemaVersion = 1;

struct SweepAxes {
    std::vector<double> sigmas;
    std::vector<double> rhos;
    std::vector<double> epsilons;
    std::vector<std::uint64_t> seeds;
};

struct ExperimentConfig {
    GenerationConfig generation{};
    PipelineConfig pipeline{};
    SpectralConfig spectral{};
    SweepAxes sweep{};
    std::optional<EventSpec> events;
    std::size_t event_trials = 20;
    std::string out;
};

// One sweep cell / single clustering run, self-describing.
struct RunRecord {
    double rho = 0.0;
    double sigma = 0.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    bool weighted = true;
    double dcr = 0.0;
    std::optional<double> tdr;
    std::optional<double> ccr;
    std::optional<double> event1, event2, event3;
    double kkt_max = 0.0;
    long long runtime_ms = 0;
    std::size_t degenerate_rows = 0;
    std::string error; // nonempty when the cell failed
};

// --- config & data files -------------------------------------------------

// JSON config file; missing sections keep their defaults.
ExperimentConfig load_config_json(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

// Dataset CSV: header "x1,...,xn[,label]", one point per row, 17 significant
// digits on write.
Dataset load_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& data);

std::string format_double(double v); // shortest round-trip-exact decimal

// --- runs ----------------------------------------------------------------

// Generate data for one cell and run the full pipeline; events computed when
// spec is present (single-trial indicators averaged over samples).
RunRecord run_cell(const GenerationConfig& gen, const PipelineConfig& pipe,
                   const SpectralConfig& spectral, const std::optional<EventSpec>& events);

// --- CLI entry points (return process exit codes) -------------------------

int cmd_generate(const ExperimentConfig& cfg);
int cmd_cluster(const ExperimentConfig& cfg, const std::string& dataset_path,
                std::size_t L_override, bool estimate_L);
int cmd_sweep(const ExperimentConfig& cfg);
int cmd_verify_duality(const ExperimentConfig& cfg, std::size_t instances);
int cmd_events(const ExperimentConfig& cfg);

} // namespace ssc
