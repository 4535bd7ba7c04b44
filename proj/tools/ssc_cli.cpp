#include "ssc/errors.hpp"
#include "ssc/experiment.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

namespace {

// Exit codes: 0 success, 1 config error, 2 data error, 3 numerical failure.
int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ssc::InvalidInputError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ssc::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse subspace clustering via two-step reweighted l1 minimization"};
    app.require_subcommand(1);

    std::string config_path, out_path, dataset_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
    bool threads_set = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_path, "output path (overrides config)");
        sub->add_option("--seed", seed, "seed (overrides config)")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--threads", threads, "worker threads (0 = auto)")
            ->each([&](const std::string&) { threads_set = true; });
    };

    CLI::App* gen = app.add_subcommand("generate", "generate a synthetic dataset CSV");
    add_common(gen);

    CLI::App* cluster = app.add_subcommand("cluster", "cluster a dataset end to end");
    add_common(cluster);
    std::size_t L_override = 0;
    bool estimate_L = false;
    cluster->add_option("--data", dataset_path, "dataset CSV (otherwise generated from config)");
    cluster->add_option("--L", L_override, "number of clusters");
    cluster->add_flag("--estimate-L", estimate_L, "estimate L from the affinity eigengap");
    bool unweighted = false;
    cluster->add_flag("--unweighted", unweighted, "disable the weighting rule");

    CLI::App* sweep = app.add_subcommand("sweep", "run the (sigma, rho, epsilon, seed) sweep");
    add_common(sweep);

    CLI::App* verify = app.add_subcommand("verify-duality", "duality checks on random instances");
    add_common(verify);
    std::size_t instances = 200;
    verify->add_option("--instances", instances, "number of random instances");

    CLI::App* events = app.add_subcommand("events", "Monte-Carlo event probability estimates");
    add_common(events);

    CLI11_PARSE(app, argc, argv);

    return guarded([&]() -> int {
        ssc::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = ssc::load_config_json(config_path);
        if (!out_path.empty()) cfg.out = out_path;
        if (seed_set) {
            cfg.generation.seed = seed;
            cfg.spectral.seed = seed;
        }
        if (threads_set) cfg.pipeline.threads = threads;

        if (gen->parsed()) return ssc::cmd_generate(cfg);
        if (cluster->parsed()) {
            if (unweighted) cfg.pipeline.weighted = false;
            return ssc::cmd_cluster(cfg, dataset_path, L_override, estimate_L);
        }
        if (sweep->parsed()) return ssc::cmd_sweep(cfg);
        if (verify->parsed()) return ssc::cmd_verify_duality(cfg, instances);
        if (events->parsed()) return ssc::cmd_events(cfg);
        return 1;
    });
}
