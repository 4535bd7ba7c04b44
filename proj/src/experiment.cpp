#include "ssc/experiment.hpp"
#include "ssc/duality.hpp"
#include "ssc/errors.hpp"
#include "ssc/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <tuple>

namespace ssc {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --- config ----------------------------------------------------------------

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInputError(std::string("config: JSON parse error: ") + e.what());
    }

    ExperimentConfig cfg;
    try {
        if (j.contains("generation")) {
            const json& g = j["generation"];
            maybe(g, "n", cfg.generation.n);
            maybe(g, "L", cfg.generation.L);
            maybe(g, "d", cfg.generation.d);
            maybe(g, "rho", cfg.generation.rho);
            maybe(g, "density", cfg.generation.density);
            maybe(g, "sigma", cfg.generation.sigma);
            maybe(g, "seed", cfg.generation.seed);
        }
        if (j.contains("pipeline")) {
            const json& p = j["pipeline"];
            maybe(p, "sigma", cfg.pipeline.sigma);
            maybe(p, "epsilon", cfg.pipeline.epsilon);
            maybe(p, "weighted", cfg.pipeline.weighted);
            maybe(p, "threads", cfg.pipeline.threads);
            if (p.contains("solver")) {
                const json& s = p["solver"];
                maybe(s, "tol", cfg.pipeline.solver.tol);
                maybe(s, "max_iter", cfg.pipeline.solver.max_iter);
                maybe(s, "support_threshold", cfg.pipeline.solver.support_threshold);
            }
        }
        if (j.contains("spectral")) {
            const json& s = j["spectral"];
            maybe(s, "kmeans_restarts", cfg.spectral.kmeans_restarts);
            maybe(s, "kmeans_max_iter", cfg.spectral.kmeans_max_iter);
            maybe(s, "seed", cfg.spectral.seed);
            maybe(s, "eig_tol", cfg.spectral.eig_tol);
        }
        if (j.contains("sweep")) {
            const json& s = j["sweep"];
            maybe(s, "sigmas", cfg.sweep.sigmas);
            maybe(s, "rhos", cfg.sweep.rhos);
            maybe(s, "epsilons", cfg.sweep.epsilons);
            maybe(s, "seeds", cfg.sweep.seeds);
        }
        if (j.contains("events")) {
            const json& e = j["events"];
            EventSpec spec;
            maybe(e, "k_t", spec.k_t);
            maybe(e, "k_f", spec.k_f);
            cfg.events = spec;
            maybe(e, "trials", cfg.event_trials);
        }
        maybe(j, "out", cfg.out);
    } catch (const json::exception& e) {
        throw InvalidInputError(std::string("config: bad field type: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

// --- dataset CSV -------------------------------------------------------------

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("dataset: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("dataset: empty file " + path);

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) header.push_back(tok);
    }
    bool has_label = !header.empty() && header.back() == "label";
    const std::size_t n = header.size() - (has_label ? 1 : 0);
    if (n == 0) throw DataError("dataset: no coordinate columns in header");

    std::vector<Vec> rows;
    std::vector<int> labels;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        Vec row;
        std::size_t colno = 0;
        while (std::getline(ss, tok, ',')) {
            ++colno;
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw DataError("dataset: non-numeric cell at row " + std::to_string(lineno) +
                                ", column " + std::to_string(colno));
            }
            if (used != tok.size())
                throw DataError("dataset: non-numeric cell at row " + std::to_string(lineno) +
                                ", column " + std::to_string(colno));
            row.push_back(v);
        }
        if (row.size() != header.size())
            throw DataError("dataset: row " + std::to_string(lineno) + " has " +
                            std::to_string(row.size()) + " cells, expected " +
                            std::to_string(header.size()));
        if (has_label) {
            const double lv = row.back();
            row.pop_back();
            if (lv != std::floor(lv))
                throw DataError("dataset: non-integer label at row " + std::to_string(lineno));
            labels.push_back(static_cast<int>(lv));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("dataset: header-only file " + path);

    Dataset data;
    data.points = Mat(n, rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) data.points.set_col(j, rows[j]);
    if (has_label) data.labels = std::move(labels);
    return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw DataError("dataset: cannot write " + path);

    for (std::size_t i = 0; i < data.n(); ++i) out << (i ? "," : "") << "x" << (i + 1);
    if (data.labels) out << ",label";
    out << "\n";

    for (std::size_t j = 0; j < data.N(); ++j) {
        for (std::size_t i = 0; i < data.n(); ++i)
            out << (i ? "," : "") << format_double(data.points(i, j));
        if (data.labels) out << "," << (*data.labels)[j];
        out << "\n";
    }
    if (!out) throw DataError("dataset: write failure on " + path);
}

// --- single cell -------------------------------------------------------------

RunRecord run_cell(const GenerationConfig& gen, const PipelineConfig& pipe,
                   const SpectralConfig& spectral, const std::optional<EventSpec>& events) {
    RunRecord rec;
    rec.rho = gen.rho;
    rec.sigma = gen.sigma;
    rec.epsilon = pipe.epsilon;
    rec.seed = gen.seed;
    rec.weighted = pipe.weighted;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const SubspaceEnsemble ens =
            build_equiaffine_subspaces(gen.n, gen.L, gen.d, gen.rho, gen.seed);
        const Dataset data =
            sample_dataset(ens, gen.density, gen.sigma, derive_seed(gen.seed, 0xda7a));

        PipelineConfig pcfg = pipe;
        pcfg.sigma = gen.sigma; // tau and lambda rules follow the generating noise level

        const CoefficientMatrix cm = two_step_regress(data, pcfg);
        rec.kkt_max = cm.max_kkt;
        for (const auto& row : cm.rows) rec.degenerate_rows += row.degenerate ? 1 : 0;

        const double thr = pcfg.solver.support_threshold;
        rec.dcr = dcr(cm, thr);

        const DiscoveryTally tally = discovery_tally(cm, *data.labels, thr);
        rec.tdr = tdr(tally);

        const AffinityGraph graph = build_affinity(cm);
        SpectralConfig scfg = spectral;
        scfg.seed = derive_seed(gen.seed, 0x5eed);
        const Labeling pred = spectral_cluster(graph, gen.L, scfg);
        rec.ccr = ccr(pred, *data.labels);

        if (events) {
            double e1 = 0, e2 = 0, e3 = 0;
            const std::size_t N = tally.true_count.size();
            for (std::size_t i = 0; i < N; ++i) {
                const EventIndicators e =
                    event_indicators(tally.true_count[i], tally.false_count[i], *events);
                e1 += e.event1;
                e2 += e.event2;
                e3 += e.event3;
            }
            rec.event1 = e1 / N;
            rec.event2 = e2 / N;
            rec.event3 = e3 / N;
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    rec.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rec;
}

// --- results CSV ---------------------------------------------------------------

namespace {

const char* kResultsHeader =
    "schema_version,rho,sigma,epsilon,seed,weighted,dcr,tdr,ccr,"
    "event1,event2,event3,kkt_max,runtime_ms,degenerate_rows,error";

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::string record_key(double rho, double sigma, double epsilon, std::uint64_t seed,
                       bool weighted) {
    return format_double(rho) + "," + format_double(sigma) + "," + format_double(epsilon) + "," +
           std::to_string(seed) + "," + (weighted ? "1" : "0");
}

std::string record_line(const RunRecord& r) {
    std::string line = std::to_string(kResultsSchemaVersion) + "," +
                       record_key(r.rho, r.sigma, r.epsilon, r.seed, r.weighted) + "," +
                       format_double(r.dcr) + "," + opt_str(r.tdr) + "," + opt_str(r.ccr) + "," +
                       opt_str(r.event1) + "," + opt_str(r.event2) + "," + opt_str(r.event3) +
                       "," + format_double(r.kkt_max) + "," + std::to_string(r.runtime_ms) + "," +
                       std::to_string(r.degenerate_rows) + ",";
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    return line + err;
}

// Key of an already-written line: fields 1..5 (rho..weighted).
std::string line_key(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (fields.size() < 6) return {};
    return fields[1] + "," + fields[2] + "," + fields[3] + "," + fields[4] + "," + fields[5];
}

} // namespace

int cmd_sweep(const ExperimentConfig& cfg) {
    if (cfg.sweep.sigmas.empty() || cfg.sweep.rhos.empty() || cfg.sweep.epsilons.empty() ||
        cfg.sweep.seeds.empty()) {
        std::cerr << "sweep: all axis lists (sigmas, rhos, epsilons, seeds) must be nonempty\n";
        return 1;
    }
    if (cfg.out.empty()) {
        std::cerr << "sweep: output path required\n";
        return 1;
    }

    // Resumability: keep previously computed rows verbatim, keyed by config.
    std::map<std::string, std::string> done;
    {
        std::ifstream in(cfg.out);
        std::string line;
        bool first = true;
        while (in && std::getline(in, line)) {
            if (first) { first = false; continue; } // header
            if (line.empty()) continue;
            const std::string key = line_key(line);
            if (!key.empty()) done[key] = line;
        }
    }

    struct Cell {
        double rho, sigma, epsilon;
        std::uint64_t seed;
        bool weighted;
    };
    std::vector<Cell> cells;
    for (double rho : cfg.sweep.rhos)
        for (double sigma : cfg.sweep.sigmas)
            for (double eps : cfg.sweep.epsilons)
                for (std::uint64_t seed : cfg.sweep.seeds)
                    for (bool weighted : {false, true})
                        cells.push_back({rho, sigma, eps, seed, weighted});

    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return std::tie(a.rho, a.sigma, a.epsilon, a.seed, a.weighted) <
               std::tie(b.rho, b.sigma, b.epsilon, b.seed, b.weighted);
    });

    std::vector<std::string> lines;
    lines.reserve(cells.size());
    std::size_t computed = 0, reused = 0, failures = 0;
    for (const Cell& cell : cells) {
        const std::string key =
            record_key(cell.rho, cell.sigma, cell.epsilon, cell.seed, cell.weighted);
        auto it = done.find(key);
        if (it != done.end()) {
            lines.push_back(it->second);
            ++reused;
            continue;
        }
        GenerationConfig gen = cfg.generation;
        gen.rho = cell.rho;
        gen.sigma = cell.sigma;
        gen.seed = cell.seed;
        PipelineConfig pipe = cfg.pipeline;
        pipe.epsilon = cell.epsilon;
        pipe.weighted = cell.weighted;

        const RunRecord rec = run_cell(gen, pipe, cfg.spectral, cfg.events);
        if (!rec.error.empty()) ++failures;
        lines.push_back(record_line(rec));
        ++computed;
    }

    std::ofstream out(cfg.out, std::ios::trunc);
    if (!out) {
        std::cerr << "sweep: cannot write " << cfg.out << "\n";
        return 2;
    }
    out << kResultsHeader << "\n";
    for (const std::string& l : lines) out << l << "\n";
    out.close();

    std::cout << "sweep: " << lines.size() << " rows (" << computed << " computed, " << reused
              << " reused, " << failures << " failed) -> " << cfg.out << "\n";
    return 0;
}

// --- generate / cluster ---------------------------------------------------------

int cmd_generate(const ExperimentConfig& cfg) {
    if (cfg.out.empty()) {
        std::cerr << "generate: output path required\n";
        return 1;
    }
    const GenerationConfig& g = cfg.generation;
    const SubspaceEnsemble ens = build_equiaffine_subspaces(g.n, g.L, g.d, g.rho, g.seed);
    const Dataset data = sample_dataset(ens, g.density, g.sigma, derive_seed(g.seed, 0xda7a));
    write_dataset_csv(cfg.out, data);

    std::cout << "generated " << data.N() << " points in R^" << data.n() << " -> " << cfg.out
              << "\nrealized affinity matrix:\n";
    for (std::size_t i = 0; i < g.L; ++i) {
        for (std::size_t j = 0; j < g.L; ++j) {
            const double a = i == j ? 1.0 : affinity_between(ens.bases[i], ens.bases[j]);
            std::printf("%s%.6f", j ? " " : "  ", a);
        }
        std::printf("\n");
    }
    return 0;
}

int cmd_cluster(const ExperimentConfig& cfg, const std::string& dataset_path,
                std::size_t L_override, bool estimate_L) {
    Dataset data;
    if (!dataset_path.empty()) {
        data = load_dataset_csv(dataset_path);
    } else {
        const GenerationConfig& g = cfg.generation;
        const SubspaceEnsemble ens = build_equiaffine_subspaces(g.n, g.L, g.d, g.rho, g.seed);
        data = sample_dataset(ens, g.density, g.sigma, derive_seed(g.seed, 0xda7a));
    }

    const CoefficientMatrix cm = two_step_regress(data, cfg.pipeline);
    const AffinityGraph graph = build_affinity(cm);

    std::size_t L = L_override;
    if (L == 0) {
        if (estimate_L)
            L = estimate_num_clusters(graph, std::min<std::size_t>(10, data.N()));
        else if (data.labels) {
            int mx = 0;
            for (int l : *data.labels) mx = std::max(mx, l);
            L = static_cast<std::size_t>(mx) + 1;
        } else {
            L = cfg.generation.L;
        }
    }

    const Labeling pred = spectral_cluster(graph, L, cfg.spectral);

    const double thr = cfg.pipeline.solver.support_threshold;
    std::cout << "N=" << data.N() << " n=" << data.n() << " L=" << L
              << " weighted=" << (cfg.pipeline.weighted ? 1 : 0) << "\n";
    std::cout << "dcr=" << format_double(dcr(cm, thr)) << "\n";
    if (data.labels) {
        const DiscoveryTally tally = discovery_tally(cm, *data.labels, thr);
        const auto t = tdr(tally);
        std::cout << "tdr=" << (t ? format_double(*t) : "unavailable") << "\n";
        std::cout << "ccr=" << format_double(ccr(pred, *data.labels)) << "\n";
    } else {
        std::cout << "tdr=unavailable (no ground-truth labels)\n";
        std::cout << "ccr=unavailable (no ground-truth labels)\n";
    }
    std::cout << "kkt_max=" << format_double(cm.max_kkt) << "\n";

    if (!cfg.out.empty()) {
        std::ofstream out(cfg.out, std::ios::trunc);
        if (!out) throw DataError("cluster: cannot write " + cfg.out);
        out << "index,label\n";
        for (std::size_t i = 0; i < pred.labels.size(); ++i)
            out << i << "," << pred.labels[i] << "\n";
    }
    return 0;
}

// --- duality verification --------------------------------------------------------

int cmd_verify_duality(const ExperimentConfig& cfg, std::size_t instances) {
    if (instances < 1) {
        std::cerr << "verify-duality: instances must be >= 1\n";
        return 1;
    }

    std::ofstream out;
    if (!cfg.out.empty()) {
        out.open(cfg.out, std::ios::trunc);
        if (!out) {
            std::cerr << "verify-duality: cannot write " << cfg.out << "\n";
            return 2;
        }
        out << "instance,n,m,lambda,weighted,support_activity_violations,witness_valid,"
               "max_abs_a,min_b,max_b_dev,reconstruction_error\n";
    }

    Rng rng(derive_seed(cfg.generation.seed, 0xd0a1));
    std::size_t support_activity_total = 0, witness_failures = 0;
    double worst_a = 0.0, worst_recon = 0.0, worst_b_dev = 0.0;

    for (std::size_t t = 0; t < instances; ++t) {
        const std::size_t n = 6 + static_cast<std::size_t>(rng.uniform() * 7.0);  // 6..12
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 3.99); // 2..5 (< n)

        Dictionary dict{Mat(n, m)};
        for (std::size_t j = 0; j < m; ++j) {
            Vec c = rng.unit_sphere(n);
            dict.Y.set_col(j, c);
        }
        Vec y = rng.unit_sphere(n);
        for (double& v : y) v *= 2.0;

        const bool weighted = rng.uniform() < 0.5;
        Vec w(m, 1.0);
        if (weighted)
            for (double& v : w) v = 0.1 + 0.9 * rng.uniform();

        Vec corr = matvec_t(dict.Y, y);
        for (std::size_t j = 0; j < m; ++j) corr[j] /= w[j];
        const double lambda = (0.05 + 0.75 * rng.uniform()) * norm_inf(corr);
        if (lambda <= 0.0) continue;

        SolveConfig scfg;
        scfg.tol = 1e-10; // witnesses are checked at 1e-7; leave some headroom
        const Coefficients c = solve_weighted_lasso(dict, y, lambda, w, scfg);
        const DualPoint z = dual_residual(y, dict, w, c, lambda);
        const ConstraintPartition part = classify_constraints(z, dict, w);
        const SupportActivityReport rep = check_support_activity(c, part);
        support_activity_total += rep.violations.size();

        const BoundaryDictionary bd = boundary_dictionary(dict, lambda);
        const RepresentationWitness wit =
            representation_witness(y, dict, z, part, bd, w, c);
        const bool ok = verify_witness(wit, 1e-7);
        if (!ok) ++witness_failures;

        double max_a = 0.0;
        for (double a : wit.a) max_a = std::max(max_a, std::fabs(a));
        double min_b = wit.b.empty() ? 0.0 : *std::min_element(wit.b.begin(), wit.b.end());

        // b_j should reproduce the magnitude of the scaled primal coefficient.
        double b_dev = 0.0;
        for (std::size_t k = 0; k < wit.active.size(); ++k) {
            const std::size_t j = wit.active[k];
            b_dev = std::max(b_dev, std::fabs(wit.b[k] - std::fabs(c.values[j])));
        }

        worst_a = std::max(worst_a, max_a);
        worst_recon = std::max(worst_recon, wit.reconstruction_error);
        worst_b_dev = std::max(worst_b_dev, b_dev);

        if (out)
            out << t << "," << n << "," << m << "," << format_double(lambda) << ","
                << (weighted ? 1 : 0) << "," << rep.violations.size() << "," << (ok ? 1 : 0)
                << "," << format_double(max_a) << "," << format_double(min_b) << ","
                << format_double(b_dev) << "," << format_double(wit.reconstruction_error)
                << "\n";
    }

    std::cout << "verify-duality: " << instances << " instances, " << support_activity_total
              << " support-activity violations, " << witness_failures
              << " invalid witnesses\n"
              << "worst |a|=" << format_double(worst_a)
              << " worst b deviation=" << format_double(worst_b_dev)
              << " worst reconstruction error=" << format_double(worst_recon) << "\n";
    return (support_activity_total == 0 && witness_failures == 0) ? 0 : 3;
}

// --- events ------------------------------------------------------------------------

int cmd_events(const ExperimentConfig& cfg) {
    if (!cfg.events) {
        std::cerr << "events: config must contain an \"events\" section\n";
        return 1;
    }
    const MonteCarloEventsResult res = monte_carlo_events(
        cfg.generation, cfg.pipeline, *cfg.events, cfg.event_trials, cfg.generation.seed);

    auto print = [](const char* name, const EventEstimate& e) {
        auto se = [](const std::optional<double>& s) {
            return s ? format_double(*s) : std::string("absent");
        };
        std::cout << name << ": p1=" << format_double(e.p1) << " (se " << se(e.se1) << ")"
                  << " p2=" << format_double(e.p2) << " (se " << se(e.se2) << ")"
                  << " p3=" << format_double(e.p3) << " (se " << se(e.se3) << ")"
                  << " trials=" << e.trials_used << " failed=" << e.trials_failed << "\n";
    };
    print("weighted  ", res.weighted);
    print("unweighted", res.unweighted);

    if (!cfg.out.empty()) {
        std::ofstream out(cfg.out, std::ios::trunc);
        if (!out) {
            std::cerr << "events: cannot write " << cfg.out << "\n";
            return 2;
        }
        out << "schema_version,method,p1,se1,p2,se2,p3,se3,trials,failed\n";
        auto row = [&](const char* name, const EventEstimate& e) {
            auto se = [](const std::optional<double>& s) {
                return s ? format_double(*s) : std::string();
            };
            out << kResultsSchemaVersion << "," << name << "," << format_double(e.p1) << ","
                << se(e.se1) << "," << format_double(e.p2) << "," << se(e.se2) << ","
                << format_double(e.p3) << "," << se(e.se3) << "," << e.trials_used << ","
                << e.trials_failed << "\n";
        };
        row("weighted", res.weighted);
        row("unweighted", res.unweighted);
    }
    return 0;
}

} // namespace ssc
