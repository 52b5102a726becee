#include "fcalign/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

#include <json.hpp>

#include "fcalign/eval_metrics.hpp"
#include "fcalign/io.hpp"

namespace fcalign {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* command_name(Command c) {
    switch (c) {
        case Command::Estimate: return "estimate";
        case Command::Cluster: return "cluster";
        case Command::Simulate: return "simulate";
        case Command::Evaluate: return "evaluate";
        case Command::SweepK: return "sweep-k";
        case Command::Bench: return "bench";
    }
    return "?";
}

void RunConfig::validate() const {
    const int sources = int(input.has_value()) + int(fc_input.has_value()) + int(scenario.has_value());
    const bool has_source = sources > 0;
    if (sources > 1) throw Error(ErrorCode::InvalidCombination, "give only one of --input, --fc-input, --scenario");
    switch (command) {
        case Command::Estimate:
            if (!input) throw Error(ErrorCode::InvalidCombination, "estimate needs --input");
            break;
        case Command::Simulate:
            if (!scenario) throw Error(ErrorCode::InvalidCombination, "simulate needs --scenario");
            break;
        case Command::Evaluate:
            if (!truth) throw Error(ErrorCode::InvalidCombination, "evaluate needs --truth");
            break;
        case Command::Cluster:
        case Command::SweepK:
        case Command::Bench:
            if (!has_source) {
                throw Error(ErrorCode::InvalidCombination, "need one of --input, --fc-input or --scenario");
            }
            break;
    }
    if (command == Command::SweepK && (k_min < 2 || k_max < k_min)) {
        throw Error(ErrorCode::InvalidArgument, "sweep needs 2 <= k-min <= k-max");
    }
    if (command == Command::Bench && metric != Metric::L2) {
        throw Error(ErrorCode::InvalidCombination, "bench compares warped clustering and needs --metric l2");
    }
    if (scenario) parse_scenario(*scenario);
    if (!(warp.lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");
}

namespace {

struct LoadedData {
    FoldChangeSet set;
    std::optional<std::vector<int>> truth;
    std::vector<double> shifts;
    ordered_json info;
};

std::uint64_t resolve_seed(const RunConfig& cfg) {
    if (cfg.seed) return *cfg.seed;
    std::random_device rd;
    const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "no --seed given, using " << seed << "\n";
    return seed;
}

ordered_json config_json(const RunConfig& cfg, std::uint64_t seed) {
    auto opt_path = [](const std::optional<fs::path>& p) { return p ? ordered_json(p->string()) : ordered_json(); };
    ordered_json j;
    j["command"] = command_name(cfg.command);
    j["input"] = opt_path(cfg.input);
    j["fc_input"] = opt_path(cfg.fc_input);
    j["scenario"] = cfg.scenario ? ordered_json(*cfg.scenario) : ordered_json();
    j["n_entities"] = cfg.n_entities;
    j["truth"] = opt_path(cfg.truth);
    j["log_transform"] = cfg.log_transform;
    j["scale_std"] = cfg.preprocess.scale_by_std;
    j["scale_norm"] = cfg.preprocess.scale_by_norm;
    j["metric"] = metric_name(cfg.metric);
    j["s_max"] = cfg.warp.s_max;
    j["lambda"] = cfg.warp.lambda;
    j["normalize"] = cfg.warp.normalize_by_length;
    j["k"] = cfg.cluster.k;
    j["n_init"] = cfg.cluster.n_init;
    j["it_max"] = cfg.cluster.it_max;
    j["epsilon"] = cfg.cluster.epsilon;
    j["seed"] = seed;
    j["seed_given"] = cfg.seed.has_value();
    if (cfg.command == Command::SweepK) {
        j["k_min"] = cfg.k_min;
        j["k_max"] = cfg.k_max;
    }
    return j;
}

LoadedData load(const RunConfig& cfg, std::uint64_t seed) {
    LoadedData out;
    FoldChangeSet raw;
    if (cfg.input) {
        const auto report = validate_dataset(io::ingest_csv(*cfg.input, cfg.log_transform));
        raw = estimate(report.dataset);
        out.info["source"] = "replicates";
        out.info["n_replicates"] = report.dataset.n_replicates();
        out.info["dropped_entities"] = report.dropped;
        if (!report.dropped.empty()) {
            std::cerr << "dropped " << report.dropped.size() << " entities with missing replicates\n";
        }
        const auto degenerate = degenerate_variances(raw);
        ordered_json cells = ordered_json::array();
        for (const auto& d : degenerate) cells.push_back({{"entity", d.entity}, {"time", d.time}});
        out.info["zero_variance_cells"] = cells;
        if (!degenerate.empty()) {
            std::cerr << "warning: " << degenerate.size() << " entity-time cells have zero variance\n";
        }
    } else if (cfg.fc_input) {
        raw = io::read_fold_changes(*cfg.fc_input);
        out.info["source"] = "fold_changes";
    } else {
        ScenarioSpec spec = parse_scenario(*cfg.scenario);
        spec.n_entities = cfg.n_entities;
        spec.seed = seed;
        auto sim = simulate(spec);
        raw = std::move(sim.set);
        out.truth = std::move(sim.truth);
        out.shifts = std::move(sim.shifts);
        out.info["source"] = "simulation";
        out.info["scenario"] = spec.name();
    }
    if (cfg.truth) out.truth = io::read_truth(*cfg.truth, raw.ids());
    out.set = preprocess(raw, cfg.preprocess);
    out.info["n_entities"] = out.set.size();
    out.info["time"] = out.set.time().points();
    return out;
}

// Warped matrices for the L2 metric, plain pairwise matrices otherwise.
OWDMatrices matrices_for(const RunConfig& cfg, const FoldChangeSet& set) {
    if (cfg.metric == Metric::L2) {
        cfg.warp.validate(set.n_times());
        return build_owd_ow(set, cfg.warp);
    }
    return unwarped(pairwise_matrix(set, cfg.metric));
}

ordered_json clustering_json(const ClusteringResult& r, const std::vector<std::string>& ids) {
    ordered_json j;
    j["total_cost"] = r.total_cost;
    ordered_json centroids = ordered_json::array();
    for (auto c : r.centroids) centroids.push_back(ids[c]);
    j["centroids"] = centroids;
    j["best_init"] = r.best_init;
    ordered_json inits = ordered_json::array();
    for (const auto& t : r.inits) {
        ordered_json seeds = ordered_json::array();
        for (auto c : t.initial_centroids) seeds.push_back(ids[c]);
        inits.push_back({{"initial_centroids", seeds},
                         {"costs", t.costs},
                         {"final_cost", t.final_cost},
                         {"iterations", t.iterations},
                         {"converged", t.converged}});
    }
    j["inits"] = inits;
    return j;
}

ordered_json silhouette_json(const RealMatrix& owd, const std::vector<int>& labels) {
    try {
        return silhouette(owd, labels);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingleCluster) throw;
        return nullptr;
    }
}

ordered_json evaluation_json(const std::vector<int>& truth, const std::vector<int>& pred) {
    return {{"ari", ari(truth, pred)}, {"v_measure", v_measure(truth, pred)}};
}

void write_json(const fs::path& path, const ordered_json& j) { io::write_text(path, j.dump(2) + "\n"); }

int run_estimate(const RunConfig& cfg, std::uint64_t seed) {
    const auto data = load(cfg, seed);
    ordered_json summary;
    summary["config"] = config_json(cfg, seed);
    summary["data"] = data.info;
    io::write_fold_changes(cfg.out_dir, data.set);
    write_json(cfg.out_dir / "summary.json", summary);
    return 0;
}

int run_simulate(const RunConfig& cfg, std::uint64_t seed) {
    const auto data = load(cfg, seed);
    ordered_json summary;
    summary["config"] = config_json(cfg, seed);
    summary["data"] = data.info;
    io::write_fold_changes(cfg.out_dir, data.set);
    io::write_truth(cfg.out_dir / "truth.csv", data.set.ids(), *data.truth, data.shifts);
    write_json(cfg.out_dir / "summary.json", summary);
    return 0;
}

int run_cluster(const RunConfig& cfg, std::uint64_t seed) {
    const auto data = load(cfg, seed);
    const auto m = matrices_for(cfg, data.set);
    ClusterConfig cc = cfg.cluster;
    cc.seed = seed;
    const auto result = cluster_fast(m, cc);

    ordered_json summary;
    summary["config"] = config_json(cfg, seed);
    summary["data"] = data.info;
    summary["clustering"] = clustering_json(result, data.set.ids());
    summary["silhouette"] = silhouette_json(m.owd, result.labels);
    if (data.truth) summary["evaluation"] = evaluation_json(*data.truth, result.labels);

    io::write_clusters(cfg.out_dir / "clusters.csv", data.set.ids(), result);
    io::write_matrix(cfg.out_dir / "owd.tsv", data.set.ids(), m.owd);
    io::write_matrix(cfg.out_dir / "ow.tsv", data.set.ids(), m.ow);
    io::write_plotdata(cfg.out_dir / "plotdata", data.set, result);
    if (data.truth && !cfg.truth) {
        io::write_truth(cfg.out_dir / "truth.csv", data.set.ids(), *data.truth, data.shifts);
    }
    write_json(cfg.out_dir / "summary.json", summary);
    return 0;
}

int run_evaluate(const RunConfig& cfg) {
    const auto assignment = io::read_clusters(cfg.clusters ? *cfg.clusters : cfg.out_dir / "clusters.csv");
    const auto truth = io::read_truth(*cfg.truth, assignment.ids);
    const auto eval = evaluation_json(truth, assignment.labels);

    // Scores are merged into an existing run summary when there is one.
    const fs::path path = cfg.out_dir / "summary.json";
    ordered_json summary;
    if (fs::exists(path)) {
        std::ifstream in(path);
        try {
            summary = ordered_json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
        }
    }
    summary["evaluation"] = eval;
    std::cout << "ARI " << io::format_double(eval["ari"].get<double>()) << "\nV-measure "
              << io::format_double(eval["v_measure"].get<double>()) << "\n";
    write_json(path, summary);
    return 0;
}

int run_sweep(const RunConfig& cfg, std::uint64_t seed) {
    const auto data = load(cfg, seed);
    const auto m = matrices_for(cfg, data.set);
    std::string table = "K,total_cost,silhouette\n";
    ordered_json rows = ordered_json::array();
    for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) {
        ClusterConfig cc = cfg.cluster;
        cc.k = k;
        cc.seed = seed;
        const auto result = cluster_fast(m, cc);
        const auto sil = silhouette_json(m.owd, result.labels);
        table += std::to_string(k) + ',' + io::format_double(result.total_cost) + ',' +
                 (sil.is_null() ? std::string("NA") : io::format_double(sil.get<double>())) + '\n';
        rows.push_back({{"k", k}, {"total_cost", result.total_cost}, {"silhouette", sil}});
    }
    ordered_json summary;
    summary["config"] = config_json(cfg, seed);
    summary["data"] = data.info;
    summary["sweep"] = rows;
    io::write_text(cfg.out_dir / "sweep.csv", table);
    write_json(cfg.out_dir / "summary.json", summary);
    return 0;
}

int run_bench(const RunConfig& cfg, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    const auto data = load(cfg, seed);
    ClusterConfig cc = cfg.cluster;
    cc.seed = seed;

    const auto t0 = clock::now();
    const auto m = build_owd_ow(data.set, cfg.warp);
    const auto fast = cluster_fast(m, cc);
    const auto t1 = clock::now();
    const auto classic = cluster_classic(data.set, cfg.warp, cc);
    const auto t2 = clock::now();

    const double fast_s = std::chrono::duration<double>(t1 - t0).count();
    const double classic_s = std::chrono::duration<double>(t2 - t1).count();
    ordered_json bench;
    bench["config"] = config_json(cfg, seed);
    bench["fast_seconds"] = fast_s;
    bench["classic_seconds"] = classic_s;
    bench["ratio"] = fast_s / classic_s;
    bench["identical_labels"] = fast.labels == classic.labels && fast.centroids == classic.centroids &&
                                fast.warps == classic.warps;
    std::cout << "fast " << fast_s << " s, classic " << classic_s << " s\n";
    write_json(cfg.out_dir / "bench.json", bench);
    return 0;
}

}  // namespace

int run_pipeline(RunConfig cfg) {
    cfg.validate();
    if (cfg.command == Command::Evaluate) return run_evaluate(cfg);
    const std::uint64_t seed = resolve_seed(cfg);
    switch (cfg.command) {
        case Command::Estimate: return run_estimate(cfg, seed);
        case Command::Simulate: return run_simulate(cfg, seed);
        case Command::Cluster: return run_cluster(cfg, seed);
        case Command::SweepK: return run_sweep(cfg, seed);
        case Command::Bench: return run_bench(cfg, seed);
        case Command::Evaluate: break;
    }
    return 0;
}

}  // namespace fcalign
