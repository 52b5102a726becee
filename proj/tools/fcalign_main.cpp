#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "fcalign/common.hpp"
#include "fcalign/pipeline.hpp"

namespace {

struct Flags {
    std::string input, fc_input, scenario, truth, clusters, metric = "l2";
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

void add_data_flags(CLI::App* cmd, Flags& f, fcalign::RunConfig& cfg) {
    cmd->add_option("--input", f.input, "Replicate CSV (entity,condition,replicate,time,value)");
    cmd->add_option("--fc-input", f.fc_input, "Directory holding fold_changes.csv and cross_cov.csv");
    cmd->add_option("--scenario", f.scenario, "Simulated scenario")
        ->check(CLI::IsMember({"m1-c1", "m1-c2", "m1-c3", "m1-c4", "m1-c5", "m1-c6", "m2"}));
    cmd->add_option("--n-e", cfg.n_entities, "Number of simulated entities")->capture_default_str();
    cmd->add_flag("--log-transform", cfg.log_transform, "Natural log of raw values before estimation");
    cmd->add_flag("--scale-std", cfg.preprocess.scale_by_std, "Divide by per-time standard deviations");
    cmd->add_flag("--scale-norm", cfg.preprocess.scale_by_norm, "Divide by the fold-change norm");
    cmd->add_option("--truth", f.truth, "Ground-truth labels (entity,label[,shift])");
}

void add_warp_flags(CLI::App* cmd, Flags& f, fcalign::RunConfig& cfg) {
    cmd->add_option("--s-max", cfg.warp.s_max, "Largest warp step")->capture_default_str();
    cmd->add_option("--lambda", cfg.warp.lambda, "Sign-penalty weight")->capture_default_str();
    cmd->add_flag("--normalize,!--no-normalize", cfg.warp.normalize_by_length,
                  "Divide warped dissimilarities by the overlap length");
    cmd->add_option("--metric", f.metric, "Dissimilarity (wasserstein and hellinger are never warped)")
        ->check(CLI::IsMember({"l2", "wasserstein", "hellinger"}))
        ->capture_default_str();
}

void add_cluster_flags(CLI::App* cmd, fcalign::RunConfig& cfg, bool with_k) {
    if (with_k) cmd->add_option("--k", cfg.cluster.k, "Number of clusters")->capture_default_str();
    cmd->add_option("--n-init", cfg.cluster.n_init, "Random initializations")->capture_default_str();
    cmd->add_option("--it-max", cfg.cluster.it_max, "Iteration cap per initialization")->capture_default_str();
    cmd->add_option("--epsilon", cfg.cluster.epsilon, "Minimum cost decrease to continue")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering with alignment of Gaussian fold-change time courses"};
    app.require_subcommand(1);

    fcalign::RunConfig cfg;
    Flags f;
    std::map<CLI::App*, fcalign::Command> commands;

    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--out-dir", f.out_dir, "Output directory")->capture_default_str();
        cmd->add_option("--seed", f.seed, "Seed for every random choice (random and logged if omitted)");
    };

    auto* estimate = app.add_subcommand("estimate", "Estimate fold changes from replicate data");
    commands[estimate] = fcalign::Command::Estimate;
    add_data_flags(estimate, f, cfg);
    common(estimate);

    auto* cluster = app.add_subcommand("cluster", "Cluster with alignment");
    commands[cluster] = fcalign::Command::Cluster;
    add_data_flags(cluster, f, cfg);
    add_warp_flags(cluster, f, cfg);
    add_cluster_flags(cluster, cfg, true);
    common(cluster);

    auto* simulate = app.add_subcommand("simulate", "Write a simulated data set with ground truth");
    commands[simulate] = fcalign::Command::Simulate;
    simulate->add_option("--scenario", f.scenario, "Scenario")
        ->required()
        ->check(CLI::IsMember({"m1-c1", "m1-c2", "m1-c3", "m1-c4", "m1-c5", "m1-c6", "m2"}));
    simulate->add_option("--n-e", cfg.n_entities, "Number of entities")->capture_default_str();
    common(simulate);

    auto* evaluate = app.add_subcommand("evaluate", "Score a clusters.csv against ground truth");
    commands[evaluate] = fcalign::Command::Evaluate;
    evaluate->add_option("--truth", f.truth, "Ground-truth labels")->required();
    evaluate->add_option("--clusters", f.clusters, "clusters.csv to score (default: <out-dir>/clusters.csv)");
    evaluate->add_option("--out-dir", f.out_dir, "Run directory")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep-k", "Total cost and silhouette over a range of K");
    commands[sweep] = fcalign::Command::SweepK;
    add_data_flags(sweep, f, cfg);
    add_warp_flags(sweep, f, cfg);
    add_cluster_flags(sweep, cfg, false);
    sweep->add_option("--k-min", cfg.k_min)->capture_default_str();
    sweep->add_option("--k-max", cfg.k_max)->capture_default_str();
    common(sweep);

    auto* bench = app.add_subcommand("bench", "Time the precomputed and on-demand clustering");
    commands[bench] = fcalign::Command::Bench;
    add_data_flags(bench, f, cfg);
    add_warp_flags(bench, f, cfg);
    add_cluster_flags(bench, cfg, true);
    common(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Error& e) {
        app.exit(e);
        return fcalign::exit_code_for(fcalign::ErrorCode::InvalidArgument);
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = commands.at(chosen);
    auto set_if = [&](const char* flag, const std::string& value, auto& target) {
        if (chosen->get_option_no_throw(flag) && chosen->count(flag) > 0) target = value;
    };
    set_if("--input", f.input, cfg.input);
    set_if("--fc-input", f.fc_input, cfg.fc_input);
    set_if("--scenario", f.scenario, cfg.scenario);
    set_if("--truth", f.truth, cfg.truth);
    set_if("--clusters", f.clusters, cfg.clusters);
    if (chosen->get_option_no_throw("--seed") && chosen->count("--seed") > 0) cfg.seed = f.seed;
    cfg.out_dir = f.out_dir;

    try {
        cfg.metric = fcalign::parse_metric(f.metric);
        if (cfg.metric != fcalign::Metric::L2) cfg.warp.s_max = 0;
        return fcalign::run_pipeline(cfg);
    } catch (const fcalign::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fcalign::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
