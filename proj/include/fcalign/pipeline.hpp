#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "fcalign/clustering.hpp"
#include "fcalign/fold_change.hpp"
#include "fcalign/gaussian_metrics.hpp"
#include "fcalign/simulation.hpp"
#include "fcalign/warping.hpp"

namespace fcalign {

enum class Command { Estimate, Cluster, Simulate, Evaluate, SweepK, Bench };

const char* command_name(Command c);

struct RunConfig {
    Command command = Command::Cluster;

    // Exactly one data source is used, in this order of precedence.
    std::optional<std::filesystem::path> input;     // replicate CSV
    std::optional<std::filesystem::path> fc_input;  // directory with fold_changes.csv
    std::optional<std::string> scenario;            // simulated data

    std::optional<std::filesystem::path> truth;
    std::optional<std::filesystem::path> clusters;  // evaluate: clusters.csv to score
    std::filesystem::path out_dir = "out";

    bool log_transform = false;
    PreprocessOptions preprocess;
    WarpSpec warp;
    Metric metric = Metric::L2;
    ClusterConfig cluster;
    std::size_t n_entities = 300;

    // Unset means a random seed is drawn once and recorded.
    std::optional<std::uint64_t> seed;

    std::size_t k_min = 2;
    std::size_t k_max = 10;

    // Throws InvalidCombination / InvalidArgument for inconsistent settings.
    void validate() const;
};

// Executes one command, writing every artifact only after all computation
// succeeded. Returns 0; module errors propagate as fcalign::Error.
int run_pipeline(RunConfig cfg);

}  // namespace fcalign
