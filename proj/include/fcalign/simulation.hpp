#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fcalign/data_model.hpp"

namespace fcalign {

enum class MeanMode { M1, M2 };
enum class CovMode { C1, C2, C3, C4, C5, C6 };

struct ScenarioSpec {
    MeanMode mean_mode = MeanMode::M1;
    CovMode cov_mode = CovMode::C1;
    std::size_t n_entities = 300;
    // Defaults to the scenario's standard grid when empty.
    std::optional<TimeVector> time;
    std::uint64_t seed = 0;

    std::size_t n_clusters() const;
    TimeVector resolved_time() const;
    std::string name() const;
};

// Accepts m1-c1 .. m1-c6 and m2.
ScenarioSpec parse_scenario(const std::string& name);

TimeVector default_time(MeanMode mode);

struct SimulatedSet {
    FoldChangeSet set;
    std::vector<int> truth;      // 1-based template index
    std::vector<double> shifts;  // horizontal shift per entity, zero under M1
};

// Draws fold-change estimators (means and per-time covariances) directly; no
// replicate-level data is generated.
SimulatedSet simulate(const ScenarioSpec& spec);

}  // namespace fcalign
