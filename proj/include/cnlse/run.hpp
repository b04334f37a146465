#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnlse/analysis.hpp"
#include "cnlse/evolve.hpp"
#include "cnlse/scenario.hpp"

namespace cnlse {

/// Command-line style adjustments to a scenario.
struct RunOverrides {
    std::vector<std::pair<std::string, std::string>> assignments;  ///< config keys, applied first
    std::optional<Scheme> scheme;
    std::optional<double> tau;          ///< keeps the final time (rounded to whole steps)
    std::optional<std::size_t> steps;   ///< keeps the final time
};

/// Order: assignments, then scheme, then tau or steps. Switching scheme
/// without tau/steps uses scheme_variant(); with either, only the scheme
/// field changes. The observation count is preserved throughout.
Scenario apply_overrides(const Scenario& scenario, const RunOverrides& overrides);

/// Number of snapshots kept by default per run.
inline constexpr std::size_t kDefaultSnapshotCount = 50;

/// snapshot_every (in observations) giving about `count` snapshots.
std::size_t snapshot_cadence(const Scenario& scenario, std::size_t count = kDefaultSnapshotCount);

EvolveOptions evolve_options(const Scenario& scenario, std::size_t snapshot_every);

/// Validates and evolves a scenario from its initial condition.
RunRecord run_scenario(const Scenario& scenario, std::size_t snapshot_every,
                       std::vector<Observer> observers = {});

struct RunSummary {
    StabilityBudget budget;   ///< at the initial invariants
    double q_final = 0.0;     ///< Q at the last observation
    double median_iterations = 0.0;
};

/// Q compares the last observed invariants with the oracle's at the same
/// time, or with the initial invariants when there is no oracle (the
/// continuous problem conserves both energies).
RunSummary summarize(const Scenario& scenario, const RunRecord& record,
                     double threshold = kDefaultRhoThreshold);

}  // namespace cnlse
