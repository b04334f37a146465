#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "cnlse/evolve.hpp"
#include "cnlse/run.hpp"
#include "cnlse/scenario.hpp"

namespace cnlse {

struct OutputPlan {
    std::filesystem::path directory;
    std::size_t snapshot_every = 1;  ///< in observations
    int precision = 12;              ///< significant digits, 6..17

    void validate() const;
};

/// Writes into plan.directory (created if missing):
///   timeseries.csv    t, I_u, I_v, max_abs_u, max_abs_v[, error_l2, error_max][, iterations]
///   snapshot_t<t>.csv x, re_u, im_u, abs_u, re_v, im_v, abs_v
///   run_summary.txt   key=value lines
///   scenario.cfg      the scenario that was run
/// Throws IoError on failure.
void write_run(const OutputPlan& plan, const Scenario& scenario, const RunRecord& record,
               const RunSummary& summary);

std::string format_summary(const Scenario& scenario, const RunRecord& record,
                           const RunSummary& summary, int precision);

struct SnapshotDifference {
    double time = 0.0;
    double l2_u = 0.0;   ///< h-weighted L2 of |U_a| - |U_b|
    double max_u = 0.0;
    double l2_v = 0.0;
    double max_v = 0.0;
};

struct Comparison {
    std::vector<SnapshotDifference> rows;
    double max_difference = 0.0;  ///< largest max_u / max_v over common times
};

/// Pairs snapshots whose times agree within 1e-6. Throws ValidationError
/// when there are no common times or the grids differ, IoError when a
/// directory or file cannot be read.
Comparison compare_runs(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace cnlse
