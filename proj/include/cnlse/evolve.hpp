#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnlse/field.hpp"
#include "cnlse/oracles.hpp"
#include "cnlse/schemes.hpp"

namespace cnlse {

struct Observation {
    std::size_t step = 0;
    const FieldState* state = nullptr;
    int iterations = 0;  ///< linear solves in the step just taken (0 at step 0 and for explicit)
};

using Observer = std::function<void(const Observation&)>;

struct EvolveOptions {
    Scheme scheme = Scheme::Implicit;
    IterationPolicy policy{};
    std::size_t steps = 0;
    std::size_t observe_every = 1;
    /// Keep a snapshot every this many observations (0 keeps none); the
    /// first and last observations are always kept when non-zero.
    std::size_t snapshot_every = 0;
    /// Relative invariant drift that counts as a blow-up. Unset disables the
    /// detector; non-finite fields always stop the run.
    std::optional<double> drift_limit = 0.1;
    PointOracle oracle;  ///< empty: no error series
    std::vector<Observer> observers;
};

struct Termination {
    enum class Kind { Completed, BlewUp, IterationFailure };
    Kind kind = Kind::Completed;
    std::size_t step = 0;  ///< failing step; equals the step count on completion
    std::string message;
};

std::string_view to_string(Termination::Kind kind) noexcept;

struct RunRecord {
    std::vector<double> times;
    std::vector<InvariantPair> invariants;
    std::vector<Amplitudes> amplitudes;
    std::vector<OracleError> errors;   ///< empty without an oracle
    std::vector<int> iterations;       ///< empty for the explicit scheme
    std::map<int, std::size_t> iteration_histogram;  ///< over every implicit step
    std::vector<FieldState> snapshots;
    Termination termination;
    FieldState final_state;
    std::size_t steps_completed = 0;
    double max_drift = 0.0;  ///< largest relative invariant drift seen at any step
    double wall_seconds = 0.0;

    bool completed() const noexcept { return termination.kind == Termination::Kind::Completed; }
};

/// Advances `initial` by options.steps steps of the chosen scheme. Blow-up
/// (non-finite values or drift past the limit) and iteration failure end
/// the run and are recorded in `termination`; they are not thrown.
RunRecord evolve(const FieldState& initial, const Physics& phys, const Grid& grid,
                 const EvolveOptions& options);

/// Median of the per-step iteration counts; 0 when no implicit step ran.
double median_iterations(const std::map<int, std::size_t>& histogram);

}  // namespace cnlse
