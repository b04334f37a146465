#include "cnlse/evolve.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include "cnlse/errors.hpp"

namespace cnlse {

std::string_view to_string(Termination::Kind kind) noexcept {
    switch (kind) {
        case Termination::Kind::Completed: return "completed";
        case Termination::Kind::BlewUp: return "blew-up";
        case Termination::Kind::IterationFailure: return "iteration-failure";
    }
    return "unknown";
}

namespace {

class Recorder {
public:
    Recorder(RunRecord& record, const Grid& grid, const EvolveOptions& options)
        : record_(record), grid_(grid), options_(options) {}

    void observe(const FieldState& state, std::size_t step, int iterations, bool last) {
        record_.times.push_back(state.time);
        record_.invariants.push_back(invariants(state));
        record_.amplitudes.push_back(max_amplitude(state));
        if (options_.oracle) record_.errors.push_back(error_vs_oracle(state, options_.oracle, grid_));
        if (options_.scheme == Scheme::Implicit) record_.iterations.push_back(iterations);
        if (options_.snapshot_every > 0 && (count_ % options_.snapshot_every == 0 || last)) {
            record_.snapshots.push_back(state);
        }
        ++count_;
        const Observation obs{step, &state, iterations};
        for (const auto& observer : options_.observers) observer(obs);
    }

private:
    RunRecord& record_;
    const Grid& grid_;
    const EvolveOptions& options_;
    std::size_t count_ = 0;
};

}  // namespace

RunRecord evolve(const FieldState& initial, const Physics& phys, const Grid& grid,
                 const EvolveOptions& options) {
    initial.check();
    if (initial.size() != grid.n_space()) {
        throw InvalidStateError("initial state has " + std::to_string(initial.size()) +
                                " nodes, grid has " + std::to_string(grid.n_space()));
    }
    phys.validate();
    if (options.observe_every == 0) throw ValidationError("observe_every must be >= 1");
    if (options.drift_limit && !(*options.drift_limit > 0.0)) {
        throw ValidationError("drift_limit must be > 0");
    }

    const auto start = std::chrono::steady_clock::now();
    RunRecord record;
    Recorder recorder(record, grid, options);

    std::variant<ExplicitStepper, ImplicitStepper> stepper =
        options.scheme == Scheme::Explicit
            ? std::variant<ExplicitStepper, ImplicitStepper>(ExplicitStepper(phys, grid))
            : std::variant<ExplicitStepper, ImplicitStepper>(
                  ImplicitStepper(phys, grid, options.policy));

    FieldState state = initial;
    const double t0 = initial.time;
    const InvariantPair start_inv = invariants(state);
    recorder.observe(state, 0, 0, options.steps == 0);

    record.termination.step = options.steps;
    for (std::size_t step = 1; step <= options.steps; ++step) {
        int iterations = 0;
        try {
            if (auto* e = std::get_if<ExplicitStepper>(&stepper)) {
                e->advance(state, step);
            } else {
                const StepReport report = std::get<ImplicitStepper>(stepper).advance(state, step);
                iterations = report.iterations_used;
                ++record.iteration_histogram[iterations];
            }
        } catch (const BlowUpError& err) {
            record.termination = {Termination::Kind::BlewUp, step, err.what()};
            record.max_drift = std::numeric_limits<double>::infinity();
            break;
        } catch (const IterationFailureError& err) {
            record.termination = {Termination::Kind::IterationFailure, step, err.what()};
            break;
        } catch (const SolverError& err) {
            record.termination = {Termination::Kind::IterationFailure, step, err.what()};
            break;
        }
        state.time = t0 + static_cast<double>(step) * grid.tau();

        const double drift = relative_drift(start_inv, InvariantPair{sum_squares(state.u),
                                                                     sum_squares(state.v)});
        if (!std::isfinite(drift)) {
            record.termination = {Termination::Kind::BlewUp, step,
                                  "non-finite field values at step " + std::to_string(step)};
            record.max_drift = drift;
            break;
        }
        record.max_drift = std::max(record.max_drift, drift);
        if (options.drift_limit && drift > *options.drift_limit) {
            std::ostringstream msg;
            msg << "invariant drift " << drift << " exceeded limit " << *options.drift_limit
                << " at step " << step;
            record.termination = {Termination::Kind::BlewUp, step, msg.str()};
            record.steps_completed = step;
            break;
        }
        record.steps_completed = step;

        const bool last = step == options.steps;
        if (step % options.observe_every == 0 || last) recorder.observe(state, step, iterations, last);
    }

    record.final_state = std::move(state);
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

double median_iterations(const std::map<int, std::size_t>& histogram) {
    std::size_t total = 0;
    for (const auto& [count, n] : histogram) total += n;
    if (total == 0) return 0.0;
    // Average of the elements at ranks floor((total-1)/2) and total/2.
    const std::size_t lo_rank = (total - 1) / 2;
    const std::size_t hi_rank = total / 2;
    double lo = 0.0, hi = 0.0;
    std::size_t seen = 0;
    for (const auto& [count, n] : histogram) {
        if (seen <= lo_rank && lo_rank < seen + n) lo = count;
        if (seen <= hi_rank && hi_rank < seen + n) hi = count;
        seen += n;
    }
    return 0.5 * (lo + hi);
}

}  // namespace cnlse
