#include "cnlse/run.hpp"

#include <cmath>

#include "cnlse/errors.hpp"

namespace cnlse {

Scenario apply_overrides(const Scenario& scenario, const RunOverrides& overrides) {
    Scenario s = scenario;
    for (const auto& [key, value] : overrides.assignments) set_scenario_key(s, key, value);
    if (overrides.tau && overrides.steps) {
        throw ValidationError("give either a time step or a step count, not both");
    }
    const bool retimed = overrides.tau || overrides.steps;
    if (overrides.scheme) {
        if (retimed) {
            s.scheme = *overrides.scheme;
        } else {
            s = scheme_variant(s, *overrides.scheme);
        }
    }
    if (overrides.tau) {
        const double tau = *overrides.tau;
        if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be > 0");
        const auto n = std::max<long long>(1, std::llround(s.grid.final_time() / tau));
        s = with_steps(s, static_cast<std::size_t>(n));
        s.grid = s.grid.with_time(tau, static_cast<std::size_t>(n));
    }
    if (overrides.steps) s = with_steps(s, *overrides.steps);
    validate_scenario(s);
    return s;
}

std::size_t snapshot_cadence(const Scenario& scenario, std::size_t count) {
    const std::size_t observations = scenario.grid.n_time() / scenario.observe_every + 1;
    if (count == 0) return 0;
    return std::max<std::size_t>(1, observations / count);
}

EvolveOptions evolve_options(const Scenario& scenario, std::size_t snapshot_every) {
    EvolveOptions options;
    options.scheme = scenario.scheme;
    options.policy = scenario.policy;
    options.steps = scenario.grid.n_time();
    options.observe_every = scenario.observe_every;
    options.snapshot_every = snapshot_every;
    options.oracle = make_oracle(scenario);
    return options;
}

RunRecord run_scenario(const Scenario& scenario, std::size_t snapshot_every,
                       std::vector<Observer> observers) {
    validate_scenario(scenario);
    EvolveOptions options = evolve_options(scenario, snapshot_every);
    options.observers = std::move(observers);
    return evolve(initial_state(scenario), scenario.phys, scenario.grid, options);
}

RunSummary summarize(const Scenario& scenario, const RunRecord& record, double threshold) {
    RunSummary summary;
    const InvariantPair start = record.invariants.front();
    summary.budget = stability_budget(scenario.phys, scenario.grid, start, threshold);

    const InvariantPair last = record.invariants.back();
    InvariantPair exact = start;
    if (const PointOracle oracle = make_oracle(scenario)) {
        exact = invariants(sample_oracle(oracle, scenario.grid, record.times.back()));
    }
    summary.q_final = convergence_q(scenario.phys, last, exact);
    summary.median_iterations = median_iterations(record.iteration_histogram);
    return summary;
}

}  // namespace cnlse
