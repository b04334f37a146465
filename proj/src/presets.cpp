#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cnlse/analysis.hpp"
#include "cnlse/errors.hpp"
#include "cnlse/scenario.hpp"

namespace cnlse {

namespace {

constexpr std::array<std::string_view, 9> kPresetNames = {
    "nls-a1",           "nls-a2",           "manakov",
    "manakov-stability-sweep", "collision", "group-velocity-a",
    "group-velocity-b", "explicit-vs-implicit", "rectangular-decay",
};

InitialCondition sech(double amplitude, double offset = 0.0, double velocity = 0.0) {
    return {PulseKind::Sech, amplitude, offset, velocity, 0.0};
}

/// rho*tau target used when a scenario is switched to the explicit scheme.
constexpr double kExplicitRhoTau = 0.05;

Scenario nls(double amplitude) {
    Scenario s;
    s.phys = Physics{0.0, 0.5, 1.0, 0.0, 0.0, 0.0};
    s.ic_u = sech(amplitude);
    s.scheme = Scheme::Implicit;
    if (amplitude == 1.0) {
        s.name = "nls-a1";
        s.grid = Grid(-30.0, 30.0, 599, 0.005, 3000);  // h = 0.1, t in [0, 15]
        s.observe_every = 30;
        s.oracle = OracleKind::NlsFundamental;
    } else {
        // The bound state needs h <= 0.025 to stay within a few percent of the
        // exact solution; pi/2 is exactly 800 steps.
        s.name = "nls-a2";
        s.grid = Grid(-20.0, 20.0, 1999, std::numbers::pi / 1600.0, 2037);  // h = 0.02, t ~ 4
        s.observe_every = 25;
        s.oracle = OracleKind::NlsA2;
    }
    return s;
}

Scenario manakov() {
    Scenario s;
    s.name = "manakov";
    s.grid = Grid(-50.0, 50.0, 999, 1.5e-5, 1000000);  // h = 0.1, t in [0, 15]
    // k is fixed by the soliton constraint A^2 (a + b) = 2k.
    s.phys = Physics{0.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    s.ic_u = sech(1.0);
    s.ic_v = sech(1.0);
    s.scheme = Scheme::Explicit;
    s.observe_every = 10000;
    s.oracle = OracleKind::Manakov;
    return s;
}

Scenario collision() {
    Scenario s;
    s.name = "collision";
    s.grid = Grid(-40.0, 40.0, 799, 0.005, 4000);  // h = 0.1, t in [0, 20]
    s.phys = Physics{0.0, 0.5, 1.0, 2.0 / 3.0, 1.0, 2.0 / 3.0};
    s.ic_u = sech(1.0, 10.0, 1.0);
    s.ic_v = sech(1.0, -10.0, -1.0);
    s.observe_every = 40;
    return s;
}

Scenario group_velocity(double v1, std::string name) {
    Scenario s;
    s.name = std::move(name);
    s.grid = Grid(-30.0, 30.0, 299, 0.02, 2000);  // h = 0.2, t in [0, 40]
    s.phys = Physics{0.0, 0.5, 1.0, 1.0 / 3.0, 1.0, 1.0 / 3.0};
    s.ic_u = sech(1.2, 0.0, v1);
    s.ic_v = sech(1.4);
    s.observe_every = 20;
    return s;
}

Scenario explicit_vs_implicit() {
    Scenario s;
    s.name = "explicit-vs-implicit";
    s.grid = Grid(-30.0, 30.0, 299, 0.02, 2000);  // h = 0.2, t in [0, 40]
    s.phys = Physics{0.3, 0.5, 1.0, 0.2, 1.0, 1.6};
    s.ic_u = sech(1.5);
    s.ic_v = sech(1.5);
    s.observe_every = 20;
    return s;
}

Scenario rectangular_decay() {
    Scenario s;
    s.name = "rectangular-decay";
    s.grid = Grid(-30.0, 30.0, 299, 2e-4, 20000);  // h = 0.2, t in [0, 4]
    s.phys = Physics{0.0, 0.5, 1.0, 0.0, 0.0, 0.0};
    s.ic_u = InitialCondition{PulseKind::Rectangular, 1.0, 0.0, 0.0, 2.0};
    // At this tau the frozen-coefficient iteration contracts by ~1e-4 per
    // sweep and is cheaper than Newton's block solves.
    s.policy.method = IterationMethod::Picard;
    s.observe_every = 200;
    return s;
}

}  // namespace

std::span<const std::string_view> preset_names() { return kPresetNames; }

Scenario preset(std::string_view name) {
    Scenario s;
    if (name == "nls-a1") {
        s = nls(1.0);
    } else if (name == "nls-a2") {
        s = nls(2.0);
    } else if (name == "manakov") {
        s = manakov();
    } else if (name == "manakov-stability-sweep") {
        s = stability_sweep().front();
        s.name = "manakov-stability-sweep";
    } else if (name == "collision") {
        s = collision();
    } else if (name == "group-velocity-a") {
        s = group_velocity(0.7, "group-velocity-a");
    } else if (name == "group-velocity-b") {
        s = group_velocity(0.95, "group-velocity-b");
    } else if (name == "explicit-vs-implicit") {
        s = explicit_vs_implicit();
    } else if (name == "rectangular-decay") {
        s = rectangular_decay();
    } else {
        std::string valid;
        for (const auto n : kPresetNames) valid += (valid.empty() ? "" : ", ") + std::string(n);
        throw ValidationError("unknown preset '" + std::string(name) + "'; valid presets: " + valid);
    }
    return s;
}

Scenario with_steps(const Scenario& s, std::size_t n_time) {
    if (n_time < 1) throw ValidationError("step count must be >= 1");
    const std::size_t observations = std::max<std::size_t>(1, s.grid.n_time() / s.observe_every);
    Scenario out = s;
    out.grid = s.grid.with_time(s.grid.final_time() / static_cast<double>(n_time), n_time);
    out.observe_every = std::max<std::size_t>(1, n_time / observations);
    return out;
}

Scenario scheme_variant(const Scenario& s, Scheme scheme) {
    if (s.scheme == scheme) return s;
    Scenario out = s;
    out.scheme = scheme;
    if (scheme == Scheme::Implicit) return out;

    if (s.name == "explicit-vs-implicit") {
        out.grid = s.grid.with_time(4e-5, 1000000);
        out.observe_every = 10000;
        return out;
    }
    const FieldState start = initial_state(s);
    const double rho = stability_rho(s.phys, s.grid, invariants(start));
    const double needed = std::ceil(s.grid.final_time() * rho / kExplicitRhoTau);
    const auto n_time = std::max<std::size_t>(s.grid.n_time(), static_cast<std::size_t>(needed));
    return with_steps(out, n_time);
}

std::vector<std::size_t> stability_sweep_steps() {
    std::vector<std::size_t> steps;
    for (int i = 0; i < 6; ++i) {
        steps.push_back(static_cast<std::size_t>(std::llround(std::pow(10.0, 4.0 + 0.4 * i))));
    }
    return steps;
}

std::vector<Scenario> stability_sweep() {
    const Scenario base = manakov();
    std::vector<Scenario> members;
    for (const std::size_t n : stability_sweep_steps()) {
        Scenario s = base;
        s.name = "manakov-sweep-n" + std::to_string(n);
        s.grid = base.grid.with_time(base.grid.final_time() / static_cast<double>(n), n);
        s.observe_every = std::max<std::size_t>(1, n / 100);
        members.push_back(std::move(s));
    }
    return members;
}

std::vector<double> rectangular_widths() { return {1.0, 2.0, 3.0, 4.0}; }

}  // namespace cnlse
