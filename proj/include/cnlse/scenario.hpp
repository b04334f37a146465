#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cnlse/field.hpp"
#include "cnlse/oracles.hpp"
#include "cnlse/schemes.hpp"

namespace cnlse {

enum class PulseKind { Sech, Rectangular, Zero };

std::string_view to_string(PulseKind kind) noexcept;
PulseKind parse_pulse_kind(std::string_view text);

/// One mode's initial profile. Both pulse kinds are centred at x = -offset
/// and carry the phase factor exp(i velocity x):
///   sech:        amplitude sech(x + offset) exp(i velocity x)
///   rectangular: amplitude on |x + offset| < width/2, zero outside; a node
///                sitting exactly on an edge gets amplitude/2.
struct InitialCondition {
    PulseKind kind = PulseKind::Zero;
    double amplitude = 0.0;
    double offset = 0.0;
    double velocity = 0.0;
    double width = 0.0;  ///< rectangular only

    void validate(std::string_view label) const;
    bool operator==(const InitialCondition&) const = default;
};

Field sample_ic(const InitialCondition& ic, const Grid& grid);

enum class OracleKind { None, NlsFundamental, NlsA2, Manakov };

std::string_view to_string(OracleKind kind) noexcept;
OracleKind parse_oracle_kind(std::string_view text);

struct Scenario {
    std::string name = "custom";
    Grid grid;
    Physics phys;
    InitialCondition ic_u;
    InitialCondition ic_v;
    Scheme scheme = Scheme::Implicit;
    IterationPolicy policy{};
    std::size_t observe_every = 1;
    OracleKind oracle = OracleKind::None;

    bool operator==(const Scenario&) const = default;
};

/// Throws ValidationError (UnsupportedParametersError for an oracle that
/// does not apply to the coefficients). Returns warnings, currently only
/// the boundary-decay rule: a mode whose boundary-adjacent amplitude
/// exceeds 1e-8 of its maximum is reported.
std::vector<std::string> validate_scenario(const Scenario& scenario);

FieldState initial_state(const Scenario& scenario);

/// The exact solution selected by `scenario.oracle`; empty for none.
/// Throws UnsupportedParametersError when the oracle does not apply.
PointOracle make_oracle(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Config documents: `key = value` per line, `#` starts a comment.

Scenario load_scenario(std::string_view document);
std::string serialize_scenario(const Scenario& scenario);

/// Applies one `key=value` assignment using the document's key names.
void set_scenario_key(Scenario& scenario, std::string_view key, std::string_view value);

// ---------------------------------------------------------------------------
// Presets

std::span<const std::string_view> preset_names();

/// Throws ValidationError listing the valid names for an unknown one.
Scenario preset(std::string_view name);

/// The scenario re-targeted to `scheme` at the same final time. Switching to
/// explicit picks the step count so that rho*tau <= 0.05 at the initial
/// invariants, except for explicit-vs-implicit, whose explicit branch uses
/// its own 1000000-step grid.
Scenario scheme_variant(const Scenario& scenario, Scheme scheme);

/// Same final time and number of observations with a new step count.
Scenario with_steps(const Scenario& scenario, std::size_t n_time);

/// Time-step counts of the stability sweep, log-uniform over [1e4, 1e6].
std::vector<std::size_t> stability_sweep_steps();

/// The six members of the stability sweep.
std::vector<Scenario> stability_sweep();

/// Pulse widths swept by the rectangular-decay experiment.
std::vector<double> rectangular_widths();

}  // namespace cnlse
