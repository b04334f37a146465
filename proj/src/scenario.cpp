#include "cnlse/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cnlse/errors.hpp"

namespace cnlse {

std::string_view to_string(PulseKind kind) noexcept {
    switch (kind) {
        case PulseKind::Sech: return "sech";
        case PulseKind::Rectangular: return "rectangular";
        case PulseKind::Zero: return "zero";
    }
    return "unknown";
}

PulseKind parse_pulse_kind(std::string_view text) {
    if (text == "sech") return PulseKind::Sech;
    if (text == "rectangular") return PulseKind::Rectangular;
    if (text == "zero") return PulseKind::Zero;
    throw ValidationError("unknown pulse kind '" + std::string(text) +
                          "' (expected sech|rectangular|zero)");
}

std::string_view to_string(OracleKind kind) noexcept {
    switch (kind) {
        case OracleKind::None: return "none";
        case OracleKind::NlsFundamental: return "nls-fundamental";
        case OracleKind::NlsA2: return "nls-a2";
        case OracleKind::Manakov: return "manakov";
    }
    return "unknown";
}

OracleKind parse_oracle_kind(std::string_view text) {
    if (text == "none") return OracleKind::None;
    if (text == "nls-fundamental") return OracleKind::NlsFundamental;
    if (text == "nls-a2") return OracleKind::NlsA2;
    if (text == "manakov") return OracleKind::Manakov;
    throw ValidationError("unknown oracle '" + std::string(text) +
                          "' (expected none|nls-fundamental|nls-a2|manakov)");
}

void InitialCondition::validate(std::string_view label) const {
    const std::string where(label);
    if (!std::isfinite(amplitude) || amplitude < 0.0) {
        throw ValidationError(where + ".amplitude must be finite and >= 0");
    }
    if (!std::isfinite(offset)) throw ValidationError(where + ".offset must be finite");
    if (!std::isfinite(velocity)) throw ValidationError(where + ".velocity must be finite");
    if (kind == PulseKind::Rectangular && !(width > 0.0 && std::isfinite(width))) {
        throw ValidationError(where + ".width must be > 0 for a rectangular pulse");
    }
}

Field sample_ic(const InitialCondition& ic, const Grid& grid) {
    Field out(grid.n_space());
    if (ic.kind == PulseKind::Zero) return out;
    const double edge_tol = 1e-9 * grid.h();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = grid.node(i);
        double envelope = 0.0;
        if (ic.kind == PulseKind::Sech) {
            envelope = ic.amplitude / std::cosh(x + ic.offset);
        } else {
            const double distance = std::abs(x + ic.offset) - 0.5 * ic.width;
            if (std::abs(distance) <= edge_tol) {
                envelope = 0.5 * ic.amplitude;
            } else if (distance < 0.0) {
                envelope = ic.amplitude;
            }
        }
        out[i] = envelope * std::polar(1.0, ic.velocity * x);
    }
    return out;
}

FieldState initial_state(const Scenario& scenario) {
    return FieldState{sample_ic(scenario.ic_u, scenario.grid), sample_ic(scenario.ic_v, scenario.grid),
                      0.0};
}

namespace {

bool is_centred_sech(const InitialCondition& ic) {
    return ic.kind == PulseKind::Sech && ic.offset == 0.0 && ic.velocity == 0.0;
}

void require_single_nls(const Scenario& s, double amplitude, std::string_view oracle) {
    const std::string name(oracle);
    const Physics& p = s.phys;
    if (p.sigma != 0.0 || p.k != 0.5 || p.a != 1.0 || p.c != 0.0 || p.d != 0.0) {
        throw UnsupportedParametersError("oracle " + name +
                                         " requires sigma=0, k=0.5, a=1, c=0, d=0");
    }
    if (!is_centred_sech(s.ic_u) || s.ic_u.amplitude != amplitude) {
        std::ostringstream msg;
        msg << "oracle " << name << " requires ic_u = " << amplitude
            << " sech(x) (offset 0, velocity 0)";
        throw UnsupportedParametersError(msg.str());
    }
    if (s.ic_v.kind != PulseKind::Zero && s.ic_v.amplitude != 0.0) {
        throw UnsupportedParametersError("oracle " + name + " requires ic_v to be zero");
    }
}

}  // namespace

PointOracle make_oracle(const Scenario& s) {
    switch (s.oracle) {
        case OracleKind::None:
            return {};
        case OracleKind::NlsFundamental:
            require_single_nls(s, 1.0, "nls-fundamental");
            return [](double x, double t) { return ModeValues{nls_fundamental_soliton(x, t), {}}; };
        case OracleKind::NlsA2:
            require_single_nls(s, 2.0, "nls-a2");
            return [](double x, double t) { return ModeValues{nls_breather_a2(x, t), {}}; };
        case OracleKind::Manakov: {
            if (!is_centred_sech(s.ic_u) || !(s.ic_u == s.ic_v)) {
                throw UnsupportedParametersError(
                    "oracle manakov requires identical centred sech pulses on both modes");
            }
            const double amplitude = s.ic_u.amplitude;
            check_manakov_parameters(amplitude, s.phys);
            const Physics phys = s.phys;
            return [amplitude, phys](double x, double t) {
                return manakov_soliton(x, t, amplitude, phys);
            };
        }
    }
    return {};
}

std::vector<std::string> validate_scenario(const Scenario& s) {
    if (s.name.empty() || s.name.find_first_of("#\n\r") != std::string::npos ||
        s.name.front() == ' ' || s.name.back() == ' ') {
        throw ValidationError("name must be non-empty, without surrounding spaces and contain no '#'");
    }
    // Grid invariants are enforced by its constructor; re-check in case the
    // value was default-constructed.
    (void)Grid(s.grid.x_min(), s.grid.x_max(), s.grid.n_space(), s.grid.tau(), s.grid.n_time());
    if (s.grid.n_time() < 1) throw ValidationError("n_time must be >= 1");
    s.phys.validate();
    s.policy.validate();
    s.ic_u.validate("ic_u");
    s.ic_v.validate("ic_v");
    if (s.observe_every < 1) throw ValidationError("observe_every must be >= 1");
    (void)make_oracle(s);

    std::vector<std::string> warnings;
    auto check_boundary = [&](const InitialCondition& ic, std::string_view label) {
        const Field f = sample_ic(ic, s.grid);
        double peak = 0.0;
        for (const Complex& z : f) peak = std::max(peak, std::abs(z));
        if (peak == 0.0) return;
        const double edge = std::max(std::abs(f.front()), std::abs(f.back()));
        if (edge > 1e-8 * peak) {
            std::ostringstream msg;
            msg << label << ": boundary-adjacent amplitude " << edge << " exceeds 1e-8 of the peak "
                << peak << "; widen the domain";
            warnings.push_back(msg.str());
        }
    };
    check_boundary(s.ic_u, "ic_u");
    check_boundary(s.ic_v, "ic_v");
    return warnings;
}

}  // namespace cnlse
