#include "cnlse/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "cnlse/errors.hpp"

namespace cnlse {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Thrown by the value parsers; converted to ParseError with a line number.
struct BadValue {
    std::string message;
};

double parse_real(std::string_view key, std::string_view text) {
    const std::string buffer(text);
    char* end = nullptr;
    const double value = std::strtod(buffer.c_str(), &end);
    if (buffer.empty() || end != buffer.c_str() + buffer.size()) {
        throw BadValue{"'" + std::string(key) + "' expects a real number, got '" + buffer + "'"};
    }
    return value;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view text) {
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw BadValue{"'" + std::string(key) + "' expects a non-negative integer, got '" +
                       std::string(text) + "'"};
    }
    return value;
}

struct GridDraft {
    std::optional<double> x_min, x_max, h, tau;
    std::optional<std::size_t> n_space, n_time;

    static GridDraft from(const Grid& g) {
        GridDraft d;
        d.x_min = g.x_min();
        d.x_max = g.x_max();
        d.n_space = g.n_space();
        d.tau = g.tau();
        d.n_time = g.n_time();
        return d;
    }

    Grid build() const {
        auto need = [](const auto& field, const char* key) {
            if (!field) throw ValidationError(std::string("missing required key '") + key + "'");
            return *field;
        };
        const double lo = need(x_min, "x_min");
        const double hi = need(x_max, "x_max");
        if (n_space && h) throw ValidationError("give either n_space or h, not both");
        std::size_t n = 0;
        if (h) {
            if (!(*h > 0.0) || !std::isfinite(*h)) throw ValidationError("h must be > 0");
            if (!(hi > lo)) throw ValidationError("x_max must exceed x_min");
            const double cells = (hi - lo) / *h;
            const double rounded = std::round(cells);
            if (rounded < 2.0 || std::abs(cells - rounded) > 1e-9 * rounded) {
                std::ostringstream msg;
                msg << "h = " << *h << " does not divide [" << lo << ", " << hi
                    << "] into a whole number (>= 2) of cells";
                throw ValidationError(msg.str());
            }
            n = static_cast<std::size_t>(rounded) - 1;
        } else {
            n = need(n_space, "n_space (or h)");
        }
        return Grid(lo, hi, n, need(tau, "tau"), need(n_time, "n_time"));
    }
};

constexpr std::string_view kPhysicsKeys[] = {"sigma", "k", "a", "b", "c", "d"};

bool apply_ic_key(InitialCondition& ic, std::string_view field, std::string_view key,
                  std::string_view value) {
    if (field == "kind") {
        try {
            ic.kind = parse_pulse_kind(value);
        } catch (const ValidationError& e) {
            throw BadValue{e.what()};
        }
    } else if (field == "amplitude") {
        ic.amplitude = parse_real(key, value);
    } else if (field == "offset") {
        ic.offset = parse_real(key, value);
    } else if (field == "velocity") {
        ic.velocity = parse_real(key, value);
    } else if (field == "width") {
        ic.width = parse_real(key, value);
    } else {
        return false;
    }
    return true;
}

/// Returns false for an unknown key.
bool apply_key(Scenario& s, GridDraft& grid, std::string_view key, std::string_view value) {
    auto enum_value = [&](auto parse) {
        try {
            return parse(value);
        } catch (const ValidationError& e) {
            throw BadValue{e.what()};
        }
    };

    if (key == "name") {
        s.name = std::string(value);
    } else if (key == "x_min") {
        grid.x_min = parse_real(key, value);
    } else if (key == "x_max") {
        grid.x_max = parse_real(key, value);
    } else if (key == "n_space") {
        grid.n_space = parse_integer<std::size_t>(key, value);
        grid.h.reset();
    } else if (key == "h") {
        grid.h = parse_real(key, value);
        grid.n_space.reset();
    } else if (key == "tau") {
        grid.tau = parse_real(key, value);
    } else if (key == "n_time") {
        grid.n_time = parse_integer<std::size_t>(key, value);
    } else if (key == "sigma") {
        s.phys.sigma = parse_real(key, value);
    } else if (key == "k") {
        s.phys.k = parse_real(key, value);
    } else if (key == "a") {
        s.phys.a = parse_real(key, value);
    } else if (key == "b") {
        s.phys.b = parse_real(key, value);
    } else if (key == "c") {
        s.phys.c = parse_real(key, value);
    } else if (key == "d") {
        s.phys.d = parse_real(key, value);
    } else if (key == "scheme") {
        s.scheme = enum_value(parse_scheme);
    } else if (key == "observe_every") {
        s.observe_every = parse_integer<std::size_t>(key, value);
    } else if (key == "oracle") {
        s.oracle = enum_value(parse_oracle_kind);
    } else if (key == "policy.tol") {
        s.policy.tol = parse_real(key, value);
    } else if (key == "policy.max_iters") {
        s.policy.max_iters = parse_integer<int>(key, value);
    } else if (key == "policy.divergence_factor") {
        s.policy.divergence_factor = parse_real(key, value);
    } else if (key == "policy.method") {
        s.policy.method = enum_value(parse_iteration_method);
    } else if (key.starts_with("ic_u.")) {
        return apply_ic_key(s.ic_u, key.substr(5), key, value);
    } else if (key.starts_with("ic_v.")) {
        return apply_ic_key(s.ic_v, key.substr(5), key, value);
    } else {
        return false;
    }
    return true;
}

std::string format_real(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

}  // namespace

Scenario load_scenario(std::string_view document) {
    Scenario scenario;
    GridDraft grid;
    std::set<std::string, std::less<>> seen;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= document.size()) {
        const auto newline = document.find('\n', pos);
        const auto raw = document.substr(
            pos, newline == std::string_view::npos ? std::string_view::npos : newline - pos);
        pos = newline == std::string_view::npos ? document.size() + 1 : newline + 1;
        ++line_no;

        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "missing key before '='");
        if (value.empty()) throw ParseError(line_no, "missing value for '" + std::string(key) + "'");
        if (!seen.insert(std::string(key)).second) {
            throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
        }
        try {
            if (!apply_key(scenario, grid, key, value)) {
                throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
            }
        } catch (const BadValue& bad) {
            throw ParseError(line_no, bad.message);
        }
    }

    if (seen.contains("n_space") && seen.contains("h")) {
        throw ValidationError("give either n_space or h, not both");
    }
    for (const auto key : kPhysicsKeys) {
        if (!seen.contains(key)) {
            throw ValidationError("missing required physics key '" + std::string(key) + "'");
        }
    }
    scenario.grid = grid.build();
    validate_scenario(scenario);
    return scenario;
}

void set_scenario_key(Scenario& scenario, std::string_view key, std::string_view value) {
    Scenario updated = scenario;
    GridDraft grid = GridDraft::from(scenario.grid);
    try {
        if (!apply_key(updated, grid, trim(key), trim(value))) {
            throw ValidationError("unknown key '" + std::string(key) + "'");
        }
    } catch (const BadValue& bad) {
        throw ValidationError(bad.message);
    }
    updated.grid = grid.build();
    scenario = std::move(updated);
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    auto put = [&](std::string_view key, const std::string& value) {
        out << key << " = " << value << '\n';
    };
    auto put_ic = [&](std::string_view prefix, const InitialCondition& ic) {
        const std::string p(prefix);
        put(p + ".kind", std::string(to_string(ic.kind)));
        put(p + ".amplitude", format_real(ic.amplitude));
        put(p + ".offset", format_real(ic.offset));
        put(p + ".velocity", format_real(ic.velocity));
        put(p + ".width", format_real(ic.width));
    };

    put("name", s.name);
    out << "\n# grid: h = (x_max - x_min) / (n_space + 1), final time = tau * n_time\n";
    put("x_min", format_real(s.grid.x_min()));
    put("x_max", format_real(s.grid.x_max()));
    put("n_space", std::to_string(s.grid.n_space()));
    put("tau", format_real(s.grid.tau()));
    put("n_time", std::to_string(s.grid.n_time()));
    out << "\n# physics\n";
    put("sigma", format_real(s.phys.sigma));
    put("k", format_real(s.phys.k));
    put("a", format_real(s.phys.a));
    put("b", format_real(s.phys.b));
    put("c", format_real(s.phys.c));
    put("d", format_real(s.phys.d));
    out << "\n# initial conditions\n";
    put_ic("ic_u", s.ic_u);
    put_ic("ic_v", s.ic_v);
    out << "\n# solver\n";
    put("scheme", std::string(to_string(s.scheme)));
    put("policy.tol", format_real(s.policy.tol));
    put("policy.max_iters", std::to_string(s.policy.max_iters));
    put("policy.divergence_factor", format_real(s.policy.divergence_factor));
    put("policy.method", std::string(to_string(s.policy.method)));
    put("observe_every", std::to_string(s.observe_every));
    put("oracle", std::string(to_string(s.oracle)));
    return out.str();
}

}  // namespace cnlse
