#include "cnlse/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cnlse/errors.hpp"

namespace cnlse {

Grid::Grid(double x_min, double x_max, std::size_t n_space, double tau, std::size_t n_time)
    : x_min_(x_min), x_max_(x_max), n_space_(n_space), tau_(tau), n_time_(n_time) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
        throw ValidationError("grid: x_max must exceed x_min (h > 0)");
    }
    if (n_space == 0) {
        throw ValidationError("grid: n_space must be at least 1");
    }
    if (!std::isfinite(tau) || !(tau > 0.0)) {
        throw ValidationError("grid: tau must be positive");
    }
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(n_space_);
    for (std::size_t i = 0; i < n_space_; ++i) x[i] = node(i);
    return x;
}

Grid Grid::with_time(double tau, std::size_t n_time) const {
    return Grid(x_min_, x_max_, n_space_, tau, n_time);
}

void Physics::validate() const {
    const std::pair<const char*, double> coefficients[] = {
        {"sigma", sigma}, {"k", k}, {"a", a}, {"b", b}, {"c", c}, {"d", d}};
    for (const auto& [name, value] : coefficients) {
        if (!std::isfinite(value) || value < 0.0) {
            throw ValidationError(std::string("physics: ") + name + " must be finite and >= 0");
        }
    }
}

bool FieldState::is_finite() const noexcept {
    auto finite = [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    return std::all_of(u.begin(), u.end(), finite) && std::all_of(v.begin(), v.end(), finite);
}

void FieldState::check() const {
    if (u.size() != v.size()) {
        throw InvalidStateError("field state: u and v lengths differ (" + std::to_string(u.size()) +
                                " vs " + std::to_string(v.size()) + ")");
    }
    if (!is_finite()) {
        throw InvalidStateError("field state: non-finite entry");
    }
}

double sum_squares(std::span<const Complex> field) noexcept {
    double s = 0.0;
    for (const Complex& z : field) s += std::norm(z);
    return s;
}

double discrete_l2_norm(std::span<const Complex> field, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ValidationError("discrete_l2_norm: h must be positive");
    }
    const double s = sum_squares(field);
    if (!std::isfinite(s)) {
        throw InvalidStateError("discrete_l2_norm: non-finite entry");
    }
    return h * std::sqrt(s);
}

InvariantPair invariants(const FieldState& state) {
    state.check();
    return {sum_squares(state.u), sum_squares(state.v)};
}

Amplitudes max_amplitude(const FieldState& state) {
    state.check();
    Amplitudes out;
    for (const Complex& z : state.u) out.u = std::max(out.u, std::abs(z));
    for (const Complex& z : state.v) out.v = std::max(out.v, std::abs(z));
    return out;
}

double relative_drift(const InvariantPair& initial, const InvariantPair& now) noexcept {
    auto one = [](double i0, double i1) {
        return i0 > 0.0 ? std::abs(i1 / i0 - 1.0) : std::abs(i1);
    };
    const double du = one(initial.i_u, now.i_u);
    const double dv = one(initial.i_v, now.i_v);
    if (std::isnan(du) || std::isnan(dv)) return std::numeric_limits<double>::infinity();
    return std::max(du, dv);
}

}  // namespace cnlse
