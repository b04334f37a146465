#include "cnlse/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cnlse/errors.hpp"

namespace cnlse {

namespace {

double sech(double x) {
    // exp(-|x|) form avoids cosh overflow for large |x|.
    const double e = std::exp(-std::abs(x));
    return 2.0 * e / (1.0 + e * e);
}

}  // namespace

Complex nls_fundamental_soliton(double x, double t) {
    return sech(x) * std::polar(1.0, 0.5 * t);
}

Complex nls_breather_a2(double x, double t) {
    // Numerator and denominator scaled by exp(-4|x|); every term is even in x.
    const double ax = std::abs(x);
    const double e1 = std::exp(-ax);
    const double e2 = e1 * e1;
    const double e3 = e2 * e1;
    const double e4 = e2 * e2;
    const double e5 = e4 * e1;
    const double e6 = e4 * e2;
    const double e7 = e6 * e1;
    const double e8 = e4 * e4;

    const double cosh3 = 0.5 * (e1 + e7);  // cosh(3x) e^{-4|x|}
    const double cosh1 = 0.5 * (e3 + e5);  // cosh(x)  e^{-4|x|}
    const double cosh4 = 0.5 * (1.0 + e8);
    const double cosh2 = 0.5 * (e2 + e6);

    const Complex numerator = cosh3 + 3.0 * std::polar(1.0, 4.0 * t) * cosh1;
    const double denominator = cosh4 + 4.0 * cosh2 + 3.0 * std::cos(4.0 * t) * e4;
    return 4.0 * std::polar(1.0, 0.5 * t) * numerator / denominator;
}

void check_manakov_parameters(double amplitude, const Physics& phys) {
    if (!(phys.a == phys.b && phys.b == phys.c && phys.c == phys.d)) {
        throw UnsupportedParametersError("manakov soliton requires a = b = c = d");
    }
    if (phys.sigma != 0.0) {
        throw UnsupportedParametersError("manakov soliton requires sigma = 0");
    }
    const double required_k = 0.5 * amplitude * amplitude * (phys.a + phys.b);
    if (std::abs(required_k - phys.k) > 1e-12 * std::max(1.0, std::abs(required_k))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "manakov soliton with amplitude " << amplitude << " and a = b = " << phys.a
            << " requires k = " << required_k << " (got k = " << phys.k << ")";
        throw UnsupportedParametersError(msg.str());
    }
}

ModeValues manakov_soliton(double x, double t, double amplitude, const Physics& phys) {
    check_manakov_parameters(amplitude, phys);
    const Complex value = amplitude * sech(x) * std::polar(1.0, phys.k * t);
    return {value, value};
}

FieldState sample_oracle(const PointOracle& oracle, const Grid& grid, double t) {
    FieldState out;
    out.time = t;
    out.u.resize(grid.n_space());
    out.v.resize(grid.n_space());
    for (std::size_t i = 0; i < grid.n_space(); ++i) {
        const ModeValues m = oracle(grid.node(i), t);
        out.u[i] = m.u;
        out.v[i] = m.v;
    }
    return out;
}

OracleError error_vs_oracle(const FieldState& state, const PointOracle& oracle, const Grid& grid) {
    state.check();
    if (state.size() != grid.n_space()) {
        throw InvalidStateError("error_vs_oracle: state length does not match grid");
    }
    double sum = 0.0;
    OracleError out;
    for (std::size_t i = 0; i < grid.n_space(); ++i) {
        const ModeValues exact = oracle(grid.node(i), state.time);
        const double du = std::abs(state.u[i] - exact.u);
        const double dv = std::abs(state.v[i] - exact.v);
        sum += du * du + dv * dv;
        out.max = std::max({out.max, du, dv});
    }
    out.l2 = grid.h() * std::sqrt(sum);
    return out;
}

}  // namespace cnlse
