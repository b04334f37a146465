#pragma once

#include <functional>

#include "cnlse/field.hpp"

namespace cnlse {

struct ModeValues {
    Complex u;
    Complex v;
};

/// Exact (U, V) at a point of the continuous problem.
using PointOracle = std::function<ModeValues(double x, double t)>;

/// sech(x) exp(i t/2): solves i U_t + U_xx/2 + |U|^2 U = 0.
Complex nls_fundamental_soliton(double x, double t);

/// Two-soliton bound state launched by U(x,0) = 2 sech(x) in the same
/// equation:
///   4 e^{it/2} [cosh 3x + 3 e^{4it} cosh x] / [cosh 4x + 4 cosh 2x + 3 cos 4t].
/// |U| is periodic in t with period pi/2. The variant without the factors 4
/// and 3 in the numerator evaluates to 1/4 at the origin and does not match
/// the initial pulse.
Complex nls_breather_a2(double x, double t);

/// U = V = A sech(x) exp(i k t) for the symmetric system a = b = c = d,
/// sigma = 0. Exists only when A^2 (a + b) = 2k; otherwise throws
/// UnsupportedParametersError naming the k that would be required.
ModeValues manakov_soliton(double x, double t, double amplitude, const Physics& phys);

/// Checks the constraints of manakov_soliton without evaluating it.
void check_manakov_parameters(double amplitude, const Physics& phys);

struct OracleError {
    double l2 = 0.0;   ///< h-weighted discrete L2 norm of (numeric - exact), both modes
    double max = 0.0;  ///< largest pointwise |numeric - exact| over both modes
};

/// Compares a state to an oracle sampled on the interior nodes at state.time.
OracleError error_vs_oracle(const FieldState& state, const PointOracle& oracle, const Grid& grid);

/// The oracle sampled on the interior nodes at time t.
FieldState sample_oracle(const PointOracle& oracle, const Grid& grid, double t);

}  // namespace cnlse
