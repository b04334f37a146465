#pragma once

#include <string_view>

#include "cnlse/field.hpp"

namespace cnlse {

/// Closed-form growth-rate bound of the explicit scheme:
///   rho = 4 sigma/h + 16 k/h^2 + 4 max(a,d) I_u + 4 max(b,c) I_v
/// with the unweighted energies I_u, I_v. Independent of tau.
double stability_rho(const Physics& phys, const Grid& grid, const InvariantPair& inv);

enum class Verdict { StableRegime, Marginal, UnstableRegime };

std::string_view to_string(Verdict verdict) noexcept;

/// rho*tau measured against an empirical threshold (0.1 by default).
///  - stable-regime:   rho*tau <= threshold/2
///  - marginal:        threshold/2 < rho*tau <= threshold
///  - unstable-regime: rho*tau > threshold
struct StabilityBudget {
    double rho = 0.0;
    double rho_tau = 0.0;
    double threshold = 0.1;
    Verdict verdict = Verdict::StableRegime;
    /// Largest tau with rho*tau <= threshold (infinite when rho == 0).
    double recommended_tau = 0.0;
};

inline constexpr double kDefaultRhoThreshold = 0.1;

StabilityBudget stability_budget(const Physics& phys, const Grid& grid, const InvariantPair& inv,
                                 double threshold = kDefaultRhoThreshold);

/// Upper estimates of the blocks of the real-split explicit evolution
/// operator acting on (Re U, Im U, Re V, Im V).
struct ElementBounds {
    double t11 = 0.0, t12 = 0.0, t21 = 0.0, t22 = 0.0;
    double t33 = 0.0, t34 = 0.0, t43 = 0.0, t44 = 0.0;
};

ElementBounds element_bounds(const Physics& phys, const Grid& grid, const FieldState& state);

/// The per-step Frobenius bound
///   4 + 4 tau sigma/h + 16 tau k/h^2 + 2 tau (a I_u + b I_v + d I_u + c I_v),
/// returned as printed. No claim is made that it stays below exp(rho tau).
double matrix_norm_bound(const Physics& phys, const Grid& grid, const InvariantPair& inv);

/// Q = 4 | m (I_u + I_v)^{3/2} - m (I_ue + I_ve)^{3/2} |, m = max(a,b,c,d).
double convergence_q(const Physics& phys, const InvariantPair& numeric, const InvariantPair& exact);

}  // namespace cnlse
