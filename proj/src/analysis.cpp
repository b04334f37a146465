#include "cnlse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cnlse/errors.hpp"

namespace cnlse {

double stability_rho(const Physics& phys, const Grid& grid, const InvariantPair& inv) {
    const double h = grid.h();
    return 4.0 * phys.sigma / h + 16.0 * phys.k / (h * h) + 4.0 * std::max(phys.a, phys.d) * inv.i_u +
           4.0 * std::max(phys.b, phys.c) * inv.i_v;
}

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
        case Verdict::StableRegime: return "stable-regime";
        case Verdict::Marginal: return "marginal";
        case Verdict::UnstableRegime: return "unstable-regime";
    }
    return "unknown";
}

StabilityBudget stability_budget(const Physics& phys, const Grid& grid, const InvariantPair& inv,
                                 double threshold) {
    if (!(threshold > 0.0) || !std::isfinite(threshold)) {
        throw ValidationError("stability threshold must be positive");
    }
    StabilityBudget budget;
    budget.threshold = threshold;
    budget.rho = stability_rho(phys, grid, inv);
    budget.rho_tau = budget.rho * grid.tau();
    if (budget.rho_tau > threshold) {
        budget.verdict = Verdict::UnstableRegime;
    } else if (budget.rho_tau > 0.5 * threshold) {
        budget.verdict = Verdict::Marginal;
    } else {
        budget.verdict = Verdict::StableRegime;
    }
    budget.recommended_tau =
        budget.rho > 0.0 ? threshold / budget.rho : std::numeric_limits<double>::infinity();
    return budget;
}

ElementBounds element_bounds(const Physics& phys, const Grid& grid, const FieldState& state) {
    const Amplitudes amp = max_amplitude(state);
    const double max_u2 = amp.u * amp.u;
    const double max_v2 = amp.v * amp.v;
    const double tau = grid.tau();
    const double h = grid.h();

    const double diagonal = 1.0 + tau * phys.sigma / h;
    const double dispersion = 4.0 * tau * phys.k / (h * h);
    const double upper = dispersion + tau * phys.a * max_u2 + tau * phys.b * max_v2;
    const double lower = dispersion + tau * phys.c * max_v2 + tau * phys.d * max_u2;

    ElementBounds out;
    out.t11 = out.t22 = out.t33 = out.t44 = diagonal;
    out.t12 = out.t21 = upper;
    out.t34 = out.t43 = lower;
    return out;
}

double matrix_norm_bound(const Physics& phys, const Grid& grid, const InvariantPair& inv) {
    const double tau = grid.tau();
    const double h = grid.h();
    return 4.0 + 4.0 * tau * phys.sigma / h + 16.0 * tau * phys.k / (h * h) +
           2.0 * tau * (phys.a * inv.i_u + phys.b * inv.i_v + phys.d * inv.i_u + phys.c * inv.i_v);
}

double convergence_q(const Physics& phys, const InvariantPair& numeric, const InvariantPair& exact) {
    const double m = std::max({phys.a, phys.b, phys.c, phys.d});
    const double numeric_energy = numeric.i_u + numeric.i_v;
    const double exact_energy = exact.i_u + exact.i_v;
    return 4.0 * std::abs(m * std::pow(numeric_energy, 1.5) - m * std::pow(exact_energy, 1.5));
}

}  // namespace cnlse
