#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "cnlse/field.hpp"
#include "cnlse/tridiagonal.hpp"

namespace cnlse {

enum class Scheme { Explicit, Implicit };

std::string_view to_string(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view text);

/// How the nonlinear six-point system is solved at each step.
///  - Newton: full Newton on the real/imaginary split, one 4x4
///    block-tridiagonal solve per iteration, quadratic convergence.
///  - Picard: freeze |U^{n+1/2}|^2, |V^{n+1/2}|^2 from the previous iterate
///    and solve two complex tridiagonal systems; every iterate conserves
///    sum |U|^2 and sum |V|^2 exactly, convergence is linear with factor
///    roughly tau * max(a|U|^2 + ...).
enum class IterationMethod { Newton, Picard };

std::string_view to_string(IterationMethod method) noexcept;
IterationMethod parse_iteration_method(std::string_view text);

struct IterationPolicy {
    double tol = 1e-12;             ///< on ||W^{(m+1)} - W^{(m)}|| / ||W^{(m+1)}||
    int max_iters = 25;
    double divergence_factor = 10;  ///< abort once the update grows past this multiple of its best
    IterationMethod method = IterationMethod::Newton;

    void validate() const;
    bool operator==(const IterationPolicy&) const = default;
};

struct StepReport {
    int iterations_used = 0;  ///< linear solves performed; 0 for the explicit scheme
    double residual = 0.0;    ///< relative size of the last update
};

/// Forward-Euler step with centred differences:
///   U^{j+1} = U^j + i tau [ i sigma D1 U + k D2 U + (a|U|^2 + b|V|^2) U ]
///   V^{j+1} = V^j + i tau [-i sigma D1 V + k D2 V + (c|V|^2 + d|U|^2) V ]
/// with zero ghost nodes. Throws BlowUpError if the result is not finite.
FieldState explicit_step(const FieldState& state, const Physics& phys, const Grid& grid);

/// Crank-Nicolson six-point step with the nonlinearity evaluated at
/// (W^{n+1} + W^n)/2 and multiplying the same time average.
std::pair<FieldState, StepReport> implicit_step(const FieldState& state, const Physics& phys,
                                                const Grid& grid, const IterationPolicy& policy);

/// Reusable explicit stepper; advances in place.
class ExplicitStepper {
public:
    ExplicitStepper(const Physics& phys, const Grid& grid);

    /// `step_index` only labels errors.
    void advance(FieldState& state, std::size_t step_index = 0);

private:
    Physics phys_;
    Grid grid_;
    Field du_;
    Field dv_;
};

/// Reusable implicit stepper; advances in place.
class ImplicitStepper {
public:
    ImplicitStepper(const Physics& phys, const Grid& grid, const IterationPolicy& policy);

    StepReport advance(FieldState& state, std::size_t step_index = 0);

private:
    StepReport advance_picard(FieldState& state, std::size_t step_index);
    StepReport advance_newton(FieldState& state, std::size_t step_index);
    void check_update(double change, double& best, int iteration, std::size_t step_index) const;

    Physics phys_;
    Grid grid_;
    IterationPolicy policy_;

    Field next_u_, next_v_;
    std::vector<double> g_u_, g_v_;

    // Picard scratch
    Field rhs_, diag_, solved_u_, solved_v_;
    TridiagonalSolver tridiagonal_;

    // Newton scratch
    std::vector<Block4> jacobian_diag_;
    std::vector<Vec4> update_;
    BlockTridiagonalSolver block_solver_;
};

}  // namespace cnlse
