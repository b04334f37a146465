#include "cnlse/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "cnlse/errors.hpp"

namespace cnlse {

namespace {

inline Complex times_i(Complex z) noexcept { return {-z.imag(), z.real()}; }

/// Stencil of  i s sigma D1 + k D2  for one mode (s = +1 for U, -1 for V):
/// (H w)_i = plus * w_{i+1} + centre * w_i + minus * w_{i-1}.
struct Stencil {
    Complex plus;
    double centre;
    Complex minus;
};

Stencil stencil(const Physics& phys, const Grid& grid, double sign) {
    const double h = grid.h();
    const double k_term = phys.k / (h * h);
    const double sigma_term = sign * phys.sigma / (2.0 * h);
    return {Complex(k_term, sigma_term), -2.0 * k_term, Complex(k_term, -sigma_term)};
}

/// 2x2 real block of multiplication by z acting on (re, im).
void put_complex(Block4& block, int row, int col, Complex z) {
    block(row, col) = z.real();
    block(row, col + 1) = -z.imag();
    block(row + 1, col) = z.imag();
    block(row + 1, col + 1) = z.real();
}

std::size_t step_from_time(const FieldState& state, const Grid& grid) {
    return static_cast<std::size_t>(std::llround(state.time / grid.tau())) + 1;
}

void check_shape(const FieldState& state, const Grid& grid) {
    state.check();
    if (state.size() != grid.n_space()) {
        throw InvalidStateError("field length " + std::to_string(state.size()) +
                                " does not match grid n_space " + std::to_string(grid.n_space()));
    }
}

void fill_nonlinearity(const Physics& phys, const Field& u0, const Field& v0, const Field& u1,
                       const Field& v1, std::vector<double>& g_u, std::vector<double>& g_v) {
    const std::size_t n = u0.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double mod_u = std::norm(0.5 * (u0[i] + u1[i]));
        const double mod_v = std::norm(0.5 * (v0[i] + v1[i]));
        g_u[i] = phys.a * mod_u + phys.b * mod_v;
        g_v[i] = phys.c * mod_v + phys.d * mod_u;
    }
}

}  // namespace

std::string_view to_string(Scheme scheme) noexcept {
    return scheme == Scheme::Explicit ? "explicit" : "implicit";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "explicit") return Scheme::Explicit;
    if (text == "implicit") return Scheme::Implicit;
    throw ValidationError("unknown scheme '" + std::string(text) + "' (expected explicit|implicit)");
}

std::string_view to_string(IterationMethod method) noexcept {
    return method == IterationMethod::Newton ? "newton" : "picard";
}

IterationMethod parse_iteration_method(std::string_view text) {
    if (text == "newton") return IterationMethod::Newton;
    if (text == "picard") return IterationMethod::Picard;
    throw ValidationError("unknown iteration method '" + std::string(text) +
                          "' (expected newton|picard)");
}

void IterationPolicy::validate() const {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ValidationError("policy: tol must be > 0");
    if (max_iters < 1) throw ValidationError("policy: max_iters must be >= 1");
    if (!(divergence_factor > 1.0) || !std::isfinite(divergence_factor)) {
        throw ValidationError("policy: divergence_factor must be > 1");
    }
}

// ---------------------------------------------------------------------------
// Explicit

ExplicitStepper::ExplicitStepper(const Physics& phys, const Grid& grid)
    : phys_(phys), grid_(grid), du_(grid.n_space()), dv_(grid.n_space()) {}

void ExplicitStepper::advance(FieldState& state, std::size_t step_index) {
    const std::size_t n = state.size();
    const Stencil su = stencil(phys_, grid_, +1.0);
    const Stencil sv = stencil(phys_, grid_, -1.0);
    const double tau = grid_.tau();
    const Field& u = state.u;
    const Field& v = state.v;

    for (std::size_t i = 0; i < n; ++i) {
        const Complex u_prev = i > 0 ? u[i - 1] : Complex{};
        const Complex u_next = i + 1 < n ? u[i + 1] : Complex{};
        const Complex v_prev = i > 0 ? v[i - 1] : Complex{};
        const Complex v_next = i + 1 < n ? v[i + 1] : Complex{};
        const double mod_u = std::norm(u[i]);
        const double mod_v = std::norm(v[i]);
        const double g_u = phys_.a * mod_u + phys_.b * mod_v;
        const double g_v = phys_.c * mod_v + phys_.d * mod_u;
        const Complex hu = su.plus * u_next + (su.centre + g_u) * u[i] + su.minus * u_prev;
        const Complex hv = sv.plus * v_next + (sv.centre + g_v) * v[i] + sv.minus * v_prev;
        du_[i] = tau * times_i(hu);
        dv_[i] = tau * times_i(hv);
    }

    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        state.u[i] += du_[i];
        state.v[i] += dv_[i];
        energy += std::norm(state.u[i]) + std::norm(state.v[i]);
    }
    state.time += tau;
    if (!std::isfinite(energy)) {
        throw BlowUpError(step_index, "explicit step " + std::to_string(step_index) +
                                          " produced non-finite values");
    }
}

FieldState explicit_step(const FieldState& state, const Physics& phys, const Grid& grid) {
    check_shape(state, grid);
    FieldState next = state;
    ExplicitStepper(phys, grid).advance(next, step_from_time(state, grid));
    return next;
}

// ---------------------------------------------------------------------------
// Implicit

ImplicitStepper::ImplicitStepper(const Physics& phys, const Grid& grid,
                                 const IterationPolicy& policy)
    : phys_(phys), grid_(grid), policy_(policy) {
    policy_.validate();
    const std::size_t n = grid.n_space();
    next_u_.resize(n);
    next_v_.resize(n);
    g_u_.resize(n);
    g_v_.resize(n);
    if (policy_.method == IterationMethod::Picard) {
        rhs_.resize(n);
        diag_.resize(n);
        solved_u_.resize(n);
        solved_v_.resize(n);
    } else {
        jacobian_diag_.resize(n);
        update_.resize(n);
    }
}

StepReport ImplicitStepper::advance(FieldState& state, std::size_t step_index) {
    return policy_.method == IterationMethod::Newton ? advance_newton(state, step_index)
                                                     : advance_picard(state, step_index);
}

void ImplicitStepper::check_update(double change, double& best, int iteration,
                                   std::size_t step_index) const {
    if (!std::isfinite(change)) {
        throw IterationFailureError(step_index, iteration, change,
                                    "implicit step " + std::to_string(step_index) +
                                        ": iteration produced non-finite values");
    }
    if (iteration > 1 && change > policy_.divergence_factor * best) {
        std::ostringstream msg;
        msg << "implicit step " << step_index << ": iteration diverged (update " << change
            << " after best " << best << ")";
        throw IterationFailureError(step_index, iteration, change, msg.str());
    }
    best = std::min(best, change);
}

StepReport ImplicitStepper::advance_picard(FieldState& state, std::size_t step_index) {
    const std::size_t n = state.size();
    const double half_tau = 0.5 * grid_.tau();
    const Field& u0 = state.u;
    const Field& v0 = state.v;
    next_u_ = u0;
    next_v_ = v0;

    // (1 - i tau/2 (H + g)) W^{n+1} = (1 + i tau/2 (H + g)) W^n, g frozen.
    auto solve_mode = [&](const Stencil& s, const Field& w0, const std::vector<double>& g,
                          Field& out) {
        for (std::size_t i = 0; i < n; ++i) {
            const Complex w_prev = i > 0 ? w0[i - 1] : Complex{};
            const Complex w_next = i + 1 < n ? w0[i + 1] : Complex{};
            const double centre = s.centre + g[i];
            const Complex hw = s.plus * w_next + centre * w0[i] + s.minus * w_prev;
            rhs_[i] = w0[i] + half_tau * times_i(hw);
            diag_[i] = Complex(1.0, -half_tau * centre);
        }
        tridiagonal_.solve(-half_tau * times_i(s.minus), diag_, -half_tau * times_i(s.plus), rhs_,
                           out);
    };

    const Stencil su = stencil(phys_, grid_, +1.0);
    const Stencil sv = stencil(phys_, grid_, -1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int iteration = 1; iteration <= policy_.max_iters; ++iteration) {
        fill_nonlinearity(phys_, u0, v0, next_u_, next_v_, g_u_, g_v_);
        solve_mode(su, u0, g_u_, solved_u_);
        solve_mode(sv, v0, g_v_, solved_v_);

        double change = 0.0;
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            change += std::norm(solved_u_[i] - next_u_[i]) + std::norm(solved_v_[i] - next_v_[i]);
            norm += std::norm(solved_u_[i]) + std::norm(solved_v_[i]);
        }
        const double residual = norm > 0.0 ? std::sqrt(change / norm) : std::sqrt(change);
        std::swap(next_u_, solved_u_);
        std::swap(next_v_, solved_v_);
        check_update(residual, best, iteration, step_index);
        if (residual <= policy_.tol) {
            std::swap(state.u, next_u_);
            std::swap(state.v, next_v_);
            state.time += grid_.tau();
            return {iteration, residual};
        }
    }
    throw IterationFailureError(step_index, policy_.max_iters, best,
                                "implicit step " + std::to_string(step_index) +
                                    ": no convergence within " +
                                    std::to_string(policy_.max_iters) + " iterations");
}

StepReport ImplicitStepper::advance_newton(FieldState& state, std::size_t step_index) {
    const std::size_t n = state.size();
    const double tau = grid_.tau();
    const double half_tau = 0.5 * tau;
    const Field& u0 = state.u;
    const Field& v0 = state.v;
    next_u_ = u0;
    next_v_ = v0;

    const Stencil su = stencil(phys_, grid_, +1.0);
    const Stencil sv = stencil(phys_, grid_, -1.0);

    // Neighbour coupling of the Jacobian does not depend on the iterate.
    Block4 lower = Block4::Zero();
    Block4 upper = Block4::Zero();
    put_complex(lower, 0, 0, -half_tau * times_i(su.minus));
    put_complex(lower, 2, 2, -half_tau * times_i(sv.minus));
    put_complex(upper, 0, 0, -half_tau * times_i(su.plus));
    put_complex(upper, 2, 2, -half_tau * times_i(sv.plus));

    double best = std::numeric_limits<double>::infinity();
    for (int iteration = 1; iteration <= policy_.max_iters; ++iteration) {
        fill_nonlinearity(phys_, u0, v0, next_u_, next_v_, g_u_, g_v_);

        for (std::size_t i = 0; i < n; ++i) {
            auto half = [&](const Field& w0, const Field& w1, std::size_t j) {
                return 0.5 * (w0[j] + w1[j]);
            };
            const Complex uh = half(u0, next_u_, i);
            const Complex vh = half(v0, next_v_, i);
            const Complex uh_prev = i > 0 ? half(u0, next_u_, i - 1) : Complex{};
            const Complex uh_next = i + 1 < n ? half(u0, next_u_, i + 1) : Complex{};
            const Complex vh_prev = i > 0 ? half(v0, next_v_, i - 1) : Complex{};
            const Complex vh_next = i + 1 < n ? half(v0, next_v_, i + 1) : Complex{};

            // F = W^{n+1} - W^n - i tau [H W^{n+1/2} + g W^{n+1/2}]
            const Complex hu = su.plus * uh_next + (su.centre + g_u_[i]) * uh + su.minus * uh_prev;
            const Complex hv = sv.plus * vh_next + (sv.centre + g_v_[i]) * vh + sv.minus * vh_prev;
            const Complex f_u = next_u_[i] - u0[i] - tau * times_i(hu);
            const Complex f_v = next_v_[i] - v0[i] - tau * times_i(hv);
            update_[i] = Vec4(-f_u.real(), -f_u.imag(), -f_v.real(), -f_v.imag());

            Block4& jac = jacobian_diag_[i];
            jac.setZero();
            put_complex(jac, 0, 0, Complex(1.0, -half_tau * (su.centre + g_u_[i])));
            put_complex(jac, 2, 2, Complex(1.0, -half_tau * (sv.centre + g_v_[i])));
            // d/dW of -i tau W^{n+1/2} g(|U^{n+1/2}|^2, |V^{n+1/2}|^2):
            // column (tau s Im w, -tau s Re w) times row (Re z, Im z).
            const Eigen::Vector2d col_u(tau * uh.imag(), -tau * uh.real());
            const Eigen::Vector2d col_v(tau * vh.imag(), -tau * vh.real());
            const Eigen::RowVector2d row_u(uh.real(), uh.imag());
            const Eigen::RowVector2d row_v(vh.real(), vh.imag());
            jac.block<2, 2>(0, 0) += phys_.a * col_u * row_u;
            jac.block<2, 2>(0, 2) += phys_.b * col_u * row_v;
            jac.block<2, 2>(2, 2) += phys_.c * col_v * row_v;
            jac.block<2, 2>(2, 0) += phys_.d * col_v * row_u;
        }

        block_solver_.solve(lower, jacobian_diag_, upper, update_);

        double change = 0.0;
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec4& du = update_[i];
            next_u_[i] += Complex(du[0], du[1]);
            next_v_[i] += Complex(du[2], du[3]);
            change += du.squaredNorm();
            norm += std::norm(next_u_[i]) + std::norm(next_v_[i]);
        }
        const double residual = norm > 0.0 ? std::sqrt(change / norm) : std::sqrt(change);
        check_update(residual, best, iteration, step_index);
        if (residual <= policy_.tol) {
            std::swap(state.u, next_u_);
            std::swap(state.v, next_v_);
            state.time += tau;
            return {iteration, residual};
        }
    }
    throw IterationFailureError(step_index, policy_.max_iters, best,
                                "implicit step " + std::to_string(step_index) +
                                    ": no convergence within " +
                                    std::to_string(policy_.max_iters) + " iterations");
}

std::pair<FieldState, StepReport> implicit_step(const FieldState& state, const Physics& phys,
                                                const Grid& grid, const IterationPolicy& policy) {
    check_shape(state, grid);
    FieldState next = state;
    ImplicitStepper stepper(phys, grid, policy);
    const StepReport report = stepper.advance(next, step_from_time(state, grid));
    return {std::move(next), report};
}

}  // namespace cnlse
