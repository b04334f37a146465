#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cnlse {

using Complex = std::complex<double>;
using Field = std::vector<Complex>;

/// Uniform space-time grid. Interior nodes i = 1..n_space sit at
/// x_min + i*h; the two boundary nodes carry identically zero field.
class Grid {
public:
    Grid() = default;

    /// Throws ValidationError unless x_max > x_min, n_space >= 1, tau > 0.
    Grid(double x_min, double x_max, std::size_t n_space, double tau, std::size_t n_time);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t n_space() const noexcept { return n_space_; }
    double h() const noexcept { return (x_max_ - x_min_) / static_cast<double>(n_space_ + 1); }
    double tau() const noexcept { return tau_; }
    std::size_t n_time() const noexcept { return n_time_; }
    double final_time() const noexcept { return tau_ * static_cast<double>(n_time_); }

    /// Position of interior node `index` (0-based, so index 0 is x_min + h).
    double node(std::size_t index) const noexcept {
        return x_min_ + static_cast<double>(index + 1) * h();
    }
    std::vector<double> nodes() const;

    Grid with_time(double tau, std::size_t n_time) const;

    bool operator==(const Grid&) const = default;

private:
    double x_min_ = -1.0;
    double x_max_ = 1.0;
    std::size_t n_space_ = 1;
    double tau_ = 1.0;
    std::size_t n_time_ = 0;
};

/// Coefficients of
///   i U_t + i sigma U_x + k U_xx + (a|U|^2 + b|V|^2) U = 0
///   i V_t - i sigma V_x + k V_xx + (c|V|^2 + d|U|^2) V = 0
struct Physics {
    double sigma = 0.0;
    double k = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    /// All six finite and non-negative, else ValidationError.
    void validate() const;

    bool operator==(const Physics&) const = default;
};

struct FieldState {
    Field u;
    Field v;
    double time = 0.0;

    std::size_t size() const noexcept { return u.size(); }

    /// Throws InvalidStateError on mismatched lengths or non-finite entries.
    void check() const;
    bool is_finite() const noexcept;

    bool operator==(const FieldState&) const = default;
};

/// Unweighted discrete energies I_u = sum |U_i|^2, I_v = sum |V_i|^2.
struct InvariantPair {
    double i_u = 0.0;
    double i_v = 0.0;
};

struct Amplitudes {
    double u = 0.0;
    double v = 0.0;
};

/// h * sqrt(sum |f_i|^2). This is the norm errors are reported in.
double discrete_l2_norm(std::span<const Complex> field, double h);

/// sum |f_i|^2; NaN/Inf propagate.
double sum_squares(std::span<const Complex> field) noexcept;

InvariantPair invariants(const FieldState& state);

Amplitudes max_amplitude(const FieldState& state);

/// Largest relative deviation of `now` from `initial`. A component whose
/// initial value is zero contributes its absolute value instead.
double relative_drift(const InvariantPair& initial, const InvariantPair& now) noexcept;

}  // namespace cnlse
