#include "cnlse/tridiagonal.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "cnlse/errors.hpp"

namespace cnlse {

namespace {

void check_pivot(const Complex& pivot, std::size_t row) {
    if (!(std::abs(pivot) > 0.0) || !std::isfinite(std::abs(pivot))) {
        throw SolverError("tridiagonal solve: zero pivot at row " + std::to_string(row));
    }
}

}  // namespace

Field solve_tridiagonal(std::span<const Complex> lower, std::span<const Complex> diag,
                        std::span<const Complex> upper, std::span<const Complex> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) throw ValidationError("tridiagonal solve: empty system");
    if (lower.size() != n - 1 || upper.size() != n - 1 || rhs.size() != n) {
        throw ValidationError("tridiagonal solve: inconsistent band lengths");
    }

    std::vector<Complex> c_prime(n);
    Field y(n);
    check_pivot(diag[0], 0);
    c_prime[0] = n > 1 ? upper[0] / diag[0] : Complex{};
    y[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const Complex pivot = diag[i] - lower[i - 1] * c_prime[i - 1];
        check_pivot(pivot, i);
        if (i + 1 < n) c_prime[i] = upper[i] / pivot;
        y[i] = (rhs[i] - lower[i - 1] * y[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        y[i] -= c_prime[i] * y[i + 1];
    }
    return y;
}

void TridiagonalSolver::solve(Complex lower, std::span<const Complex> diag, Complex upper,
                              std::span<const Complex> rhs, std::span<Complex> x) {
    const std::size_t n = diag.size();
    c_prime_.resize(n);
    d_prime_.resize(n);

    check_pivot(diag[0], 0);
    c_prime_[0] = upper / diag[0];
    d_prime_[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const Complex pivot = diag[i] - lower * c_prime_[i - 1];
        check_pivot(pivot, i);
        c_prime_[i] = upper / pivot;
        d_prime_[i] = (rhs[i] - lower * d_prime_[i - 1]) / pivot;
    }
    x[n - 1] = d_prime_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = d_prime_[i] - c_prime_[i] * x[i + 1];
    }
}

void BlockTridiagonalSolver::solve(const Block4& lower, std::span<const Block4> diag,
                                   const Block4& upper, std::span<Vec4> rhs) {
    const std::size_t n = diag.size();
    x_.resize(n);

    Block4 pivot = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            pivot.noalias() = diag[i] - lower * x_[i - 1];
            rhs[i] -= lower * rhs[i - 1];
        }
        Eigen::PartialPivLU<Block4> lu(pivot);
        const double det = lu.determinant();
        if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
            throw SolverError("block tridiagonal solve: singular pivot block at row " +
                              std::to_string(i));
        }
        x_[i] = lu.solve(upper);
        rhs[i] = lu.solve(rhs[i]);
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= x_[i] * rhs[i + 1];
    }
}

}  // namespace cnlse
