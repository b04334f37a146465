#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "cnlse/field.hpp"

namespace cnlse {

/// Thomas algorithm for a complex tridiagonal system.
///
/// `lower[i]` multiplies y[i] in row i+1, `upper[i]` multiplies y[i+1] in
/// row i. No pivoting; a pivot that vanishes (or becomes non-finite) raises
/// SolverError.
Field solve_tridiagonal(std::span<const Complex> lower, std::span<const Complex> diag,
                        std::span<const Complex> upper, std::span<const Complex> rhs);

/// Same algorithm for repeated solves: constant off-diagonals, caller-owned
/// scratch. `x` may alias `rhs`.
class TridiagonalSolver {
public:
    void solve(Complex lower, std::span<const Complex> diag, Complex upper,
               std::span<const Complex> rhs, std::span<Complex> x);

private:
    std::vector<Complex> c_prime_;
    std::vector<Complex> d_prime_;
};

using Block4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

/// Block Thomas algorithm for a real block-tridiagonal system with 4x4
/// blocks. Off-diagonal blocks are constant along the diagonal; the solution
/// overwrites `rhs`.
class BlockTridiagonalSolver {
public:
    void solve(const Block4& lower, std::span<const Block4> diag, const Block4& upper,
               std::span<Vec4> rhs);

private:
    std::vector<Block4> x_;  // D'_i^{-1} * upper
};

}  // namespace cnlse
