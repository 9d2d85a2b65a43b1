#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "chebdde/matrix.hpp"

namespace chebdde {

/// PA = LU with partial pivoting.
class LuFactorization {
public:
    /// Throws SingularMatrixError when a pivot is exactly zero after pivoting.
    explicit LuFactorization(Matrix a);

    [[nodiscard]] std::size_t size() const noexcept { return lu_.rows(); }
    [[nodiscard]] Vector solve(std::span<const double> b) const;
    /// Solves for every column of b.
    [[nodiscard]] Matrix solve(const Matrix& b) const;
    [[nodiscard]] Matrix inverse() const;
    /// ||A||_inf of the factorised matrix.
    [[nodiscard]] double norm_inf() const noexcept { return norm_; }
    /// ||A||_inf * ||A^-1||_inf through the explicit inverse.
    [[nodiscard]] double cond_inf() const;
    /// Smallest |U_ii| relative to the largest.
    [[nodiscard]] double pivot_ratio() const noexcept;

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    double norm_ = 0.0;
};

[[nodiscard]] Vector lu_solve(const Matrix& a, std::span<const double> b);

/// Infinity-norm condition number via the explicit inverse.
[[nodiscard]] double cond_inf(const Matrix& a);

/// In-place diagonal similarity scaling by powers of two that equalises row and column norms.
void balance(Matrix& a);

/// In-place Householder reduction to upper Hessenberg form (entries below the
/// first subdiagonal are set to zero).
void hessenberg(Matrix& a);

/// Eigenvalues of an upper Hessenberg matrix by the Francis double-shift QR
/// iteration. The matrix is destroyed. Throws std::runtime_error when the
/// iteration fails to converge.
[[nodiscard]] std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix h);

/// Eigenvalues of a general real square matrix (balance, Hessenberg, QR).
[[nodiscard]] std::vector<std::complex<double>> eigenvalues(Matrix a);

}  // namespace chebdde
