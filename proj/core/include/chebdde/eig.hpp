#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "chebdde/matrix.hpp"
#include "chebdde/mesh.hpp"

namespace chebdde {

struct EigOptions {
    /// Grid the eigenvectors live on. When set, eigenvectors whose Chebyshev
    /// coefficients are not decaying are discarded as unresolved.
    std::optional<PiecewiseGrid> grid;
    /// Fraction of highest-degree coefficients that forms the tail.
    double tail_fraction = 0.2;
    /// Largest share of the coefficient mass the tail may hold.
    double tail_mass = 0.1;
    /// Relative perturbation of the eigenvalue used in inverse iteration.
    double inverse_iteration_shift = 1e-10;
    /// Inverse iteration steps; the shift follows the least-squares eigenvalue estimate.
    std::size_t inverse_iterations = 4;
    /// Refined eigenvalues farther than this (relative) from the QR estimate are discarded.
    double refinement_window = 1e-3;
};

struct EigResult {
    std::vector<std::complex<double>> eigenvalues;                // sorted by distance from the shift
    std::vector<std::vector<std::complex<double>>> eigenvectors;  // normalised to unit infinity norm
    std::vector<double> residuals;  // ||A v - lambda B v||_inf / ||v||_inf
    std::size_t n_used = 0;         // size of the discrete pencil
    std::size_t rejected = 0;       // finite eigenpairs discarded by the smoothness test
};

/// The k eigenpairs of A v = lambda B v nearest `shift`.
///
/// Works on the shift-inverted matrix (A - shift B)^-1 B, so singular B (rows
/// replaced by boundary conditions) is allowed; its infinite eigenvalues are
/// dropped. Throws ShiftCollisionError when A - shift B is singular.
[[nodiscard]] EigResult eig_generalized(const Matrix& a, const Matrix& b, std::size_t k, double shift = 0.0,
                                        const EigOptions& options = {});

/// Share of the Chebyshev coefficient mass (per panel, summed) held by the top
/// `tail_fraction` of the degrees.
[[nodiscard]] double chebyshev_tail_mass(const PiecewiseGrid& g, std::span<const double> values,
                                         double tail_fraction = 0.2);

/// Real parts of the eigenvectors as functions on g.
[[nodiscard]] std::vector<PiecewiseFunction> eigenfunctions(const EigResult& result, const PiecewiseGrid& g);

}  // namespace chebdde
