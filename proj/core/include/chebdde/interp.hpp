#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chebdde/matrix.hpp"

namespace chebdde {

enum class GridKind { chebyshev_lobatto, trig_uniform };

/// One collocation panel: nodes, barycentric weights and the interval they live on.
///
/// Chebyshev grids hold the n Chebyshev-Gauss-Lobatto points mapped to [a, b]
/// (both endpoints included, ascending) with the closed-form weights
/// 1/2, -1, 1, ..., +-1/2. Trigonometric grids hold n equispaced points on
/// [a, b); the right endpoint is identified with a.
class Grid {
public:
    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] double length() const noexcept { return b_ - a_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] GridKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::span<const double> bary_weights() const noexcept { return weights_; }

    friend Grid cheb_grid(std::size_t n, double a, double b);
    friend Grid trig_grid(std::size_t n, double a, double b);

private:
    Grid(double a, double b, std::vector<double> nodes, std::vector<double> weights, GridKind kind)
        : a_(a), b_(b), nodes_(std::move(nodes)), weights_(std::move(weights)), kind_(kind) {}

    double a_;
    double b_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    GridKind kind_;
};

/// Node values of a function on a single grid.
struct SampledFunction {
    Grid grid;
    std::vector<double> values;

    SampledFunction(Grid g, std::vector<double> v);
};

/// n-point Chebyshev-Gauss-Lobatto grid on [a, b]. Throws std::invalid_argument
/// for n < 2 or b <= a.
[[nodiscard]] Grid cheb_grid(std::size_t n, double a, double b);

/// n equispaced points on [a, b) for trigonometric interpolation.
[[nodiscard]] Grid trig_grid(std::size_t n, double a, double b);

/// Evaluates the interpolant of f at each point in tau (barycentric form).
/// Points that coincide with a node return that node's value exactly.
/// Works for both grid kinds; trigonometric evaluation wraps periodically.
[[nodiscard]] std::vector<double> bary_eval(const SampledFunction& f, std::span<const double> tau);

/// Pseudospectral differentiation matrix of the given order on a Chebyshev grid.
///
/// The first-order matrix uses off-diagonal entries w_k / (w_j (t_j - t_k)) with
/// the diagonal fixed by the negative-sum trick, so D * 1 = 0 to rounding.
/// Higher orders are formed as powers D^m. This loses a few digits against the
/// direct recurrences for large n and m (roughly a factor n^(2(m-1)) in the
/// rounding level), which is acceptable for the n <= 100 this library targets.
[[nodiscard]] Matrix diffmat(const Grid& g, unsigned order = 1);

/// Barycentric resampling matrix P(tau; t): row i evaluates the interpolant at tau[i].
/// Rows for points that coincide with a node are unit rows.
[[nodiscard]] Matrix barymat(std::span<const double> tau, const Grid& g);

/// Indefinite integration matrix: (Q y)_j = integral from a to t_j of the interpolant.
[[nodiscard]] Matrix cumsummat(const Grid& g);

/// Trigonometric resampling matrix; cot kernel for even n, csc kernel for odd n.
/// Points are reduced modulo the period (b - a) before evaluation.
[[nodiscard]] Matrix trig_barymat(std::span<const double> tau, const Grid& g);

/// Periodic spectral differentiation matrix of the given order on [a, b).
[[nodiscard]] Matrix trig_diffmat(const Grid& g, unsigned order = 1);

/// Resampling for the weighted basis e^{-b t / 2} p(t):
/// diag(e^{-b tau/2}) P(tau; t) diag(e^{b t/2}).
[[nodiscard]] Matrix weighted_resample(std::span<const double> tau, const Grid& g, double b_param);

/// Chebyshev coefficients c_0..c_{n-1} of the interpolant through values given at
/// the ascending Chebyshev-Lobatto points.
[[nodiscard]] std::vector<double> chebyshev_coefficients(std::span<const double> values);

/// Magnitudes |c_k| of the discrete Fourier coefficients for wavenumbers
/// k = 0..floor(n/2) of values sampled on an n-point uniform grid.
[[nodiscard]] std::vector<double> trig_coefficient_magnitudes(std::span<const double> values);

}  // namespace chebdde
