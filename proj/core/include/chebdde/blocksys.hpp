#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "chebdde/matrix.hpp"
#include "chebdde/mesh.hpp"

namespace chebdde {

/// What a delayed argument sees outside the solve interval [T_0, T_m].
class HistorySpec {
public:
    enum class Mode {
        none,      // leaving the interval is an error
        function,  // phi(tau) supplied by the caller
        constant,  // phi(tau) = value
        periodic,  // tau is wrapped modulo the period back into the interval
        clamp,     // tau is clamped to the nearest endpoint and the event counted
    };

    HistorySpec() = default;

    [[nodiscard]] static HistorySpec none() { return {}; }
    /// `dphi` is optional; it is used only when a delay map depends on parameters.
    [[nodiscard]] static HistorySpec function(std::function<double(double)> phi,
                                              std::function<double(double)> dphi = {});
    [[nodiscard]] static HistorySpec constant(double value);
    /// Throws std::invalid_argument unless period > 0.
    [[nodiscard]] static HistorySpec periodic(double period);
    [[nodiscard]] static HistorySpec clamp();

    [[nodiscard]] Mode mode() const noexcept { return mode_; }
    [[nodiscard]] double period() const noexcept { return period_; }
    [[nodiscard]] double value(double tau) const;
    [[nodiscard]] double slope(double tau) const;

private:
    Mode mode_ = Mode::none;
    std::function<double(double)> phi_;
    std::function<double(double)> dphi_;
    double constant_ = 0.0;
    double period_ = 0.0;
};

/// Resampling of a piecewise function at arbitrary points.
///
/// Row i of `matrix` carries the barycentric row of the panel containing point i
/// (zero elsewhere). Points that fall outside the interval get a zero row and
/// their history value in `offset`. With a function or constant history the
/// left end point itself counts as history (T_k < tau <= T_{k+1} row rule).
struct Resampling {
    Matrix matrix;
    std::vector<double> offset;
    std::vector<double> offset_slope;
    std::vector<bool> outside;
    std::size_t clamped = 0;
};

[[nodiscard]] Resampling resample_piecewise(const PiecewiseGrid& g, std::span<const double> points,
                                            const HistorySpec& history);

/// The block operator y(tau(t)) on g together with its history contribution.
struct DelayBlock {
    Matrix matrix;
    std::vector<double> rhs;
};

[[nodiscard]] DelayBlock delay_block(const PiecewiseGrid& g, const std::function<double(double)>& tau,
                                     const HistorySpec& history);

/// Block-diagonal matrix of per-panel D^order.
[[nodiscard]] Matrix block_diffmat(const PiecewiseGrid& g, unsigned order = 1);

/// Indefinite integral from T_0 across panels: (Q y)_i = integral from T_0 to t_i.
[[nodiscard]] Matrix block_cumsummat(const PiecewiseGrid& g);

/// Continuity of derivatives 0..order-1 at every interior breakpoint.
///
/// Rows are ordered interface by interface, derivative by derivative, each of
/// length g.size(): [-(last row of D_L^d) | (first row of D_R^d)].
[[nodiscard]] std::vector<std::vector<double>> continuity_rows(const PiecewiseGrid& g, unsigned order);

/// Row positions conventionally sacrificed for constraints.
///
/// Left boundary conditions take the first rows of the first panel, right
/// boundary conditions the last rows of the last panel. At interface j the
/// d-th continuity row takes the next first row of panel j+1 for even d and the
/// next last row of panel j for odd d.
struct ConstraintLayout {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    std::vector<std::size_t> interface;  // same order as continuity_rows
};

[[nodiscard]] ConstraintLayout standard_layout(const PiecewiseGrid& g, unsigned continuity_order, std::size_t n_left,
                                               std::size_t n_right);

struct BorderRow {
    std::size_t position;
    std::vector<double> coeffs;
    double rhs = 0.0;
    std::string description;
};

/// Square collocation system with the rows that were overwritten by constraints.
struct BlockSystem {
    Matrix matrix;
    std::vector<double> rhs;
    std::vector<std::pair<std::size_t, std::string>> constraint_rows;
};

/// Overwrites the listed rows of the system. Throws std::invalid_argument on a
/// duplicate or out-of-range position or a wrongly sized row.
[[nodiscard]] BlockSystem border(BlockSystem system, std::span<const BorderRow> rows);

/// Unit row e_k of length n.
[[nodiscard]] std::vector<double> unit_row(std::size_t n, std::size_t k);

/// Row evaluating the piecewise interpolant at x.
[[nodiscard]] std::vector<double> evaluation_row(const PiecewiseGrid& g, double x);

}  // namespace chebdde
