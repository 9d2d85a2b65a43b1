#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "chebdde/interp.hpp"

namespace chebdde {

/// Ordered Chebyshev panels T_0 < T_1 < ... < T_m covering [T_0, T_m].
class PiecewiseGrid {
public:
    /// Panels must be Chebyshev grids whose intervals are contiguous.
    explicit PiecewiseGrid(std::vector<Grid> panels);

    [[nodiscard]] std::size_t panel_count() const noexcept { return panels_.size(); }
    [[nodiscard]] const Grid& panel(std::size_t k) const { return panels_.at(k); }
    [[nodiscard]] std::span<const Grid> panels() const noexcept { return panels_; }
    [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breaks_; }
    [[nodiscard]] std::vector<std::size_t> sizes() const;

    /// Offset of panel k's first node in the concatenated node vector.
    [[nodiscard]] std::size_t offset(std::size_t k) const { return offsets_.at(k); }
    /// Total degrees of freedom (sum of panel sizes).
    [[nodiscard]] std::size_t size() const noexcept { return offsets_.back(); }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }

    [[nodiscard]] double left() const noexcept { return breaks_.front(); }
    [[nodiscard]] double right() const noexcept { return breaks_.back(); }

private:
    std::vector<Grid> panels_;
    std::vector<double> breaks_;
    std::vector<std::size_t> offsets_;
    std::vector<double> nodes_;
};

/// Concatenated per-panel node values.
struct PiecewiseFunction {
    PiecewiseGrid grid;
    std::vector<double> values;

    PiecewiseFunction(PiecewiseGrid g, std::vector<double> v);

    /// Values belonging to panel k.
    [[nodiscard]] std::span<const double> panel_values(std::size_t k) const;

    /// Evaluates the piecewise interpolant. Interior breakpoints use the left panel.
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] std::vector<double> operator()(std::span<const double> xs) const;
};

/// Panels [breaks[k-1], breaks[k]] with sizes[k-1] Chebyshev points each.
[[nodiscard]] PiecewiseGrid build_piecewise_grid(std::span<const double> breaks, std::span<const std::size_t> sizes);

/// Index k (0-based) of the panel with T_k < x <= T_{k+1}; x = T_0 maps to panel 0.
/// Throws OutOfDomainError outside [T_0, T_m].
[[nodiscard]] std::size_t locate_panel(const PiecewiseGrid& g, double x);

struct BreakpointOptions {
    /// Number of propagation generations; the default runs until no new point appears.
    std::size_t max_order = std::numeric_limits<std::size_t>::max();
    /// Samples used to check that the delay map is increasing on the domain.
    std::size_t monotonicity_samples = 2001;
};

/// Traces the derivative discontinuities a delay t -> tau(t) propagates through [t0, t1].
///
/// Starting from `initial_breaks` (typically {t0} plus known history kinks), each
/// generation solves tau(b) = c for every breakpoint c of the previous generation.
/// Returns the sorted, de-duplicated breakpoints strictly inside (t0, t1), including
/// any initial breaks that lie there. Throws UnsupportedDelayError if tau is not
/// strictly increasing on the domain.
[[nodiscard]] std::vector<double> propagate_breakpoints(const std::function<double(double)>& tau, double t0, double t1,
                                                        std::span<const double> initial_breaks,
                                                        const BreakpointOptions& options = {});

/// {t0} + interior + {t1}, ready for build_piecewise_grid.
[[nodiscard]] std::vector<double> with_endpoints(std::span<const double> interior, double t0, double t1);

}  // namespace chebdde
