#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "chebdde/blocksys.hpp"
#include "chebdde/interp.hpp"
#include "chebdde/matrix.hpp"
#include "chebdde/mesh.hpp"

namespace chebdde {

/// The grid an expression is discretised on: either piecewise Chebyshev panels
/// or a single periodic trigonometric grid.
///
/// Both kinds expose the same node vector, differentiation matrices and
/// resampling, so the expression layer does not care which one it is given.
/// On a periodic grid every resampling wraps modulo the period and history
/// specifications are ignored.
class Collocation {
public:
    explicit Collocation(PiecewiseGrid grid);
    explicit Collocation(Grid trig);

    [[nodiscard]] bool periodic() const noexcept { return trig_.has_value(); }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] double left() const noexcept;
    [[nodiscard]] double right() const noexcept;

    /// Throws std::logic_error when called on the other kind.
    [[nodiscard]] const PiecewiseGrid& piecewise() const;
    [[nodiscard]] const Grid& trig() const;

    [[nodiscard]] const Matrix& diff() const noexcept { return d1_; }
    [[nodiscard]] Matrix diff(unsigned order) const;

    [[nodiscard]] Resampling resample(std::span<const double> points, const HistorySpec& history) const;

    /// Indefinite integration from the left end. Chebyshev only.
    [[nodiscard]] Matrix cumsum() const;

    /// Evaluates the interpolant of `values` at `points` (no history).
    [[nodiscard]] std::vector<double> interpolate(std::span<const double> values, std::span<const double> points) const;

private:
    std::optional<PiecewiseGrid> pieces_;
    std::optional<Grid> trig_;
    std::vector<double> nodes_;
    Matrix d1_;
};

}  // namespace chebdde
