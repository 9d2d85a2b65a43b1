#include "chebdde/collocation.hpp"

#include <stdexcept>

namespace chebdde {

Collocation::Collocation(PiecewiseGrid grid) : pieces_(std::move(grid)) {
    nodes_.assign(pieces_->nodes().begin(), pieces_->nodes().end());
    d1_ = block_diffmat(*pieces_, 1);
}

Collocation::Collocation(Grid trig) : trig_(std::move(trig)) {
    if (trig_->kind() != GridKind::trig_uniform)
        throw std::invalid_argument("Collocation: single-grid form requires a trigonometric grid");
    nodes_.assign(trig_->nodes().begin(), trig_->nodes().end());
    d1_ = trig_diffmat(*trig_, 1);
}

double Collocation::left() const noexcept { return trig_ ? trig_->a() : pieces_->left(); }
double Collocation::right() const noexcept { return trig_ ? trig_->b() : pieces_->right(); }

const PiecewiseGrid& Collocation::piecewise() const {
    if (!pieces_) throw std::logic_error("Collocation: not a piecewise Chebyshev discretisation");
    return *pieces_;
}

const Grid& Collocation::trig() const {
    if (!trig_) throw std::logic_error("Collocation: not a trigonometric discretisation");
    return *trig_;
}

Matrix Collocation::diff(unsigned order) const {
    if (order == 1) return d1_;
    if (trig_) return trig_diffmat(*trig_, order);
    return block_diffmat(*pieces_, order);
}

Resampling Collocation::resample(std::span<const double> points, const HistorySpec& history) const {
    if (pieces_) return resample_piecewise(*pieces_, points, history);
    Resampling r;
    r.matrix = trig_barymat(points, *trig_);
    r.offset.assign(points.size(), 0.0);
    r.offset_slope.assign(points.size(), 0.0);
    r.outside.assign(points.size(), false);
    return r;
}

Matrix Collocation::cumsum() const {
    if (trig_) throw std::invalid_argument("Collocation::cumsum: not available on periodic grids");
    return block_cumsummat(*pieces_);
}

std::vector<double> Collocation::interpolate(std::span<const double> values, std::span<const double> points) const {
    const Resampling r = resample(points, HistorySpec::none());
    return r.matrix * values;
}

}  // namespace chebdde
