#include "chebdde/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "chebdde/errors.hpp"

namespace chebdde {

PiecewiseGrid::PiecewiseGrid(std::vector<Grid> panels) : panels_(std::move(panels)) {
    if (panels_.empty()) throw std::invalid_argument("PiecewiseGrid: at least one panel required");
    breaks_.push_back(panels_.front().a());
    offsets_.push_back(0);
    for (std::size_t k = 0; k < panels_.size(); ++k) {
        const Grid& p = panels_[k];
        if (p.kind() != GridKind::chebyshev_lobatto)
            throw std::invalid_argument("PiecewiseGrid: panels must be Chebyshev grids");
        if (p.a() != breaks_.back()) throw std::invalid_argument("PiecewiseGrid: panels must be contiguous");
        breaks_.push_back(p.b());
        offsets_.push_back(offsets_.back() + p.size());
        nodes_.insert(nodes_.end(), p.nodes().begin(), p.nodes().end());
    }
}

std::vector<std::size_t> PiecewiseGrid::sizes() const {
    std::vector<std::size_t> s;
    s.reserve(panels_.size());
    for (const auto& p : panels_) s.push_back(p.size());
    return s;
}

PiecewiseFunction::PiecewiseFunction(PiecewiseGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size())
        throw std::invalid_argument("PiecewiseFunction: value count does not match grid size");
}

std::span<const double> PiecewiseFunction::panel_values(std::size_t k) const {
    return std::span<const double>(values).subspan(grid.offset(k), grid.panel(k).size());
}

double PiecewiseFunction::operator()(double x) const {
    const std::size_t k = locate_panel(grid, x);
    const Matrix p = barymat(std::span<const double>(&x, 1), grid.panel(k));
    const auto v = panel_values(k);
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s += p(0, j) * v[j];
    return s;
}

std::vector<double> PiecewiseFunction::operator()(std::span<const double> xs) const {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back((*this)(x));
    return out;
}

PiecewiseGrid build_piecewise_grid(std::span<const double> breaks, std::span<const std::size_t> sizes) {
    if (breaks.size() < 2) throw std::invalid_argument("build_piecewise_grid: need at least two breakpoints");
    if (sizes.size() + 1 != breaks.size())
        throw std::invalid_argument("build_piecewise_grid: sizes must have one entry per panel");
    std::vector<Grid> panels;
    panels.reserve(sizes.size());
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] < 2) throw std::invalid_argument("build_piecewise_grid: each panel needs >= 2 points");
        if (!(breaks[k + 1] > breaks[k])) throw std::invalid_argument("build_piecewise_grid: breakpoints must ascend");
        panels.push_back(cheb_grid(sizes[k], breaks[k], breaks[k + 1]));
    }
    return PiecewiseGrid(std::move(panels));
}

std::size_t locate_panel(const PiecewiseGrid& g, double x) {
    const auto br = g.breakpoints();
    if (!(x >= br.front() && x <= br.back())) {
        std::ostringstream msg;
        msg << "locate_panel: " << x << " outside [" << br.front() << ", " << br.back() << "]";
        throw OutOfDomainError(msg.str());
    }
    // First breakpoint >= x closes the panel that contains x.
    const auto it = std::lower_bound(br.begin() + 1, br.end(), x);
    return static_cast<std::size_t>(it - (br.begin() + 1));
}

namespace {

// Solves tau(b) = c on [lo, hi] for increasing tau, to full double precision.
double bisect(const std::function<double(double)>& tau, double c, double lo, double hi) {
    double flo = tau(lo) - c;
    double fhi = tau(hi) - c;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    while (true) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double fm = tau(mid) - c;
        if (fm == 0.0) return mid;
        if (fm < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

}  // namespace

std::vector<double> propagate_breakpoints(const std::function<double(double)>& tau, double t0, double t1,
                                          std::span<const double> initial_breaks, const BreakpointOptions& options) {
    if (!(t1 > t0)) throw std::invalid_argument("propagate_breakpoints: require t1 > t0");
    const double scale = std::max(1.0, t1 - t0);
    const double merge_tol = 1e-11 * scale;

    std::vector<double> result;
    auto known = [&](double x) {
        return std::any_of(result.begin(), result.end(), [&](double r) { return std::abs(r - x) <= merge_tol; });
    };
    for (double b : initial_breaks) {
        if (b > t0 + merge_tol && b < t1 - merge_tol && !known(b)) result.push_back(b);
    }
    if (!tau) {
        std::sort(result.begin(), result.end());
        return result;
    }

    const std::size_t samples = std::max<std::size_t>(options.monotonicity_samples, 2);
    double prev = tau(t0);
    for (std::size_t i = 1; i < samples; ++i) {
        const double t = i + 1 == samples ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double v = tau(t);
        if (!(v > prev)) {
            std::ostringstream msg;
            msg << "propagate_breakpoints: delay map is not strictly increasing near t = " << t
                << "; supply breakpoints manually";
            throw UnsupportedDelayError(msg.str());
        }
        prev = v;
    }
    const double tau_lo = tau(t0);
    const double tau_hi = tau(t1);

    std::vector<double> generation(initial_breaks.begin(), initial_breaks.end());
    for (std::size_t order = 0; order < options.max_order && !generation.empty(); ++order) {
        std::vector<double> next;
        for (double c : generation) {
            if (c < tau_lo || c > tau_hi) continue;
            const double b = bisect(tau, c, t0, t1);
            if (b <= t0 + merge_tol || b >= t1 - merge_tol) continue;
            if (known(b)) continue;
            result.push_back(b);
            next.push_back(b);
        }
        generation = std::move(next);
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<double> with_endpoints(std::span<const double> interior, double t0, double t1) {
    std::vector<double> out;
    out.reserve(interior.size() + 2);
    out.push_back(t0);
    out.insert(out.end(), interior.begin(), interior.end());
    out.push_back(t1);
    return out;
}

}  // namespace chebdde
