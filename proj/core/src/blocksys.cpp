#include "chebdde/blocksys.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "chebdde/errors.hpp"

namespace chebdde {

HistorySpec HistorySpec::function(std::function<double(double)> phi, std::function<double(double)> dphi) {
    if (!phi) throw std::invalid_argument("HistorySpec::function: empty history function");
    HistorySpec h;
    h.mode_ = Mode::function;
    h.phi_ = std::move(phi);
    h.dphi_ = std::move(dphi);
    return h;
}

HistorySpec HistorySpec::constant(double value) {
    HistorySpec h;
    h.mode_ = Mode::constant;
    h.constant_ = value;
    return h;
}

HistorySpec HistorySpec::periodic(double period) {
    if (!(period > 0.0)) throw std::invalid_argument("HistorySpec::periodic: period must be positive");
    HistorySpec h;
    h.mode_ = Mode::periodic;
    h.period_ = period;
    return h;
}

HistorySpec HistorySpec::clamp() {
    HistorySpec h;
    h.mode_ = Mode::clamp;
    return h;
}

double HistorySpec::value(double tau) const {
    switch (mode_) {
        case Mode::function: return phi_(tau);
        case Mode::constant: return constant_;
        default: throw std::logic_error("HistorySpec::value: mode has no history values");
    }
}

double HistorySpec::slope(double tau) const {
    if (mode_ == Mode::function && dphi_) return dphi_(tau);
    return 0.0;
}

Resampling resample_piecewise(const PiecewiseGrid& g, std::span<const double> points, const HistorySpec& history) {
    const std::size_t m = points.size();
    Resampling r;
    r.matrix = Matrix(m, g.size());
    r.offset.assign(m, 0.0);
    r.offset_slope.assign(m, 0.0);
    r.outside.assign(m, false);
    const double lo = g.left();
    const double hi = g.right();
    for (std::size_t i = 0; i < m; ++i) {
        double x = points[i];
        if (!std::isfinite(x)) throw std::invalid_argument("resample_piecewise: non-finite evaluation point");
        if (history.mode() == HistorySpec::Mode::periodic) {
            const double p = history.period();
            x = lo + std::fmod(x - lo, p);
            if (x < lo) x += p;
        }
        const bool has_values =
            history.mode() == HistorySpec::Mode::function || history.mode() == HistorySpec::Mode::constant;
        // An argument exactly at the left end belongs to the history when one is supplied.
        if (x < lo || x > hi || (x == lo && has_values)) {
            switch (history.mode()) {
                case HistorySpec::Mode::clamp:
                    x = std::clamp(x, lo, hi);
                    ++r.clamped;
                    break;
                case HistorySpec::Mode::function:
                case HistorySpec::Mode::constant:
                    r.outside[i] = true;
                    r.offset[i] = history.value(x);
                    r.offset_slope[i] = history.slope(x);
                    continue;
                default: {
                    std::ostringstream msg;
                    msg << "delayed argument " << x << " lies outside [" << lo << ", " << hi
                        << "] and no history function was given";
                    throw MissingHistoryError(msg.str());
                }
            }
        }
        const std::size_t k = locate_panel(g, x);
        const Grid& panel = g.panel(k);
        const Matrix row = barymat(std::span<const double>(&x, 1), panel);
        auto dst = r.matrix.row(i).subspan(g.offset(k), panel.size());
        std::copy(row.row(0).begin(), row.row(0).end(), dst.begin());
    }
    return r;
}

DelayBlock delay_block(const PiecewiseGrid& g, const std::function<double(double)>& tau, const HistorySpec& history) {
    std::vector<double> points;
    points.reserve(g.size());
    for (double t : g.nodes()) points.push_back(tau(t));
    Resampling r = resample_piecewise(g, points, history);
    return {std::move(r.matrix), std::move(r.offset)};
}

Matrix block_diffmat(const PiecewiseGrid& g, unsigned order) {
    Matrix d(g.size(), g.size());
    for (std::size_t k = 0; k < g.panel_count(); ++k) d.set_block(g.offset(k), g.offset(k), diffmat(g.panel(k), order));
    return d;
}

Matrix block_cumsummat(const PiecewiseGrid& g) {
    const std::size_t n = g.size();
    Matrix q(n, n);
    std::vector<double> carried(n, 0.0);  // integral over all completed panels
    for (std::size_t k = 0; k < g.panel_count(); ++k) {
        const Matrix qk = cumsummat(g.panel(k));
        const std::size_t off = g.offset(k);
        const std::size_t nk = g.panel(k).size();
        for (std::size_t i = 0; i < nk; ++i) {
            auto row = q.row(off + i);
            std::copy(carried.begin(), carried.end(), row.begin());
            for (std::size_t j = 0; j < nk; ++j) row[off + j] += qk(i, j);
        }
        for (std::size_t j = 0; j < nk; ++j) carried[off + j] += qk(nk - 1, j);
    }
    return q;
}

std::vector<std::vector<double>> continuity_rows(const PiecewiseGrid& g, unsigned order) {
    if (order < 1) throw std::invalid_argument("continuity_rows: order must be >= 1");
    const auto sizes = g.sizes();
    const std::size_t min_size = *std::min_element(sizes.begin(), sizes.end());
    if (order - 1 > min_size - 2) throw std::invalid_argument("continuity_rows: order too high for panel size");

    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j + 1 < g.panel_count(); ++j) {
        const Grid& left = g.panel(j);
        const Grid& right = g.panel(j + 1);
        for (unsigned d = 0; d < order; ++d) {
            std::vector<double> row(g.size(), 0.0);
            const Matrix dl = diffmat(left, d);
            const Matrix dr = diffmat(right, d);
            for (std::size_t c = 0; c < left.size(); ++c) row[g.offset(j) + c] = -dl(left.size() - 1, c);
            for (std::size_t c = 0; c < right.size(); ++c) row[g.offset(j + 1) + c] = dr(0, c);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

ConstraintLayout standard_layout(const PiecewiseGrid& g, unsigned continuity_order, std::size_t n_left,
                                 std::size_t n_right) {
    const std::size_t m = g.panel_count();
    std::vector<std::size_t> used_first(m, 0);
    std::vector<std::size_t> used_last(m, 0);
    ConstraintLayout layout;
    for (std::size_t i = 0; i < n_left; ++i) layout.left.push_back(g.offset(0) + used_first[0]++);
    for (std::size_t i = 0; i < n_right; ++i) layout.right.push_back(g.offset(m) - 1 - used_last[m - 1]++);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        for (unsigned d = 0; d < continuity_order; ++d) {
            if (d % 2 == 0) {
                layout.interface.push_back(g.offset(j + 1) + used_first[j + 1]++);
            } else {
                layout.interface.push_back(g.offset(j + 1) - 1 - used_last[j]++);
            }
        }
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (used_first[k] + used_last[k] > g.panel(k).size())
            throw std::invalid_argument("standard_layout: panel too small for its constraints");
    }
    return layout;
}

BlockSystem border(BlockSystem system, std::span<const BorderRow> rows) {
    const std::size_t n = system.matrix.rows();
    std::set<std::size_t> seen;
    for (const auto& r : rows) {
        if (r.position >= n) throw std::invalid_argument("border: row position out of range");
        if (!seen.insert(r.position).second) throw std::invalid_argument("border: duplicate row position");
        if (r.coeffs.size() != system.matrix.cols()) throw std::invalid_argument("border: row length mismatch");
    }
    for (const auto& r : rows) {
        std::copy(r.coeffs.begin(), r.coeffs.end(), system.matrix.row(r.position).begin());
        system.rhs.at(r.position) = r.rhs;
        auto existing = std::find_if(system.constraint_rows.begin(), system.constraint_rows.end(),
                                     [&](const auto& c) { return c.first == r.position; });
        if (existing != system.constraint_rows.end()) {
            existing->second = r.description;
        } else {
            system.constraint_rows.emplace_back(r.position, r.description);
        }
    }
    return system;
}

std::vector<double> unit_row(std::size_t n, std::size_t k) {
    std::vector<double> row(n, 0.0);
    row.at(k) = 1.0;
    return row;
}

std::vector<double> evaluation_row(const PiecewiseGrid& g, double x) {
    Resampling r = resample_piecewise(g, std::span<const double>(&x, 1), HistorySpec::none());
    return {r.matrix.row(0).begin(), r.matrix.row(0).end()};
}

}  // namespace chebdde
