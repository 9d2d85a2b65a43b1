#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include <chebdde/blocksys.hpp>
#include <chebdde/collocation.hpp>
#include <chebdde/exprgraph.hpp>
#include <chebdde/interp.hpp>
#include <chebdde/mesh.hpp>
#include <chebdde/newton.hpp>

namespace chebdde::testing {

/// Deterministic generator shared by the randomised checks.
inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline std::vector<double> random_vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng());
    return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline std::vector<double> sample(std::span<const double> nodes, const std::function<double(double)>& f) {
    std::vector<double> v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = f(nodes[i]);
    return v;
}

inline PiecewiseGrid single_panel(std::size_t n, double a, double b) {
    const double breaks[] = {a, b};
    const std::size_t sizes[] = {n};
    return build_piecewise_grid(breaks, sizes);
}

/// Exact solution of y' = -y - c y(t - d) with zero history and y(0) = 1.
///
/// With y = e^{-t} z the equation becomes z'(t) = -c e^{d} z(t - d), so on the
/// k-th interval [k d, (k+1) d] z is a polynomial obtained from the previous one
/// by integration (method of steps). Coefficients are kept in the local variable
/// u = t - k d.
class StepsOracle {
public:
    StepsOracle(double c, double d, std::size_t intervals) : d_(d) {
        const double factor = c * std::exp(d);
        pieces_.push_back({1.0});
        for (std::size_t k = 1; k < intervals; ++k) {
            const auto& prev = pieces_.back();
            std::vector<double> next(prev.size() + 1, 0.0);
            next[0] = eval(prev, d);
            for (std::size_t j = 0; j < prev.size(); ++j) next[j + 1] = -factor * prev[j] / static_cast<double>(j + 1);
            pieces_.push_back(std::move(next));
        }
    }

    double operator()(double t) const {
        std::size_t k = t <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(t / d_)) - 1;
        k = std::min(k, pieces_.size() - 1);
        return std::exp(-t) * eval(pieces_[k], t - static_cast<double>(k) * d_);
    }

private:
    static double eval(const std::vector<double>& c, double u) {
        double s = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) s = s * u + c[j];
        return s;
    }

    double d_;
    std::vector<std::vector<double>> pieces_;
};

/// Koenigs limit lambda^{-m} f^{(m)}(t) by repeated composition.
inline double koenigs_composition(const std::function<double(double)>& f, double lambda, double t,
                                  std::size_t compositions = 60) {
    double x = t;
    double scale = 1.0;
    for (std::size_t m = 0; m < compositions; ++m) {
        x = f(x);
        scale /= lambda;
    }
    return scale * x;
}

/// y(1) for y'' = -lambda y(t/2), y(0) = 0, y'(0) = 1, by its power series.
/// Zeros of this entire function are the Dirichlet eigenvalues.
inline long double pantograph_shooting(long double lambda) {
    long double a = 1.0L;  // a_1
    long double sum = a;
    for (int k = 1; k < 400; k += 2) {
        a *= -lambda * std::pow(2.0L, -static_cast<long double>(k)) / ((k + 1.0L) * (k + 2.0L));
        sum += a;
        if (std::abs(a) < 1e-30L * std::max(1.0L, std::abs(sum)) && k > 40) break;
    }
    return sum;
}

/// Root of pantograph_shooting bracketed by [lo, hi].
inline double pantograph_eigenvalue(double lo, double hi) {
    long double a = lo;
    long double b = hi;
    long double fa = pantograph_shooting(a);
    for (int it = 0; it < 200; ++it) {
        const long double m = 0.5L * (a + b);
        const long double fm = pantograph_shooting(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return static_cast<double>(0.5L * (a + b));
}

/// Relative accuracy attainable for the k-th (0-based) pantograph eigenvalue on
/// 40 to 100 Chebyshev points; the fifth drifts by about 2e-8 as n varies.
inline double pantograph_tolerance(std::size_t k) { return k < 4 ? 1e-9 : 1e-7; }

/// Sign changes of the shooting function on a logarithmic scan of [lo, hi].
inline std::vector<double> pantograph_eigenvalues(std::size_t count, double lo = 1.0, double hi = 1e6) {
    std::vector<double> roots;
    const std::size_t samples = 20000;
    double prev_x = lo;
    long double prev_f = pantograph_shooting(lo);
    for (std::size_t i = 1; i <= samples && roots.size() < count; ++i) {
        const double x = lo * std::pow(hi / lo, static_cast<double>(i) / samples);
        const long double f = pantograph_shooting(x);
        if ((f < 0) != (prev_f < 0)) roots.push_back(pantograph_eigenvalue(prev_x, x));
        prev_x = x;
        prev_f = f;
    }
    return roots;
}

/// Result of comparing a Jacobian-vector product with central differences.
struct JacobianCheck {
    double error = 0.0;
    double scale = 0.0;

    [[nodiscard]] double relative() const { return error / std::max(1.0, scale); }
};

/// Central differences of discretize along a random direction against jac * delta.
inline JacobianCheck check_jacobian(const OpExpr& e, const Collocation& colloc, std::span<const double> state,
                                    std::span<const double> params, StateLayout layout = {}, double step = 1e-6) {
    const Linearization lin = linearize(e, colloc, state, params, layout);
    const auto dx = random_vector(state.size());
    const auto dp = random_vector(params.size());
    std::vector<double> direction(dx);
    direction.insert(direction.end(), dp.begin(), dp.end());
    const Vector jd = lin.jac * std::span<const double>(direction);

    auto shifted = [&](double h) {
        std::vector<double> s(state.begin(), state.end());
        std::vector<double> p(params.begin(), params.end());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += h * dx[i];
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += h * dp[i];
        return discretize(e, colloc, s, p, layout);
    };
    const auto plus = shifted(step);
    const auto minus = shifted(-step);
    JacobianCheck c;
    for (std::size_t i = 0; i < jd.size(); ++i) {
        const double fd = (plus[i] - minus[i]) / (2.0 * step);
        c.error = std::max(c.error, std::abs(fd - jd[i]));
        c.scale = std::max(c.scale, std::abs(jd[i]));
    }
    return c;
}

}  // namespace chebdde::testing
