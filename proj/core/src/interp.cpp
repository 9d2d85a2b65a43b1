#include "chebdde/interp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chebdde {

namespace {

constexpr double pi = std::numbers::pi;

void require_kind(const Grid& g, GridKind kind, const char* who) {
    if (g.kind() != kind) {
        throw std::invalid_argument(std::string(who) +
                                    (kind == GridKind::chebyshev_lobatto ? ": Chebyshev grid required"
                                                                         : ": trigonometric grid required"));
    }
}

// Replaces a row that hit a node (or overflowed) with a unit row, otherwise
// normalises it. `raw` holds w_k / (tau - t_k) style terms.
void finish_row(std::span<double> raw) {
    std::size_t hit = raw.size();
    double sum = 0.0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        if (!std::isfinite(raw[k])) {
            hit = k;
            break;
        }
        sum += raw[k];
    }
    if (hit == raw.size() && std::isfinite(sum) && sum != 0.0) {
        for (auto& v : raw) v /= sum;
        return;
    }
    if (hit == raw.size()) {
        // 0/0 or overflow in the denominator: fall back to the closest node.
        std::size_t best = 0;
        for (std::size_t k = 1; k < raw.size(); ++k)
            if (std::abs(raw[k]) > std::abs(raw[best])) best = k;
        hit = best;
    }
    for (auto& v : raw) v = 0.0;
    raw[hit] = 1.0;
}

// Integer-argument cosine cos(m*pi/d) with m reduced modulo 2d.
double cos_pi_ratio(long long m, long long d) {
    m %= 2 * d;
    if (m < 0) m += 2 * d;
    return std::cos(static_cast<double>(m) * pi / static_cast<double>(d));
}

}  // namespace

SampledFunction::SampledFunction(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size())
        throw std::invalid_argument("SampledFunction: value count does not match grid size");
}

Grid cheb_grid(std::size_t n, double a, double b) {
    if (n < 2) throw std::invalid_argument("cheb_grid: need at least 2 points");
    if (!(b > a)) throw std::invalid_argument("cheb_grid: require b > a");
    std::vector<double> nodes(n);
    std::vector<double> weights(n);
    const double m = static_cast<double>(n - 1);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < n; ++k) {
        // -cos(k pi / m) written as a sine so the points are exactly symmetric.
        const double x = std::sin(pi * (2.0 * static_cast<double>(k) - m) / (2.0 * m));
        nodes[k] = mid + half * x;
        weights[k] = (k % 2 == 0) ? 1.0 : -1.0;
    }
    nodes.front() = a;
    nodes.back() = b;
    weights.front() *= 0.5;
    weights.back() *= 0.5;
    return Grid(a, b, std::move(nodes), std::move(weights), GridKind::chebyshev_lobatto);
}

Grid trig_grid(std::size_t n, double a, double b) {
    if (n < 2) throw std::invalid_argument("trig_grid: need at least 2 points");
    if (!(b > a)) throw std::invalid_argument("trig_grid: require b > a");
    std::vector<double> nodes(n);
    std::vector<double> weights(n);
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        nodes[k] = a + static_cast<double>(k) * h;
        weights[k] = (k % 2 == 0) ? 1.0 : -1.0;
    }
    return Grid(a, b, std::move(nodes), std::move(weights), GridKind::trig_uniform);
}

std::vector<double> bary_eval(const SampledFunction& f, std::span<const double> tau) {
    const Matrix p = f.grid.kind() == GridKind::chebyshev_lobatto ? barymat(tau, f.grid)
                                                                   : trig_barymat(tau, f.grid);
    return p * std::span<const double>(f.values);
}

Matrix diffmat(const Grid& g, unsigned order) {
    require_kind(g, GridKind::chebyshev_lobatto, "diffmat");
    const std::size_t n = g.size();
    const auto t = g.nodes();
    const auto w = g.bary_weights();
    Matrix d(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j) continue;
            const double v = w[k] / (w[j] * (t[j] - t[k]));
            d(j, k) = v;
            diag -= v;
        }
        d(j, j) = diag;
    }
    if (order == 0) return Matrix::identity(n);
    return order == 1 ? d : matrix_power(d, order);
}

Matrix barymat(std::span<const double> tau, const Grid& g) {
    require_kind(g, GridKind::chebyshev_lobatto, "barymat");
    const std::size_t n = g.size();
    const auto t = g.nodes();
    const auto w = g.bary_weights();
    Matrix p(tau.size(), n);
    for (std::size_t i = 0; i < tau.size(); ++i) {
        auto r = p.row(i);
        for (std::size_t k = 0; k < n; ++k) r[k] = w[k] / (tau[i] - t[k]);
        finish_row(r);
    }
    return p;
}

Matrix cumsummat(const Grid& g) {
    require_kind(g, GridKind::chebyshev_lobatto, "cumsummat");
    const std::size_t n = g.size();
    const long long m = static_cast<long long>(n) - 1;

    // Values -> coefficients. Ascending node j sits at angle (m - j) pi / m.
    Matrix to_coeffs(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = cos_pi_ratio(static_cast<long long>(k) * (m - static_cast<long long>(j)), m);
            if (j == 0 || j == n - 1) v *= 0.5;
            to_coeffs(k, j) = 2.0 * v / static_cast<double>(m);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        to_coeffs(0, j) *= 0.5;
        to_coeffs(n - 1, j) *= 0.5;
    }

    // Termwise antiderivative, degree n.
    Matrix integrate(n + 1, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == 0) {
            integrate(1, 0) += 1.0;
        } else if (j == 1) {
            integrate(2, 1) += 0.25;
        } else {
            integrate(j + 1, j) += 0.5 / static_cast<double>(j + 1);
            integrate(j - 1, j) -= 0.5 / static_cast<double>(j - 1);
        }
    }

    // Evaluate T_0..T_n at the nodes, minus the value at the left end (T_k(-1) = (-1)^k).
    Matrix evaluate(n, n + 1);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k <= n; ++k) {
            const double tk = cos_pi_ratio(static_cast<long long>(k) * (m - static_cast<long long>(j)), m);
            const double left = (k % 2 == 0) ? 1.0 : -1.0;
            evaluate(j, k) = j == 0 ? 0.0 : tk - left;
        }
    }

    Matrix q = evaluate * (integrate * to_coeffs);
    q *= 0.5 * g.length();
    return q;
}

Matrix trig_barymat(std::span<const double> tau, const Grid& g) {
    require_kind(g, GridKind::trig_uniform, "trig_barymat");
    const std::size_t n = g.size();
    const auto t = g.nodes();
    const double period = g.length();
    const bool even = n % 2 == 0;
    Matrix p(tau.size(), n);
    for (std::size_t i = 0; i < tau.size(); ++i) {
        double z = g.a() + std::fmod(tau[i] - g.a(), period);
        if (z < g.a()) z += period;
        if (z >= g.b()) z -= period;
        auto r = p.row(i);
        for (std::size_t k = 0; k < n; ++k) {
            const double arg = (z - t[k]) * pi / period;
            const double kernel = even ? std::cos(arg) / std::sin(arg) : 1.0 / std::sin(arg);
            r[k] = (k % 2 == 0) ? kernel : -kernel;
        }
        finish_row(r);
    }
    return p;
}

Matrix trig_diffmat(const Grid& g, unsigned order) {
    require_kind(g, GridKind::trig_uniform, "trig_diffmat");
    const std::size_t n = g.size();
    if (order == 0) return Matrix::identity(n);
    const double h = 2.0 * pi / static_cast<double>(n);
    const double scale = std::pow(2.0 * pi / g.length(), static_cast<double>(order));
    const bool even = n % 2 == 0;

    // Entry depends only on the signed index offset i - j.
    auto entry = [&](long long offset) -> double {
        const double x = static_cast<double>(offset) * h / 2.0;
        const double sign = (offset % 2 == 0) ? 1.0 : -1.0;
        if (order == 1) {
            if (offset == 0) return 0.0;
            return 0.5 * sign * (even ? std::cos(x) / std::sin(x) : 1.0 / std::sin(x));
        }
        if (order == 2) {
            if (offset == 0) {
                return even ? -pi * pi / (3.0 * h * h) - 1.0 / 6.0 : -pi * pi / (3.0 * h * h) + 1.0 / 12.0;
            }
            const double s = std::sin(x);
            return even ? -0.5 * sign / (s * s) : -0.5 * sign * std::cos(x) / (s * s);
        }
        // General order: symmetric Fourier sum, Nyquist mode split evenly.
        const double d = static_cast<double>(offset) * h;
        const double phase = static_cast<double>(order) * pi / 2.0;
        const long long kmax = even ? static_cast<long long>(n) / 2 - 1 : (static_cast<long long>(n) - 1) / 2;
        double s = 0.0;
        for (long long k = 1; k <= kmax; ++k)
            s += 2.0 * std::pow(static_cast<double>(k), order) * std::cos(static_cast<double>(k) * d + phase);
        if (even) {
            const double kn = static_cast<double>(n) / 2.0;
            s += std::pow(kn, order) * std::cos(kn * d + phase);
        }
        return s / static_cast<double>(n);
    };

    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d(i, j) = scale * entry(static_cast<long long>(i) - static_cast<long long>(j));
    return d;
}

Matrix weighted_resample(std::span<const double> tau, const Grid& g, double b_param) {
    if (b_param < 0.0) throw std::invalid_argument("weighted_resample: b_param must be >= 0");
    Matrix p = barymat(tau, g);
    const auto t = g.nodes();
    for (std::size_t i = 0; i < p.rows(); ++i) {
        const double left = std::exp(-0.5 * b_param * tau[i]);
        auto r = p.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) r[k] *= left * std::exp(0.5 * b_param * t[k]);
    }
    return p;
}

std::vector<double> chebyshev_coefficients(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("chebyshev_coefficients: need at least 2 values");
    const long long m = static_cast<long long>(n) - 1;
    std::vector<double> c(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double v = values[j] * cos_pi_ratio(static_cast<long long>(k) * (m - static_cast<long long>(j)), m);
            if (j == 0 || j == n - 1) v *= 0.5;
            s += v;
        }
        c[k] = 2.0 * s / static_cast<double>(m);
    }
    c.front() *= 0.5;
    c.back() *= 0.5;
    return c;
}

std::vector<double> trig_coefficient_magnitudes(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<double> mags(n / 2 + 1, 0.0);
    for (std::size_t k = 0; k < mags.size(); ++k) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const long long idx = static_cast<long long>((k * j) % n);
            const double ang = 2.0 * pi * static_cast<double>(idx) / static_cast<double>(n);
            re += values[j] * std::cos(ang);
            im -= values[j] * std::sin(ang);
        }
        mags[k] = std::hypot(re, im) / static_cast<double>(n);
    }
    return mags;
}

}  // namespace chebdde
