#include "chebdde/periodic.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "chebdde/errors.hpp"
#include "chebdde/linalg.hpp"

namespace chebdde {

SampledFunction solve_periodic_linear(const OpExpr& e, const Grid& g, double min_rcond) {
    if (g.kind() != GridKind::trig_uniform)
        throw std::invalid_argument("solve_periodic_linear: a trigonometric grid is required");
    const Collocation colloc(g);
    const std::vector<double> zero(g.size(), 0.0);
    const Linearization lin = linearize(e, colloc, zero, {}, {1, 0});
    const LuFactorization lu(lin.jac);
    const double rcond = 1.0 / lu.cond_inf();
    if (!(rcond >= min_rcond)) {
        std::ostringstream msg;
        msg << "solve_periodic_linear: operator is singular to working precision (rcond " << rcond << ")";
        throw SingularMatrixError(msg.str());
    }
    std::vector<double> u = lu.solve(lin.residual);
    for (auto& v : u) v = -v;
    return {g, std::move(u)};
}

std::vector<double> Trajectory::component(std::size_t c) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.at(c));
    return out;
}

double Trajectory::value(std::size_t c, double t) const {
    if (times.empty()) throw std::logic_error("Trajectory::value: empty trajectory");
    if (t <= times.front()) return states.front().at(c);
    if (t >= times.back()) return states.back().at(c);
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto j = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
    return (1.0 - w) * states[j - 1].at(c) + w * states[j].at(c);
}

namespace {

void put_number(std::ostream& os, double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    os.write(buf.data(), res.ptr - buf.data());
}

double parse_number(const std::string& field) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    while (first < last && *first == ' ') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) throw std::runtime_error("read_csv: malformed number '" + field + "'");
    return v;
}

}  // namespace

void write_csv(std::ostream& os, const Trajectory& tr) {
    os << 't';
    for (std::size_t c = 0; c < tr.dimension(); ++c) os << ",y" << (c + 1);
    os << '\n';
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        put_number(os, tr.times[i]);
        for (double v : tr.states[i]) {
            os << ',';
            put_number(os, v);
        }
        os << '\n';
    }
}

Trajectory read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_csv: missing header");
    const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (columns < 2 || line.rfind('t', 0) != 0) throw std::runtime_error("read_csv: header must be t,y1,...");
    Trajectory tr;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        if (line.back() == '\r') line.pop_back();
        std::vector<double> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(parse_number(line.substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != columns) throw std::runtime_error("read_csv: wrong number of columns");
        if (!tr.times.empty() && !(fields[0] > tr.times.back()))
            throw std::runtime_error("read_csv: times must be strictly increasing");
        tr.times.push_back(fields[0]);
        tr.states.emplace_back(fields.begin() + 1, fields.end());
    }
    return tr;
}

namespace {

/// Stored steps of the integration with derivatives, for Hermite interpolation.
class StepHistory {
public:
    StepHistory(const VectorHistory& history, double dt) : history_(history), dt_(dt) {}

    void push(double t, std::vector<double> y, std::vector<double> f) {
        t_.push_back(t);
        y_.push_back(std::move(y));
        f_.push_back(std::move(f));
    }

    [[nodiscard]] std::vector<double> at(double s) const {
        if (s <= 0.0 || t_.size() < 2) return history_(s);
        const double pos = s / dt_;
        auto j = static_cast<std::size_t>(std::floor(pos));
        if (j + 1 >= t_.size()) {
            if (std::abs(s - t_.back()) <= 1e-12 * std::max(1.0, std::abs(s))) return y_.back();
            throw std::logic_error("rk4_method_of_steps: delayed argument beyond the stored steps");
        }
        const double h = t_[j + 1] - t_[j];
        const double x = (s - t_[j]) / h;
        const double h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
        const double h10 = x * (1.0 - x) * (1.0 - x);
        const double h01 = x * x * (3.0 - 2.0 * x);
        const double h11 = x * x * (x - 1.0);
        std::vector<double> out(y_[j].size());
        for (std::size_t c = 0; c < out.size(); ++c)
            out[c] = h00 * y_[j][c] + h10 * h * f_[j][c] + h01 * y_[j + 1][c] + h11 * h * f_[j + 1][c];
        return out;
    }

private:
    const VectorHistory& history_;
    double dt_;
    std::vector<double> t_;
    std::vector<std::vector<double>> y_;
    std::vector<std::vector<double>> f_;
};

std::vector<double> axpy(const std::vector<double>& y, double a, const std::vector<double>& k) {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
    return out;
}

}  // namespace

Trajectory rk4_method_of_steps(const DelayedRhs& rhs, const VectorHistory& history, std::span<const double> lags,
                               double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("rk4_method_of_steps: dt and t_end must be positive");
    for (double lag : lags) {
        if (!(lag > 0.0)) throw std::invalid_argument("rk4_method_of_steps: lags must be positive");
        if (lag > t_end) continue;
        const double ratio = lag / dt;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
            throw std::invalid_argument("rk4_method_of_steps: every lag must be a multiple of dt");
    }
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    if (std::abs(static_cast<double>(steps) * dt - t_end) > 1e-9 * std::max(1.0, t_end))
        throw std::invalid_argument("rk4_method_of_steps: t_end must be a multiple of dt");

    StepHistory past(history, dt);
    auto lagged_at = [&](double t) {
        std::vector<std::vector<double>> out;
        out.reserve(lags.size());
        for (double lag : lags) out.push_back(past.at(t - lag));
        return out;
    };

    Trajectory tr;
    std::vector<double> y = history(0.0);
    tr.times.push_back(0.0);
    tr.states.push_back(y);
    past.push(0.0, y, rhs(0.0, y, lagged_at(0.0)));
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        const auto lag_mid = lagged_at(t + 0.5 * dt);
        const auto k1 = rhs(t, y, lagged_at(t));
        const auto k2 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k1), lag_mid);
        const auto k3 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k2), lag_mid);
        const auto k4 = rhs(t + dt, axpy(y, dt, k3), lagged_at(t + dt));
        for (std::size_t c = 0; c < y.size(); ++c) y[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        const double t_next = static_cast<double>(i + 1) * dt;
        tr.times.push_back(t_next);
        tr.states.push_back(y);
        past.push(t_next, y, rhs(t_next, y, lagged_at(t_next)));
    }
    return tr;
}

Trajectory rk4_method_of_steps(const std::function<double(double, double, std::span<const double>)>& rhs,
                               const HistorySpec& history, std::span<const double> lags, double t_end, double dt) {
    if (history.mode() != HistorySpec::Mode::function && history.mode() != HistorySpec::Mode::constant)
        throw std::invalid_argument("rk4_method_of_steps: history must be a function or a constant");
    const VectorHistory vh = [&history](double t) { return std::vector<double>{history.value(t)}; };
    const DelayedRhs vrhs = [&rhs](double t, std::span<const double> y, const std::vector<std::vector<double>>& lagged) {
        std::vector<double> z(lagged.size());
        for (std::size_t k = 0; k < lagged.size(); ++k) z[k] = lagged[k][0];
        return std::vector<double>{rhs(t, y[0], z)};
    };
    return rk4_method_of_steps(vrhs, vh, lags, t_end, dt);
}

namespace {

/// Interior local maxima of v with their refined times.
std::vector<std::pair<double, double>> local_maxima(const std::vector<double>& t, const std::vector<double>& v,
                                                    std::size_t from) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = std::max<std::size_t>(from, 1); i + 1 < v.size(); ++i) {
        if (v[i] > v[i - 1] && v[i] >= v[i + 1]) {
            // Parabola through three samples (uniform or not) for the peak time.
            const double h1 = t[i] - t[i - 1];
            const double h2 = t[i + 1] - t[i];
            const double d1 = (v[i] - v[i - 1]) / h1;
            const double d2 = (v[i + 1] - v[i]) / h2;
            const double curv = (d2 - d1) / (0.5 * (h1 + h2));
            double peak = t[i];
            if (curv < 0.0) peak = t[i] - 0.5 * (d1 + d2) / curv;
            out.emplace_back(peak, v[i]);
        }
    }
    return out;
}

}  // namespace

double estimate_period(const Trajectory& tr, std::size_t component) {
    const auto v = tr.component(component);
    if (v.size() < 5) throw std::runtime_error("estimate_period: trajectory too short");
    const std::size_t half = v.size() / 2;
    const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(half), v.end());
    const double threshold = *lo + 0.5 * (*hi - *lo);
    std::vector<double> peaks;
    for (const auto& [time, value] : local_maxima(tr.times, v, half))
        if (value >= threshold) peaks.push_back(time);
    if (peaks.size() < 2) throw std::runtime_error("estimate_period: fewer than two maxima in the trajectory tail");
    return peaks.back() - peaks[peaks.size() - 2];
}

OpExpr CycleTerms::state(std::size_t c) const { return unknown(c); }

OpExpr CycleTerms::lagged(std::size_t c, double lag) const {
    DelayMap tau;
    if (fixed_) {
        const double shift = lag / *fixed_;
        tau = DelayMap([shift](double theta) { return theta - shift; });
    } else {
        tau = DelayMap([lag](double theta, std::span<const double> p) { return theta - lag / p[0]; },
                       [lag](double, std::span<const double> p, std::size_t k) {
                           return k == 0 ? lag / (p[0] * p[0]) : 0.0;
                       });
    }
    return delay(unknown(c), std::move(tau), chebyshev_ ? HistorySpec::periodic(1.0) : HistorySpec::none());
}

OpExpr CycleTerms::period() const { return fixed_ ? constant(*fixed_) : param(0); }

std::vector<double> LimitCycle::times() const {
    std::vector<double> t(colloc.nodes().begin(), colloc.nodes().end());
    for (auto& v : t) v *= period;
    return t;
}

double LimitCycle::value(std::size_t c, double theta) const {
    theta -= std::floor(theta);
    const HistorySpec wrap = colloc.periodic() ? HistorySpec::none() : HistorySpec::periodic(1.0);
    const Resampling r = colloc.resample(std::span<const double>(&theta, 1), wrap);
    const auto& s = states.at(c);
    double out = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) out += r.matrix(0, j) * s[j];
    return out;
}

namespace {

Collocation cycle_grid(CycleBasis basis, std::size_t n) {
    if (basis == CycleBasis::trigonometric) return Collocation(trig_grid(n, 0.0, 1.0));
    return Collocation(PiecewiseGrid({cheb_grid(n, 0.0, 1.0)}));
}

}  // namespace

LimitCycle solve_limit_cycle(const PeriodicProblem& p, std::vector<std::vector<double>> initial_states,
                             double period_guess, std::size_t n, const LimitCycleOptions& options) {
    if (!p.rhs) throw std::invalid_argument("solve_limit_cycle: missing right-hand side");
    if (!(period_guess > 0.0)) throw std::invalid_argument("solve_limit_cycle: period guess must be positive");
    if (initial_states.size() != p.n_components) throw std::invalid_argument("solve_limit_cycle: wrong component count");
    const bool cheb = options.basis == CycleBasis::chebyshev;
    const CycleTerms terms(cheb, p.period_unknown ? std::nullopt : std::optional<double>(period_guess));
    const std::vector<OpExpr> f = p.rhs(terms);
    if (f.size() != p.n_components) throw std::invalid_argument("solve_limit_cycle: rhs must give one term per component");

    CollocationProblem prob{cycle_grid(options.basis, n), {}, p.period_unknown ? 1U : 0U, {}, {}};
    for (std::size_t c = 0; c < p.n_components; ++c) prob.equations.push_back(diff(unknown(c)) - terms.period() * f[c]);
    const std::size_t nn = prob.colloc.size();
    if (cheb) {
        for (std::size_t c = 0; c < p.n_components; ++c) {
            LinearConstraint row;
            row.coeffs = point_row(prob, c, 0.0);
            const auto right = point_row(prob, c, 1.0);
            for (std::size_t j = 0; j < row.coeffs.size(); ++j) row.coeffs[j] -= right[j];
            row.description = "periodicity of component " + std::to_string(c + 1);
            prob.replaced.emplace_back(c * nn, std::move(row));
        }
    }
    if (p.period_unknown) {
        if (p.phase.component >= p.n_components) throw std::invalid_argument("solve_limit_cycle: phase component out of range");
        LinearConstraint phase;
        if (p.phase.kind == PhaseCondition::Kind::anchor_derivative_zero) {
            phase.coeffs = derivative_row(prob, p.phase.component, 0);
            phase.description = "phase: derivative of component vanishes at theta = 0";
        } else {
            phase.coeffs = point_row(prob, p.phase.component, 0.0);
            phase.rhs = p.phase.value;
            phase.description = "phase: component value fixed at theta = 0";
        }
        prob.appended.push_back(std::move(phase));
    }

    std::vector<double> x0;
    x0.reserve(prob.n_unknowns());
    for (auto& s : initial_states) {
        if (s.size() != nn) throw std::invalid_argument("solve_limit_cycle: initial state has the wrong length");
        x0.insert(x0.end(), s.begin(), s.end());
    }
    if (p.period_unknown) x0.push_back(period_guess);

    NewtonOptions nopts = options.newton;
    if (p.period_unknown) {
        const std::size_t idx = x0.size() - 1;
        auto user = nopts.on_iterate;
        nopts.on_iterate = [idx, user](std::span<const double> x) {
            if (!(x[idx] > 0.0)) throw std::runtime_error("solve_limit_cycle: Newton iterate has non-positive period");
            if (user) user(x);
        };
    }
    NewtonResult res = newton(prob, std::move(x0), nopts);

    LimitCycle out{prob.colloc, {}, p.period_unknown ? res.x.back() : period_guess, std::move(res.report)};
    for (std::size_t c = 0; c < p.n_components; ++c) {
        const auto comp = res.component(c, nn);
        out.states.emplace_back(comp.begin(), comp.end());
    }
    return out;
}

LimitCycle solve_limit_cycle(const PeriodicProblem& p, const Trajectory& initial, double period_guess, std::size_t n,
                             const LimitCycleOptions& options) {
    if (initial.times.size() < 2) throw std::invalid_argument("solve_limit_cycle: trajectory too short");
    const double t_end = initial.times.back();
    const double latest_start = t_end - period_guess;
    if (latest_start < initial.times.front())
        throw std::invalid_argument("solve_limit_cycle: trajectory shorter than one period");
    // Start the window at the last maximum of the phase component that leaves a full period.
    const std::size_t pc = p.phase.component < initial.dimension() ? p.phase.component : 0;
    const auto v = initial.component(pc);
    double start = latest_start;
    for (const auto& [time, value] : local_maxima(initial.times, v, 0))
        if (time <= latest_start) start = time;

    const Collocation grid = cycle_grid(options.basis, n);
    std::vector<std::vector<double>> states(p.n_components);
    for (std::size_t c = 0; c < p.n_components; ++c)
        for (double theta : grid.nodes()) states[c].push_back(initial.value(c, start + theta * period_guess));
    return solve_limit_cycle(p, std::move(states), period_guess, n, options);
}

double limit_cycle_residual(const PeriodicProblem& p, const LimitCycle& cycle, std::size_t refine) {
    if (refine < 1) throw std::invalid_argument("limit_cycle_residual: refine must be at least 1");
    const bool cheb = !cycle.colloc.periodic();
    const std::size_t fine_n = cycle.colloc.size() * refine;
    const Collocation fine = cycle_grid(cheb ? CycleBasis::chebyshev : CycleBasis::trigonometric, fine_n);
    const CycleTerms terms(cheb, cycle.period);
    const std::vector<OpExpr> f = p.rhs(terms);
    std::vector<double> state;
    state.reserve(p.n_components * fine_n);
    for (std::size_t c = 0; c < p.n_components; ++c)
        for (double theta : fine.nodes()) state.push_back(cycle.value(c, theta));
    double worst = 0.0;
    for (std::size_t c = 0; c < p.n_components; ++c) {
        const OpExpr eq = diff(unknown(c)) - terms.period() * f[c];
        const auto r = discretize(eq, fine, state, {}, {p.n_components, 0});
        worst = std::max(worst, norm_inf(r));
    }
    return worst;
}

}  // namespace chebdde
