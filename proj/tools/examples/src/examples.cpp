#include "chebdde_examples/examples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/math/special_functions/lambert_w.hpp>

#include <chebdde/eig.hpp>
#include <chebdde/functional.hpp>
#include <chebdde/interp.hpp>
#include <chebdde/linalg.hpp>
#include <chebdde/mesh.hpp>

namespace chebdde::examples {

std::string_view to_string(Category c) noexcept {
    switch (c) {
        case Category::ode: return "ode";
        case Category::dde: return "dde";
        case Category::fde: return "fde";
        case Category::evp: return "evp";
        case Category::periodic: return "periodic";
        case Category::functional: return "functional";
    }
    return "unknown";
}

double koenigs_oracle(double t, double lambda, std::size_t compositions) {
    double x = t;
    double scale = 1.0;
    for (std::size_t k = 0; k < compositions; ++k) {
        x = lambda * std::sin(x);
        scale /= lambda;
    }
    return scale * x;
}

PeriodicProblem lotka_volterra_problem(const LotkaVolterra& p) {
    PeriodicProblem prob;
    prob.n_components = 2;
    prob.rhs = [p](const CycleTerms& terms) {
        const OpExpr x = terms.state(0);
        const OpExpr y = terms.state(1);
        const OpExpr y_lag = terms.lagged(1, p.s);
        const OpExpr response = x * y_lag * reciprocal(constant(1.0) + x);
        return std::vector<OpExpr>{x - (1.0 / p.K) * x * x - response, -p.gamma * y + p.delta * response};
    };
    return prob;
}

Trajectory lotka_volterra_trajectory(const LotkaVolterra& p, double t_end, double dt) {
    const double xe = p.gamma / (p.delta - p.gamma);
    const double ye = (1.0 - xe / p.K) * (1.0 + xe);
    const DelayedRhs rhs = [p](double, std::span<const double> u, const std::vector<std::vector<double>>& lagged) {
        const double x = u[0];
        const double response = x * lagged[0][1] / (1.0 + x);
        return std::vector<double>{x - x * x / p.K - response, -p.gamma * u[1] + p.delta * response};
    };
    const VectorHistory history = [xe, ye](double) { return std::vector<double>{1.2 * xe, ye}; };
    const double lags[] = {p.s};
    return rk4_method_of_steps(rhs, history, lags, t_end, dt);
}

PeriodicProblem logistic_problem(const Logistic& p) {
    PeriodicProblem prob;
    prob.n_components = 1;
    prob.rhs = [p](const CycleTerms& terms) {
        const OpExpr y = terms.state(0);
        return std::vector<OpExpr>{(constant(p.lambda) - terms.lagged(0, p.lag)) * y};
    };
    return prob;
}

Trajectory logistic_trajectory(const Logistic& p, double t_end, double dt) {
    const auto rhs = [p](double, double y, std::span<const double> lagged) { return (p.lambda - lagged[0]) * y; };
    const double lags[] = {p.lag};
    return rk4_method_of_steps(rhs, HistorySpec::constant(0.5), lags, t_end, dt);
}

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::size_t> panel_sizes(const ExampleSettings& s, std::size_t panels, std::size_t default_n,
                                     bool staggered) {
    if (!s.sizes.empty()) {
        if (s.sizes.size() != panels)
            throw std::invalid_argument("expected " + std::to_string(panels) + " panel sizes, got " +
                                        std::to_string(s.sizes.size()));
        return s.sizes;
    }
    const std::size_t n = s.n.value_or(default_n);
    std::vector<std::size_t> sizes(panels, n);
    if (staggered)
        for (std::size_t k = 0; k < panels; ++k) sizes[k] += k;
    return sizes;
}

std::size_t single_size(const ExampleSettings& s, std::size_t default_n) {
    if (s.sizes.size() > 1) throw std::invalid_argument("this example uses a single panel");
    return s.sizes.empty() ? s.n.value_or(default_n) : s.sizes.front();
}

NewtonOptions newton_options(const ExampleSettings& s) {
    NewtonOptions o;
    o.tol = s.tol;
    if (s.max_iter) o.max_iter = *s.max_iter;
    return o;
}

LinearConstraint value_at(const CollocationProblem& p, double x, double v, std::string description) {
    return {point_row(p, 0, x), v, std::move(description)};
}

/// Scalar problem on the grid with the initial condition y(left) = y0 and
/// value continuity across interior breakpoints.
CollocationProblem ivp(const PiecewiseGrid& g, OpExpr eq, double y0, std::size_t n_params = 0) {
    CollocationProblem p{Collocation(g), {std::move(eq)}, n_params, {}, {}};
    p.replaced.emplace_back(0, value_at(p, g.left(), y0, "initial condition"));
    if (g.panel_count() > 1)
        for (auto& row : continuity_constraints(p, 0, 1, 1, 0)) p.replaced.push_back(std::move(row));
    return p;
}

ExampleOutcome piecewise_outcome(const PiecewiseGrid& g, std::span<const double> y,
                                 const std::function<double(double)>& exact) {
    ExampleOutcome out;
    out.t.assign(g.nodes().begin(), g.nodes().end());
    out.y.emplace_back(y.begin(), y.end());
    for (std::size_t k = 0; k < g.panel_count(); ++k) out.panel.insert(out.panel.end(), g.panel(k).size(), k);
    out.breakpoints.assign(g.breakpoints().begin(), g.breakpoints().end());
    out.dof = g.size();
    if (exact) {
        double err = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < out.t.size(); ++i) {
            const double e = exact(out.t[i]);
            err = std::max(err, std::abs(y[i] - e));
            scale = std::max(scale, std::abs(e));
        }
        out.error = err;
        out.relative_error = scale > 0.0 ? err / scale : err;
    }
    auto fn = std::make_shared<PiecewiseFunction>(g, std::vector<double>(y.begin(), y.end()));
    out.interpolant = [fn](std::span<const double> xs) { return (*fn)(xs); };
    return out;
}

ExampleOutcome solved(const CollocationProblem& p, const NewtonResult& r, const std::function<double(double)>& exact) {
    const PiecewiseGrid& g = p.colloc.piecewise();
    ExampleOutcome out = piecewise_outcome(g, r.component(0, g.size()), exact);
    out.cond = r.report.final_jacobian_cond;
    out.newton = r.report;
    for (std::size_t k = 0; k < p.n_params; ++k) out.extras["param" + std::to_string(k)] = r.x[g.size() + k];
    return out;
}

ExampleOutcome run_linear(const PiecewiseGrid& g, OpExpr eq, double y0, const std::function<double(double)>& exact) {
    const CollocationProblem p = ivp(g, std::move(eq), y0);
    return solved(p, solve_linear(p), exact);
}

std::vector<double> guess(const PiecewiseGrid& g, const std::function<double(double)>& f) {
    std::vector<double> x;
    for (double t : g.nodes()) x.push_back(f(t));
    return x;
}

double exp_minus(double t) { return std::exp(-t); }

double example3_exact(double t) {
    if (t <= 0.5) return std::exp(-t);
    return std::exp(-t + 0.5) * (0.5 - t + std::exp(-0.5));
}

PiecewiseGrid single(std::size_t n, double a, double b) {
    const double breaks[] = {a, b};
    const std::size_t sizes[] = {n};
    return build_piecewise_grid(breaks, sizes);
}

PiecewiseGrid propagated(const std::function<double(double)>& tau, double a, double b, const ExampleSettings& s,
                         std::size_t default_n, bool staggered) {
    const double start[] = {a};
    const auto interior = propagate_breakpoints(tau, a, b, start);
    const auto breaks = with_endpoints(interior, a, b);
    const auto sizes = panel_sizes(s, breaks.size() - 1, default_n, staggered);
    return build_piecewise_grid(breaks, sizes);
}

OpExpr y() { return unknown(0); }

ExampleOutcome example1(const ExampleSettings& s) {
    const auto g = single(single_size(s, 20), 0.0, 1.0);
    return run_linear(g, diff(y()) + y(), 1.0, exp_minus);
}

ExampleOutcome example2(const ExampleSettings& s) {
    const auto g = single(single_size(s, 20), 0.0, 1.0);
    const OpExpr eq = diff(y()) + y() + delay(y(), [](double t) { return 0.5 * t; }) -
                      constant([](double t) { return std::exp(-0.5 * t); });
    return run_linear(g, eq, 1.0, exp_minus);
}

OpExpr example3_equation() {
    return diff(y()) + y() + delay(y(), [](double t) { return t - 0.5; }, HistorySpec::constant(0.0));
}

ExampleOutcome example3(const ExampleSettings& s) {
    const auto g = propagated([](double t) { return t - 0.5; }, 0.0, 1.0, s, 20, false);
    return run_linear(g, example3_equation(), 1.0, example3_exact);
}

ExampleOutcome example3_single(const ExampleSettings& s) {
    const auto g = single(single_size(s, 40), 0.0, 1.0);
    return run_linear(g, example3_equation(), 1.0, example3_exact);
}

ExampleOutcome example4(const ExampleSettings& s) {
    const auto tau = [](double t) { return t - 0.5; };
    const auto g = propagated(tau, 0.0, 2.0, s, 10, true);
    return run_linear(g, example3_equation(), 1.0, {});
}

ExampleOutcome example5(const ExampleSettings& s) {
    const auto tau = [](double t) { return t * t - 0.25; };
    const auto g = propagated(tau, 0.0, 1.0, s, 12, false);
    const OpExpr eq = diff(y()) + y() + delay(y(), tau, HistorySpec::constant(0.0));
    return run_linear(g, eq, 1.0, {});
}

ExampleOutcome example6(const ExampleSettings& s) {
    const auto g = single(single_size(s, 12), 0.0, 1.0);
    const OpExpr eq = diff(y()) + state_delay(y(), y()) -
                      constant([](double t) { return std::cos(t) + std::sin(std::sin(t)); });
    const CollocationProblem p = ivp(g, eq, 0.0);
    return solved(p, newton(p, guess(g, [](double t) { return t; }), newton_options(s)),
                  [](double t) { return std::sin(t); });
}

ExampleOutcome example7(const ExampleSettings& s) {
    const auto g = single(single_size(s, 14), 0.0, 1.0);
    const OpExpr eq = diff(y()) + 0.5 * delay(y(), [](double t) { return 0.5 * t; }) -
                      volterra([](double t, double u) { return std::exp(-(t - u) * (t - u)); }, y());
    return run_linear(g, eq, 1.0, {});
}

ExampleOutcome example8(const ExampleSettings& s) {
    const auto g = single(single_size(s, 20), 0.0, 1.0);
    const OpExpr eq = diff(y()) + y() + delay(y(), [](double t) { return 1.0 - t * t; }) -
                      constant([](double t) { return std::exp(t * t - 1.0); });
    return run_linear(g, eq, 1.0, exp_minus);
}

ExampleOutcome example9(const ExampleSettings& s) {
    const auto g = single(single_size(s, 12), 0.0, 1.0);
    const OpExpr eq = diff(y()) + state_delay(y(), y());
    const CollocationProblem p = ivp(g, eq, 1.0);
    return solved(p, newton(p, guess(g, [](double) { return 1.0; }), newton_options(s)), {});
}

ExampleOutcome chebfun_ex1(const ExampleSettings& s) {
    constexpr double q = 0.5;
    const auto g = single(single_size(s, 20), 0.0, 20.0);
    const auto pantograph = [](double t) { return q * t; };
    const double e1 = std::exp(-1.0);
    const OpExpr eq = diff(y()) -
                      constant([](double t) { return (q * t - t - 10.0) / 100.0; }) * delay(y(), pantograph) -
                      constant([e1](double t) { return (t + 20.0) * e1 / 100.0; }) - 0.01 * cumsum(y()) -
                      0.001 * delay(volterra([](double x, double u) { return x / q - u; }, y()), pantograph);
    return run_linear(g, eq, e1, [](double t) { return std::exp(t / 10.0 - 1.0); });
}

OpExpr chebfun_ex2_equation() {
    const auto half = [](double t) { return 0.5 * t; };
    const OpExpr inner = constant([](double t) { return 2.0 * std::cos(2.0 * t); }) *
                             exp(constant([](double t) { return 2.0 * std::cos(t); }) * log(delay(y(), half))) +
                         log(neutral(y(), half)) - constant([](double t) { return std::log(2.0 * std::cos(t)); }) -
                         constant([](double t) { return std::sin(t); });
    return diff(y()) - inner;
}

ExampleOutcome chebfun_ex2_branch(const ExampleSettings& s, double slope, const std::function<double(double)>& exact) {
    const auto g = single(single_size(s, 14), 0.0, 0.1);
    const CollocationProblem p = ivp(g, chebfun_ex2_equation(), 1.0);
    ExampleOutcome out =
        solved(p, newton(p, guess(g, [slope](double t) { return 1.0 + slope * t; }), newton_options(s)), exact);
    out.extras["initial_slope"] = slope;
    out.extras["residual"] = out.newton->final_residual_norm;
    return out;
}

double lambert_slope() { return -boost::math::lambert_w0(-2.0 * std::exp(-2.0)); }

ExampleOutcome chebfun_ex2(const ExampleSettings& s) {
    return chebfun_ex2_branch(s, 2.0, [](double t) { return std::exp(std::sin(2.0 * t)); });
}

/// The Lambert branch has a Jacobian condition number near 1e7, so updates
/// stall around 1e-11 and the default tolerance is relaxed accordingly.
ExampleOutcome chebfun_ex2_lambert(const ExampleSettings& s) {
    ExampleSettings relaxed = s;
    if (!relaxed.tol) relaxed.tol = 1e-10;
    return chebfun_ex2_branch(relaxed, lambert_slope(), {});
}

ExampleOutcome chebfun_ex4(const ExampleSettings& s) {
    const auto g = single(single_size(s, 14), 0.0, 1.0);
    const DelayMap scaled([](double t, std::span<const double> p) { return p[0] * t; },
                          [](double t, std::span<const double>, std::size_t) { return t; });
    const OpExpr eq = diff(y()) + y() + delay(y(), scaled) - constant([](double t) { return std::exp(-0.5 * t); });
    CollocationProblem p = ivp(g, eq, 1.0, 1);
    p.appended.push_back(value_at(p, 1.0, 0.25, "right boundary value"));
    auto x0 = guess(g, [](double t) { return 1.0 - 0.75 * t; });
    x0.push_back(0.5);
    ExampleOutcome out = solved(p, newton(p, std::move(x0), newton_options(s)), {});
    out.extras["p"] = out.extras.at("param0");
    out.extras.erase("param0");
    return out;
}

struct DelayEvp {
    Grid grid;
    Matrix a;
    Matrix b;
};

/// y'' = -lambda y(t/2) on [0,1] with Dirichlet rows in A and zero rows in B.
DelayEvp delay_evp(std::size_t n) {
    DelayEvp p{cheb_grid(n, 0.0, 1.0), Matrix(), Matrix()};
    p.a = diffmat(p.grid, 2);
    std::vector<double> half(p.grid.nodes().begin(), p.grid.nodes().end());
    for (auto& t : half) t *= 0.5;
    p.b = -1.0 * barymat(half, p.grid);
    for (std::size_t row : {std::size_t{0}, n - 1}) {
        const auto unit = unit_row(n, row);
        std::copy(unit.begin(), unit.end(), p.a.row(row).begin());
        std::fill(p.b.row(row).begin(), p.b.row(row).end(), 0.0);
    }
    return p;
}

ExampleOutcome chebfun_ex5(const ExampleSettings& s) {
    constexpr std::size_t kWanted = 6;
    constexpr std::size_t kRefine = 8;
    constexpr double kStable = 1e-6;
    const std::size_t n = single_size(s, 60);
    const double shift = s.shift.value_or(0.0);
    const DelayEvp p = delay_evp(n);
    const DelayEvp finer = delay_evp(n + kRefine);
    const PiecewiseGrid g({p.grid});
    EigOptions opts;
    opts.grid = g;
    const EigResult r = eig_generalized(p.a, p.b, 2 * kWanted, shift, opts);
    EigOptions finer_opts;
    finer_opts.grid = PiecewiseGrid({finer.grid});
    const EigResult check = eig_generalized(finer.a, finer.b, 3 * kWanted, shift, finer_opts);

    ExampleOutcome out;
    out.t.assign(p.grid.nodes().begin(), p.grid.nodes().end());
    out.panel.assign(n, 0);
    out.breakpoints = {0.0, 1.0};
    out.dof = n;
    out.cond = cond_inf(p.a - shift * p.b);
    double worst = 0.0;
    std::size_t unstable = 0;
    for (std::size_t i = 0; i < r.eigenvalues.size() && out.eigenvalues.size() < kWanted; ++i) {
        const auto lambda = r.eigenvalues[i];
        const bool stable = std::any_of(check.eigenvalues.begin(), check.eigenvalues.end(), [&](const auto& z) {
            return std::abs(z - lambda) <= kStable * std::abs(lambda);
        });
        if (!stable) {
            ++unstable;
            continue;
        }
        out.eigenvalues.push_back(lambda);
        std::vector<double> re;
        for (const auto& z : r.eigenvectors[i]) re.push_back(z.real());
        out.y.push_back(std::move(re));
        worst = std::max(worst, r.residuals[i]);
    }
    out.extras["max_residual"] = worst;
    out.extras["rejected"] = static_cast<double>(r.rejected);
    out.extras["unstable_under_refinement"] = static_cast<double>(unstable);
    if (!out.y.empty()) {
        auto fn = std::make_shared<PiecewiseFunction>(g, out.y.front());
        out.interpolant = [fn](std::span<const double> xs) { return (*fn)(xs); };
    }
    return out;
}

OpExpr periodic_linear_equation() {
    const double a = kPi / std::numbers::sqrt2;
    const double b = kPi / 2.0;
    return diff(y(), 2) + constant([](double t) { return std::sin(t); }) * neutral(y(), [a](double t) { return t - a; }) +
           constant([](double t) { return std::cos(t); }) * delay(y(), [b](double t) { return t - b; }) -
           constant(1.0);
}

ExampleOutcome periodic_linear(const ExampleSettings& s) {
    const Grid grid = trig_grid(single_size(s, 32), 0.0, 2.0 * kPi);
    const SampledFunction u = solve_periodic_linear(periodic_linear_equation(), grid);
    ExampleOutcome out;
    out.t.assign(grid.nodes().begin(), grid.nodes().end());
    out.y.push_back(u.values);
    out.panel.assign(out.t.size(), 0);
    out.breakpoints = {0.0, 2.0 * kPi};
    out.dof = grid.size();
    const Collocation colloc(grid);
    out.cond = cond_inf(linearize(periodic_linear_equation(), colloc, u.values, {}, {1, 0}).jac);
    const auto mags = trig_coefficient_magnitudes(u.values);
    double peak = 0.0;
    for (double m : mags) peak = std::max(peak, m);
    out.extras["trailing_coefficient"] = peak > 0.0 ? mags.back() / peak : 0.0;
    auto fn = std::make_shared<SampledFunction>(u);
    out.interpolant = [fn](std::span<const double> xs) { return trig_barymat(xs, fn->grid) * fn->values; };
    return out;
}

ExampleOutcome cycle_outcome(const PeriodicProblem& p, const LimitCycle& c) {
    ExampleOutcome out;
    out.t = c.times();
    out.y = c.states;
    out.panel.assign(out.t.size(), 0);
    out.breakpoints = {0.0, c.period};
    out.dof = c.colloc.size() * p.n_components;
    out.cond = c.report.final_jacobian_cond;
    out.newton = c.report;
    out.period = c.period;
    out.extras["residual_fine_grid"] = limit_cycle_residual(p, c);
    if (c.colloc.periodic()) {
        const auto mags = trig_coefficient_magnitudes(c.states.front());
        const double first = mags.size() > 1 ? mags[1] : 0.0;
        out.extras["trailing_coefficient"] = first > 0.0 ? mags.back() / first : 0.0;
    }
    auto cycle = std::make_shared<LimitCycle>(c);
    out.interpolant = [cycle](std::span<const double> thetas) {
        std::vector<double> v;
        v.reserve(thetas.size());
        for (double th : thetas) v.push_back(cycle->value(0, th));
        return v;
    };
    return out;
}

ExampleOutcome lotka_volterra(const ExampleSettings& s) {
    const LotkaVolterra model;
    const PeriodicProblem p = lotka_volterra_problem(model);
    const Trajectory tr = s.trajectory ? *s.trajectory : lotka_volterra_trajectory(model, 600.0, 0.01);
    const double period = s.period_guess ? *s.period_guess : estimate_period(tr, 0);
    LimitCycleOptions opts;
    opts.newton = newton_options(s);
    return cycle_outcome(p, solve_limit_cycle(p, tr, period, single_size(s, 129), opts));
}

ExampleOutcome logistic_cycle(const ExampleSettings& s, CycleBasis basis, std::size_t default_n) {
    const Logistic model;
    const PeriodicProblem p = logistic_problem(model);
    const Trajectory tr = s.trajectory ? *s.trajectory : logistic_trajectory(model, 100.0, 0.01);
    const double period = s.period_guess.value_or(4.0);
    LimitCycleOptions opts;
    opts.basis = basis;
    opts.newton = newton_options(s);
    return cycle_outcome(p, solve_limit_cycle(p, tr, period, single_size(s, default_n), opts));
}

ExampleOutcome schroeder(const ExampleSettings& s) {
    constexpr double lambda = 0.5;
    const Grid grid = cheb_grid(single_size(s, 30), 0.0, kPi);
    const auto f = [](double t) { return lambda * std::sin(t); };
    const SampledFunction u = functional_equation(f, lambda, grid);
    const PiecewiseGrid g({grid});
    ExampleOutcome out = piecewise_outcome(g, u.values, [](double t) { return koenigs_oracle(t, lambda); });
    std::vector<double> image;
    for (double t : grid.nodes()) image.push_back(f(t));
    Matrix system = barymat(image, grid) - lambda * Matrix::identity(grid.size());
    const Matrix d = diffmat(grid);
    std::copy(d.row(0).begin(), d.row(0).end(), system.row(0).begin());
    out.cond = cond_inf(system);
    double err = 0.0;
    for (std::size_t i = 0; i < out.t.size(); ++i)
        if (out.t[i] <= 2.0) err = std::max(err, std::abs(u.values[i] - koenigs_oracle(out.t[i], lambda)));
    out.extras["error_on_0_2"] = err;
    return out;
}

std::vector<ExampleSpec> build_registry() {
    std::vector<ExampleSpec> r;
    const auto cheb = [](double t) { return std::exp(t / 10.0 - 1.0); };
    r.push_back({"example1", "y' = -y, y(0) = 1 on [0,1]", Category::ode, 20, 4, exp_minus, example1});
    r.push_back({"example2", "pantograph y' = -y - y(t/2) + exp(-t/2)", Category::dde, 20, 4, exp_minus, example2});
    r.push_back({"example3", "y' = -y - y(t-1/2), zero history, two panels", Category::dde, 20, 4, example3_exact,
                 example3});
    r.push_back({"example3_single_domain", "y' = -y - y(t-1/2) on a single panel", Category::dde, 40, 4,
                 example3_exact, example3_single});
    r.push_back({"example4", "y' = -y - y(t-1/2) on [0,2], four panels", Category::dde, 10, 4, {}, example4});
    r.push_back({"example5", "y' = -y - y(t^2-1/4), zero history, three panels", Category::dde, 12, 4, {}, example5});
    r.push_back({"example6", "state-dependent y' = -y(y) + cos t + sin(sin t)", Category::dde, 12, 4,
                 [](double t) { return std::sin(t); }, example6});
    r.push_back({"example7", "y' + y(t/2)/2 = int_0^t exp(-(t-s)^2) y(s) ds", Category::dde, 14, 4, {}, example7});
    r.push_back({"example8", "advanced argument y' = -y - y(1-t^2) + exp(t^2-1)", Category::fde, 20, 4, exp_minus,
                 example8});
    r.push_back({"example9", "state-dependent y' = -y(y), y(0) = 1", Category::fde, 12, 4, {}, example9});
    r.push_back({"chebfun_ex1", "pantograph with Volterra terms on [0,20]", Category::dde, 20, 6, cheb, chebfun_ex1});
    r.push_back({"chebfun_ex2", "neutral pantograph equation, branch y'(0) = 2", Category::dde, 14, 4,
                 [](double t) { return std::exp(std::sin(2.0 * t)); }, chebfun_ex2});
    r.push_back({"chebfun_ex2_lambert", "neutral pantograph equation, Lambert W branch", Category::dde, 14, 4, {},
                 chebfun_ex2_lambert});
    r.push_back({"chebfun_ex3", "state-dependent y' = -y(y), y(0) = 1", Category::fde, 12, 4, {}, example9});
    r.push_back({"chebfun_ex4", "y' + y + y(pt) = exp(-t/2) with unknown p, y(1) = 1/4", Category::dde, 14, 4, {},
                 chebfun_ex4});
    r.push_back({"chebfun_ex5", "eigenvalues of y'' = -lambda y(t/2) with Dirichlet conditions", Category::evp, 60, 16,
                 {}, chebfun_ex5});
    r.push_back({"periodic_linear", "u'' + sin t u'(t-pi/sqrt2) + cos t u(t-pi/2) = 1", Category::periodic, 32, 8, {},
                 periodic_linear});
    r.push_back({"lotka_volterra", "delayed Lotka-Volterra limit cycle", Category::periodic, 129, 33, {},
                 lotka_volterra});
    r.push_back({"logistic_cycle", "delayed logistic limit cycle, trigonometric basis", Category::periodic, 25, 9, {},
                 [](const ExampleSettings& s) { return logistic_cycle(s, CycleBasis::trigonometric, 25); }});
    r.push_back({"logistic_cycle_cheb", "delayed logistic limit cycle, Chebyshev basis", Category::periodic, 50, 12,
                 {}, [](const ExampleSettings& s) { return logistic_cycle(s, CycleBasis::chebyshev, 50); }});
    r.push_back({"schroeder", "Schroeder equation u(sin(t)/2) = u(t)/2 on [0,pi]", Category::functional, 30, 4,
                 [](double t) { return koenigs_oracle(t, 0.5); }, schroeder});
    return r;
}

double eigen_distance(const ExampleOutcome& a, const ExampleOutcome& ref) {
    const std::size_t k = std::min(a.eigenvalues.size(), ref.eigenvalues.size());
    if (k == 0) throw std::runtime_error("converge: no eigenvalues to compare");
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        worst = std::max(worst, std::abs(a.eigenvalues[i] - ref.eigenvalues[i]) / std::abs(ref.eigenvalues[i]));
    return worst;
}

double profile_distance(const ExampleOutcome& a, const ExampleOutcome& ref, bool periodic_cycle) {
    std::vector<double> points = a.t;
    if (periodic_cycle && a.period)
        for (auto& v : points) v /= *a.period;
    const auto r = ref.interpolant(points);
    double worst = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) worst = std::max(worst, std::abs(a.y.front()[i] - r[i]));
    return worst;
}

}  // namespace

const std::vector<ExampleSpec>& registry() {
    static const std::vector<ExampleSpec> r = build_registry();
    return r;
}

const ExampleSpec* find_example(std::string_view name) {
    for (const auto& spec : registry())
        if (spec.name == name) return &spec;
    return nullptr;
}

std::vector<ConvergenceRecord> converge(const ExampleSpec& spec, std::size_t n_min, std::size_t n_max,
                                        std::size_t step, const ExampleSettings& base) {
    if (step == 0 || n_min > n_max) throw std::invalid_argument("converge: need n_min <= n_max and step > 0");
    if (n_min < spec.min_n)
        throw std::invalid_argument("converge: n_min below the smallest size for " + spec.name + " (" +
                                    std::to_string(spec.min_n) + ")");
    std::vector<std::size_t> ns;
    for (std::size_t n = n_min; n <= n_max; n += step) ns.push_back(n);
    std::vector<ExampleOutcome> runs;
    for (std::size_t n : ns) {
        ExampleSettings s = base;
        s.n = n;
        s.sizes.clear();
        runs.push_back(spec.run(s));
    }
    const bool evp = spec.category == Category::evp;
    const bool cycle = runs.front().period.has_value();
    const bool proxy = !spec.exact || evp || cycle;
    if (proxy && runs.size() < 2) throw std::invalid_argument("converge: proxy mode needs at least two sizes");
    const ExampleOutcome& ref = runs.back();
    std::vector<ConvergenceRecord> out;
    const std::size_t count = proxy ? runs.size() - 1 : runs.size();
    for (std::size_t i = 0; i < count; ++i) {
        const ExampleOutcome& run = runs[i];
        double err = 0.0;
        if (evp) {
            err = eigen_distance(run, ref);
        } else if (!proxy) {
            err = *run.error;
        } else {
            err = profile_distance(run, ref, cycle);
        }
        out.push_back({run.dof, err, run.cond});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
    return out;
}

}  // namespace chebdde::examples
