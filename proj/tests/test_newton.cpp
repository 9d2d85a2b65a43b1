#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include <chebdde/errors.hpp>
#include <chebdde/newton.hpp>

#include "support/oracles.hpp"

namespace chebdde {
namespace {

using testing::sample;
using testing::single_panel;

/// |value - printed| within half a unit in the third significant digit or in
/// the last printed decimal place, whichever is looser.
bool matches_printed(double value, double printed, int decimals) {
    const double sig = 0.5 * std::pow(10.0, std::floor(std::log10(std::abs(printed))) - 2.0);
    const double last = 0.5 * std::pow(10.0, -decimals);
    return std::abs(value - printed) <= std::max(sig, last);
}

CollocationProblem initial_value_problem(std::size_t n, OpExpr eq, double y0) {
    CollocationProblem p{Collocation(single_panel(n, 0.0, 1.0)), {std::move(eq)}, 0, {}, {}};
    p.replaced.push_back({0, {unit_row(n, 0), y0, "initial value"}});
    return p;
}

CollocationProblem state_dependent_advance() {
    const OpExpr y = unknown();
    return initial_value_problem(12, diff(y) + state_delay(y, y) -
                                         constant([](double t) { return std::cos(t) + std::sin(std::sin(t)); }),
                                 0.0);
}

CollocationProblem state_dependent_self() {
    const OpExpr y = unknown();
    return initial_value_problem(12, diff(y) + state_delay(y, y), 1.0);
}

/// y' + y + y(p t) = e^{-t/2}, y(0) = 1, with p fixed.
CollocationProblem scaled_pantograph(std::size_t n, double p) {
    const OpExpr y = unknown();
    return initial_value_problem(
        n, diff(y) + y + delay(y, [p](double t) { return p * t; }) - constant([](double t) { return std::exp(-0.5 * t); }),
        1.0);
}

void expect_quadratic_tail(const NewtonReport& r) {
    for (std::size_t k = 0; k + 1 < r.iterations.size(); ++k) {
        const double now = r.iterations[k].residual_norm;
        const double next = r.iterations[k + 1].residual_norm;
        if (next < 1e-13) break;
        EXPECT_LE(next, 10.0 * now * now) << "k=" << k;
    }
}

TEST(Newton, StateDependentDelayResidualTable) {
    const CollocationProblem p = state_dependent_advance();
    const NewtonResult r = newton(p, sample(p.colloc.nodes(), [](double t) { return t; }));
    ASSERT_TRUE(r.report.converged);
    ASSERT_GE(r.report.iterations.size(), 4u);
    const double residuals[] = {0.71407355247, 0.05480002458, 0.00016794991, 0.00000000051};
    const double updates[] = {0.26232516612, 0.01314905164, 0.00002292528, 0.00000000004};
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_TRUE(matches_printed(r.report.iterations[k].residual_norm, residuals[k], 11))
            << k << ": " << r.report.iterations[k].residual_norm;
        EXPECT_TRUE(matches_printed(r.report.iterations[k].update_norm_2, updates[k], 11))
            << k << ": " << r.report.iterations[k].update_norm_2;
    }
    expect_quadratic_tail(r.report);
    double err = 0.0;
    for (std::size_t i = 0; i < 12; ++i) err = std::max(err, std::abs(r.x[i] - std::sin(p.colloc.nodes()[i])));
    EXPECT_LE(err, 1e-10);
}

TEST(Newton, AdvancedStateDependentResidualTable) {
    const CollocationProblem p = state_dependent_self();
    const NewtonResult r = newton(p, std::vector<double>(12, 1.0));
    ASSERT_TRUE(r.report.converged);
    ASSERT_GE(r.report.iterations.size(), 5u);
    const double residuals[] = {1.0, 0.25, 0.00686128071, 0.00000843021, 0.00000000002};
    const double updates[] = {1.075290658380, 0.159726357356, 0.002791677486, 0.000005995919, 0.000000000006};
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_TRUE(matches_printed(r.report.iterations[k].residual_norm, residuals[k], 11))
            << k << ": " << r.report.iterations[k].residual_norm;
        EXPECT_TRUE(matches_printed(r.report.iterations[k].update_norm_2, updates[k], 12))
            << k << ": " << r.report.iterations[k].update_norm_2;
    }
    expect_quadratic_tail(r.report);
}

TEST(Newton, NormsAreConsistent) {
    const CollocationProblem p = state_dependent_self();
    const NewtonResult r = newton(p, std::vector<double>(12, 1.0));
    for (const auto& step : r.report.iterations) {
        EXPECT_GE(step.residual_norm, 0.0);
        EXPECT_GE(step.update_norm, 0.0);
        EXPECT_GE(step.update_norm_2 * (1.0 + 1e-12), step.update_norm);
    }
    EXPECT_LE(r.report.final_residual_norm, 1e-10);
    EXPECT_GT(r.report.final_jacobian_cond, 1.0);
}

TEST(Newton, AffineProblemConvergesInOneStep) {
    const CollocationProblem p = scaled_pantograph(16, 0.5);
    const NewtonResult direct = solve_linear(p);
    const NewtonResult r = newton(p, testing::random_vector(16));
    ASSERT_TRUE(r.report.converged);
    EXPECT_EQ(r.report.iterations.size(), 1u);
    EXPECT_LE(testing::max_abs_diff(r.x, direct.x), 1e-13);
    EXPECT_LE(testing::max_abs_diff(direct.x, sample(p.colloc.nodes(), [](double t) { return std::exp(-t); })), 1e-13);
}

TEST(Newton, IterationLimitIsReportedNotThrown) {
    const CollocationProblem p = state_dependent_advance();
    NewtonOptions opts;
    opts.max_iter = 2;
    const NewtonResult r = newton(p, sample(p.colloc.nodes(), [](double t) { return t; }), opts);
    EXPECT_FALSE(r.report.converged);
    EXPECT_EQ(r.report.iterations.size(), 2u);
}

TEST(Newton, CallbackSeesEveryIterate) {
    const CollocationProblem p = state_dependent_self();
    std::size_t calls = 0;
    NewtonOptions opts;
    opts.on_iterate = [&](std::span<const double> x) {
        EXPECT_EQ(x.size(), 12u);
        ++calls;
    };
    const NewtonResult r = newton(p, std::vector<double>(12, 1.0), opts);
    EXPECT_EQ(calls, r.report.iterations.size());
}

TEST(Newton, SingularJacobianThrows) {
    CollocationProblem p{Collocation(single_panel(8, 0.0, 1.0)), {diff(unknown())}, 0, {}, {}};
    const auto x0 = sample(p.colloc.nodes(), [](double t) { return t * t; });
    EXPECT_THROW((void)newton(p, x0), SingularMatrixError);
}

TEST(Newton, AppendedRowsMustMatchParameters) {
    CollocationProblem p = scaled_pantograph(8, 0.5);
    p.n_params = 1;
    EXPECT_THROW((void)newton(p, std::vector<double>(9, 0.0)), std::invalid_argument);
}

TEST(Newton, UnknownDelayParameterAgreesWithBisection) {
    const std::size_t n = 14;
    const OpExpr y = unknown();
    const DelayMap scaled([](double t, std::span<const double> p) { return p[0] * t; },
                          [](double t, std::span<const double>, std::size_t) { return t; });
    CollocationProblem p = initial_value_problem(
        n, diff(y) + y + delay(y, scaled) - constant([](double t) { return std::exp(-0.5 * t); }), 1.0);
    p.n_params = 1;
    p.replaced[0].second.coeffs.push_back(0.0);
    p.appended.push_back({point_row(p, 0, 1.0), 0.25, "right boundary value"});
    auto x0 = sample(p.colloc.nodes(), [](double t) { return 1.0 - 0.75 * t; });
    x0.push_back(0.5);
    const NewtonResult r = newton(p, x0);
    ASSERT_TRUE(r.report.converged);
    const double p_newton = r.x[n];

    EXPECT_LE(norm_inf(residual(p, r.x)), 1e-10);
    EXPECT_NEAR(r.x[0], 1.0, 1e-10);
    EXPECT_NEAR(r.x[n - 1], 0.25, 1e-10);

    const auto mismatch = [&](double q) { return solve_linear(scaled_pantograph(n, q)).x[n - 1] - 0.25; };
    double lo = 0.0;
    double hi = 1.0;
    const double flo = mismatch(lo);
    ASSERT_LT(flo * mismatch(hi), 0.0);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((mismatch(mid) < 0.0) == (flo < 0.0) ? lo : hi) = mid;
    }
    EXPECT_NEAR(p_newton, 0.5 * (lo + hi), 1e-10);
}

TEST(Rows, PointAndDerivativeRows) {
    const CollocationProblem p = scaled_pantograph(10, 0.5);
    const auto x = sample(p.colloc.nodes(), [](double t) { return t * t * t; });
    const auto pr = point_row(p, 0, 0.3);
    double v = 0.0;
    for (std::size_t i = 0; i < 10; ++i) v += pr[i] * x[i];
    EXPECT_NEAR(v, 0.027, 1e-14);
    const auto dr = derivative_row(p, 0, 9, 1);
    double d = 0.0;
    for (std::size_t i = 0; i < 10; ++i) d += dr[i] * x[i];
    EXPECT_NEAR(d, 3.0, 1e-12);
}

TEST(Rows, EmbedRowPlacesComponent) {
    CollocationProblem p{Collocation(single_panel(4, 0.0, 1.0)), {unknown(0), unknown(1)}, 1, {}, {}};
    const std::vector<double> row = {1.0, 2.0, 3.0, 4.0};
    const auto full = embed_row(row, 1, p);
    EXPECT_EQ(full, (std::vector<double>{0, 0, 0, 0, 1, 2, 3, 4, 0}));
}

TEST(Rows, ContinuityConstraintsUseStandardLayout) {
    const double breaks[] = {0.0, 0.5, 1.0};
    const std::size_t sizes[] = {6, 7};
    CollocationProblem p{Collocation(build_piecewise_grid(breaks, sizes)), {unknown()}, 0, {}, {}};
    const auto c = continuity_constraints(p, 0, 1);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].first, 6u);
    EXPECT_EQ(c[0].second.coeffs[5], -1.0);
    EXPECT_EQ(c[0].second.coeffs[6], 1.0);
}

}  // namespace
}  // namespace chebdde
