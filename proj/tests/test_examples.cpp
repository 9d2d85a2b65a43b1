#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <chebdde_examples/examples.hpp>

#include "support/oracles.hpp"

namespace chebdde {
namespace {

using examples::Category;
using examples::ExampleOutcome;
using examples::ExampleSettings;
using examples::find_example;
using examples::registry;

ExampleOutcome run(const std::string& name, ExampleSettings s = {}) {
    const auto* spec = find_example(name);
    if (!spec) throw std::invalid_argument("unregistered " + name);
    return spec->run(s);
}

ExampleSettings with_n(std::size_t n) {
    ExampleSettings s;
    s.n = n;
    return s;
}

double error_against(const ExampleOutcome& o, const std::function<double(double)>& exact) {
    double err = 0.0;
    for (std::size_t i = 0; i < o.t.size(); ++i) err = std::max(err, std::abs(o.y[0][i] - exact(o.t[i])));
    return err;
}

TEST(Registry, NamesUniqueAndLookup) {
    std::set<std::string> names;
    for (const auto& spec : registry()) {
        EXPECT_TRUE(names.insert(spec.name).second) << spec.name;
        EXPECT_EQ(find_example(spec.name), &spec);
        EXPECT_GE(spec.default_n, spec.min_n);
    }
    EXPECT_EQ(find_example("nosuch"), nullptr);
    for (const char* required : {"example1", "example2", "example3", "example3_single_domain", "example4", "example5",
                                 "example6", "example7", "example8", "example9", "chebfun_ex1", "chebfun_ex2",
                                 "chebfun_ex3", "chebfun_ex4", "chebfun_ex5", "periodic_linear", "lotka_volterra",
                                 "logistic_cycle", "schroeder"})
        EXPECT_TRUE(names.count(required)) << required;
}

TEST(Registry, ExactSolutionsOnlyWhereKnown) {
    EXPECT_TRUE(static_cast<bool>(find_example("example1")->exact));
    EXPECT_TRUE(static_cast<bool>(find_example("example8")->exact));
    EXPECT_FALSE(static_cast<bool>(find_example("example4")->exact));
    EXPECT_FALSE(static_cast<bool>(find_example("example7")->exact));
    EXPECT_FALSE(static_cast<bool>(find_example("lotka_volterra")->exact));
    EXPECT_EQ(find_example("chebfun_ex5")->category, Category::evp);
    EXPECT_EQ(find_example("logistic_cycle")->category, Category::periodic);
}

TEST(Registry, EveryExampleRunsQuicklyAtDefaultSize) {
    for (const auto& spec : registry()) {
        const auto t0 = std::chrono::steady_clock::now();
        const ExampleOutcome o = spec.run({});
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        EXPECT_LT(seconds, 10.0) << spec.name;
        EXPECT_GT(o.dof, 0u) << spec.name;
        EXPECT_EQ(o.t.size(), o.panel.size()) << spec.name;
        if (o.newton) {
            EXPECT_TRUE(o.newton->converged) << spec.name;
        }
        if (spec.exact) {
            ASSERT_TRUE(o.error.has_value()) << spec.name;
            EXPECT_NEAR(*o.error, error_against(o, spec.exact), 1e-15) << spec.name;
        }
    }
}

TEST(Examples, PantographAtTwelvePoints) {
    const ExampleOutcome o = run("example2", with_n(12));
    ASSERT_TRUE(o.error.has_value());
    EXPECT_LE(*o.error, 1e-8);
}

TEST(Examples, FirstOrderOdeConvergesGeometrically) {
    const auto rows = examples::converge(*find_example("example1"), 6, 24, 2);
    ASSERT_EQ(rows.size(), 10u);
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        EXPECT_LT(rows[k].n, rows[k + 1].n);
        if (rows[k].error < 1e-13) break;
        EXPECT_LE(rows[k + 1].error, 0.5 * rows[k].error) << rows[k].n;
    }
    EXPECT_LE(rows.back().error, 1e-13);
}

TEST(Examples, SingleDomainDiscreteDelayConvergesAlgebraically) {
    const auto rows = examples::converge(*find_example("example3_single_domain"), 10, 80, 10);
    ASSERT_EQ(rows.size(), 8u);
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) EXPECT_LT(rows[k + 1].error, rows[k].error) << rows[k + 1].n;
    const double slope = std::log(rows.back().error / rows.front().error) /
                         std::log(static_cast<double>(rows.back().n) / static_cast<double>(rows.front().n));
    EXPECT_LT(slope, -0.5);
    EXPECT_GT(slope, -3.0);
    EXPECT_GT(rows.back().error, 1e-9);
    const ExampleOutcome forty = run("example3_single_domain", with_n(40));
    EXPECT_GT(*forty.error, 1e-6);
}

TEST(Examples, TwoDomainDiscreteDelay) {
    const ExampleOutcome o = run("example3", with_n(20));
    EXPECT_LE(*o.error, 1e-12);
    EXPECT_LE(error_against(o, testing::StepsOracle(1.0, 0.5, 2)), 1e-12);
    EXPECT_EQ(o.breakpoints, (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(Examples, StaggeredPanelsMatchMethodOfSteps) {
    const ExampleOutcome o = run("example4");
    EXPECT_EQ(o.breakpoints, (std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0}));
    EXPECT_EQ(o.dof, 10u + 11u + 12u + 13u);
    EXPECT_LE(error_against(o, testing::StepsOracle(1.0, 0.5, 4)), 1e-12);
    ExampleSettings s;
    s.sizes = {16, 16, 16, 16};
    EXPECT_LE(error_against(run("example4", s), testing::StepsOracle(1.0, 0.5, 4)), 1e-13);
}

TEST(Examples, PanelSizeListMustMatchPanels) {
    ExampleSettings s;
    s.sizes = {10, 10};
    EXPECT_THROW((void)run("example4", s), std::invalid_argument);
}

TEST(Examples, QuadraticDelayBreakpoints) {
    const ExampleOutcome o = run("example5");
    ASSERT_EQ(o.breakpoints.size(), 4u);
    EXPECT_NEAR(o.breakpoints[1], 0.5, 1e-12);
    EXPECT_NEAR(o.breakpoints[2], std::sqrt(3.0) / 2.0, 1e-12);
    const auto proxy = examples::converge(*find_example("example5"), 8, 24, 4);
    EXPECT_LE(proxy.back().error, 1e-10);
}

TEST(Examples, StateDependentSolutionIsSine) {
    const ExampleOutcome o = run("example6");
    ASSERT_TRUE(o.newton.has_value());
    EXPECT_EQ(o.newton->iterations.size(), 4u);
    EXPECT_LE(*o.error, 1e-10);
}

TEST(Examples, AdvancedArgumentFde) {
    EXPECT_LE(*run("example8", with_n(20)).error, 1e-12);
}

TEST(Examples, VolterraPantographSelfConverges) {
    const auto rows = examples::converge(*find_example("example7"), 6, 22, 4);
    EXPECT_LE(rows.back().error, 1e-12);
}

TEST(Examples, AdvancedStateDependentAliases) {
    const ExampleOutcome a = run("example9");
    const ExampleOutcome b = run("chebfun_ex3");
    EXPECT_EQ(a.y, b.y);
    EXPECT_EQ(a.newton->iterations.size(), 5u);
}

TEST(Examples, VolterraPantographOnLongInterval) {
    const ExampleOutcome o = run("chebfun_ex1", with_n(20));
    ASSERT_TRUE(o.relative_error.has_value());
    EXPECT_LE(*o.relative_error, 1e-12);
    EXPECT_DOUBLE_EQ(o.t.back(), 20.0);
}

TEST(Examples, NeutralBothBranches) {
    const ExampleOutcome s2 = run("chebfun_ex2");
    EXPECT_LE(*s2.error, 1e-10);
    const ExampleOutcome w = run("chebfun_ex2_lambert");
    ASSERT_TRUE(w.newton.has_value());
    EXPECT_TRUE(w.newton->converged);
    EXPECT_GT(w.cond, 0.0);
    EXPECT_LE(w.extras.at("residual"), 1e-8);
    EXPECT_NEAR(w.extras.at("initial_slope"), 0.4063757399599599, 1e-12);
}

TEST(Examples, UnknownDelayScale) {
    const ExampleOutcome o = run("chebfun_ex4");
    ASSERT_TRUE(o.extras.count("p"));
    EXPECT_NEAR(o.y[0].back(), 0.25, 1e-10);
    EXPECT_NEAR(o.y[0].front(), 1.0, 1e-10);
    EXPECT_GT(o.extras.at("p"), 0.0);
    EXPECT_LT(o.extras.at("p"), 1.0);
}

TEST(Examples, DelayEigenvalues) {
    const ExampleOutcome o = run("chebfun_ex5");
    const auto oracle = testing::pantograph_eigenvalues(5);
    ASSERT_GE(o.eigenvalues.size(), 5u);
    for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(o.eigenvalues[k].real(), oracle[k], testing::pantograph_tolerance(k) * oracle[k]);
    EXPECT_LE(o.extras.at("max_residual"), 1e-8);
}

TEST(Examples, PeriodicLinearTrailingCoefficient) {
    const ExampleOutcome o = run("periodic_linear");
    EXPECT_LE(o.extras.at("trailing_coefficient"), 1e-10);
    const auto rows = examples::converge(*find_example("periodic_linear"), 32, 64, 32);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_LE(rows[0].error, 1e-10);
}

TEST(Examples, SchroederAgainstComposition) {
    const ExampleOutcome o = run("schroeder");
    std::vector<double> pts;
    for (int i = 0; i <= 100; ++i) pts.push_back(0.02 * i);
    const auto u = o.interpolant(pts);
    const auto f = [](double t) { return 0.5 * std::sin(t); };
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_NEAR(u[i], testing::koenigs_composition(f, 0.5, pts[i]), 1e-10);
}

TEST(Examples, KoenigsOracleMatchesIndependentComposition) {
    for (double t : {0.1, 1.0, 2.0})
        EXPECT_DOUBLE_EQ(examples::koenigs_oracle(t, 0.5),
                         testing::koenigs_composition([](double x) { return 0.5 * std::sin(x); }, 0.5, t));
}

TEST(Examples, LotkaVolterraCycle) {
    const ExampleOutcome o = run("lotka_volterra");
    ASSERT_TRUE(o.period.has_value());
    EXPECT_NEAR(*o.period, 30.83847284, 1e-4);
    EXPECT_LE(o.extras.at("residual_fine_grid"), 1e-10);
    EXPECT_LE(o.extras.at("trailing_coefficient"), 1e-9);
    ExampleSettings refined = with_n(145);
    EXPECT_LE(std::abs(*run("lotka_volterra", refined).period - *o.period), 1e-8 * *o.period);
}

TEST(Examples, LogisticCycleProxyConvergence) {
    const auto trig = examples::converge(*find_example("logistic_cycle"), 25, 40, 15);
    ASSERT_EQ(trig.size(), 1u);
    EXPECT_LE(trig[0].error, 5e-9);
    const auto cheb = examples::converge(*find_example("logistic_cycle_cheb"), 50, 70, 20);
    ASSERT_EQ(cheb.size(), 1u);
    EXPECT_LE(cheb[0].error, 5e-9);
}

TEST(Examples, ConvergeProxyDropsLastRow) {
    const auto rows = examples::converge(*find_example("example9"), 8, 20, 4);
    EXPECT_EQ(rows.size(), 3u);
    for (const auto& r : rows) EXPECT_GT(r.error, 0.0);
}

TEST(Examples, DeterministicOutcome) {
    const ExampleOutcome a = run("example6");
    const ExampleOutcome b = run("example6");
    EXPECT_EQ(a.y, b.y);
    EXPECT_EQ(a.newton->iterations.size(), b.newton->iterations.size());
}

}  // namespace
}  // namespace chebdde
