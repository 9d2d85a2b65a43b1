#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include <chebdde/interp.hpp>

#include "support/oracles.hpp"

namespace chebdde {
namespace {

using testing::max_abs_diff;
using testing::random_vector;
using testing::sample;

double poly(double t) { return 1.0 - 2.0 * t + 0.5 * t * t * t - 0.25 * std::pow(t, 7); }
double dpoly(double t) { return -2.0 + 1.5 * t * t - 1.75 * std::pow(t, 6); }

TEST(ChebGrid, LobattoNodesAscendingWithEndpoints) {
    const Grid g = cheb_grid(5, -1.0, 1.0);
    const std::vector<double> expected = {-1.0, -std::sqrt(0.5), 0.0, std::sqrt(0.5), 1.0};
    ASSERT_EQ(g.size(), 5u);
    EXPECT_LE(max_abs_diff(g.nodes(), expected), 1e-15);
    EXPECT_EQ(g.kind(), GridKind::chebyshev_lobatto);
}

TEST(ChebGrid, MapsToInterval) {
    const Grid g = cheb_grid(9, 2.0, 5.0);
    EXPECT_DOUBLE_EQ(g.nodes().front(), 2.0);
    EXPECT_DOUBLE_EQ(g.nodes().back(), 5.0);
    EXPECT_DOUBLE_EQ(g.length(), 3.0);
}

TEST(ChebGrid, WeightsHalvedAtEndsAndAlternating) {
    const Grid g = cheb_grid(6, 0.0, 1.0);
    const auto w = g.bary_weights();
    EXPECT_DOUBLE_EQ(std::abs(w[0]), 0.5);
    EXPECT_DOUBLE_EQ(std::abs(w[5]), 0.5);
    for (std::size_t k = 1; k < 5; ++k) EXPECT_DOUBLE_EQ(std::abs(w[k]), 1.0);
    for (std::size_t k = 0; k + 1 < w.size(); ++k) EXPECT_LT(w[k] * w[k + 1], 0.0);
}

TEST(ChebGrid, RejectsBadArguments) {
    EXPECT_THROW((void)cheb_grid(1, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW((void)cheb_grid(4, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW((void)cheb_grid(4, 2.0, 1.0), std::invalid_argument);
}

TEST(TrigGrid, EquispacedHalfOpen) {
    const Grid g = trig_grid(8, 0.0, 2.0);
    ASSERT_EQ(g.size(), 8u);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(g.nodes()[k], 0.25 * static_cast<double>(k), 1e-15);
    EXPECT_EQ(g.kind(), GridKind::trig_uniform);
}

TEST(BaryEval, ExactAtNodes) {
    const Grid g = cheb_grid(11, 0.0, 1.0);
    const auto v = random_vector(11);
    const SampledFunction f(g, v);
    const std::vector<double> pts(g.nodes().begin(), g.nodes().end());
    const auto out = bary_eval(f, pts);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(out[i], v[i]);
}

TEST(BaryEval, PolynomialExactness) {
    for (std::size_t n : {8u, 12u, 20u, 40u}) {
        const Grid g = cheb_grid(n, -1.0, 2.0);
        const SampledFunction f(g, sample(g.nodes(), poly));
        const auto pts = random_vector(200, -1.0, 2.0);
        const auto out = bary_eval(f, pts);
        EXPECT_LE(max_abs_diff(out, sample(pts, poly)), 1e-12) << "n=" << n;
    }
}

TEST(BaryEval, ExponentialConvergesGeometrically) {
    const auto pts = random_vector(100, 0.0, 1.0);
    double previous = 1.0;
    for (std::size_t n : {4u, 8u, 12u}) {
        const Grid g = cheb_grid(n, 0.0, 1.0);
        const SampledFunction f(g, sample(g.nodes(), [](double t) { return std::exp(-t); }));
        const double err = max_abs_diff(bary_eval(f, pts), sample(pts, [](double t) { return std::exp(-t); }));
        EXPECT_LT(err, 0.1 * previous);
        previous = err;
    }
    EXPECT_LT(previous, 1e-10);
}

TEST(BaryEval, TrigPolynomialExactnessEvenAndOdd) {
    const auto trig = [](double t) { return 0.3 + std::cos(t) - 0.5 * std::sin(3.0 * t) + 0.1 * std::cos(4.0 * t); };
    for (std::size_t n : {11u, 12u, 16u, 17u}) {
        const Grid g = trig_grid(n, 0.0, 2.0 * std::numbers::pi);
        const SampledFunction f(g, sample(g.nodes(), trig));
        const auto pts = random_vector(100, -3.0, 10.0);
        EXPECT_LE(max_abs_diff(bary_eval(f, pts), sample(pts, trig)), 1e-12) << "n=" << n;
    }
}

TEST(Barymat, PartitionOfUnity) {
    const auto pts = random_vector(50, 0.0, 3.0);
    for (const Grid& g : {cheb_grid(17, 0.0, 3.0), trig_grid(16, 0.0, 3.0), trig_grid(15, 0.0, 3.0)}) {
        const Matrix p = g.kind() == GridKind::trig_uniform ? trig_barymat(pts, g) : barymat(pts, g);
        for (std::size_t i = 0; i < p.rows(); ++i) {
            const auto row = p.row(i);
            EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-13);
        }
    }
}

TEST(Barymat, UnitRowsAtNodesAndMatchesBaryEval) {
    const Grid g = cheb_grid(9, 0.0, 1.0);
    const std::vector<double> pts = {g.nodes()[3], 0.123, 0.77};
    const Matrix p = barymat(pts, g);
    for (std::size_t j = 0; j < 9; ++j) EXPECT_EQ(p(0, j), j == 3 ? 1.0 : 0.0);
    const auto v = random_vector(9);
    const auto direct = bary_eval(SampledFunction(g, v), pts);
    EXPECT_LE(max_abs_diff(p * std::span<const double>(v), direct), 1e-14);
}

TEST(Diffmat, AnnihilatesConstants) {
    for (std::size_t n : {5u, 16u, 40u}) {
        const Matrix d = diffmat(cheb_grid(n, 0.0, 1.0));
        const std::vector<double> ones(n, 1.0);
        EXPECT_LE(norm_inf(d * std::span<const double>(ones)), 1e-12) << "n=" << n;
    }
}

TEST(Diffmat, DifferentiatesPolynomialsExactly) {
    const Grid g = cheb_grid(12, -1.0, 2.0);
    const auto v = sample(g.nodes(), poly);
    const Matrix d = diffmat(g);
    EXPECT_LE(max_abs_diff(d * std::span<const double>(v), sample(g.nodes(), dpoly)), 1e-10);
}

TEST(Diffmat, HigherOrderIsPower) {
    const Grid g = cheb_grid(10, 0.0, 1.0);
    const Matrix d = diffmat(g);
    const Matrix d3 = diffmat(g, 3);
    const Matrix ddd = d * d * d;
    EXPECT_LE((d3 - ddd).max_abs(), 1e-9 * ddd.max_abs());
    EXPECT_EQ(diffmat(g, 0).max_abs(), 1.0);
}

TEST(Diffmat, ExponentialSpectralAccuracy) {
    const Grid g = cheb_grid(20, 0.0, 1.0);
    const auto v = sample(g.nodes(), [](double t) { return std::exp(-t); });
    const Matrix d = diffmat(g);
    const auto dv = d * std::span<const double>(v);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(dv[i], -v[i], 1e-12);
}

TEST(Cumsummat, IntegratesPolynomials) {
    const Grid g = cheb_grid(12, -1.0, 2.0);
    const Matrix q = cumsummat(g);
    const auto dv = sample(g.nodes(), dpoly);
    const auto iv = q * std::span<const double>(dv);
    for (std::size_t i = 0; i < iv.size(); ++i) EXPECT_NEAR(iv[i], poly(g.nodes()[i]) - poly(-1.0), 1e-12);
}

TEST(Cumsummat, ComposedWithDiffmatGivesIdentityUpToConstant) {
    for (std::size_t n : {6u, 14u, 30u}) {
        const Grid g = cheb_grid(n, 0.5, 1.5);
        const Matrix qd = cumsummat(g) * diffmat(g);
        const auto y = random_vector(n);
        const auto out = qd * std::span<const double>(y);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(out[i], y[i] - y[0], 1e-11) << "n=" << n;
        const auto low = sample(g.nodes(), [](double t) { return 2.0 - t + 0.5 * t * t; });
        const auto back = diffmat(g) * std::span<const double>(cumsummat(g) * std::span<const double>(low));
        EXPECT_LE(max_abs_diff(back, low), 1e-11) << "n=" << n;
    }
}

TEST(TrigDiffmat, DifferentiatesTrigPolynomials) {
    for (std::size_t n : {16u, 17u}) {
        const Grid g = trig_grid(n, 0.0, 2.0 * std::numbers::pi);
        const auto v = sample(g.nodes(), [](double t) { return std::sin(2.0 * t) + std::cos(t); });
        const auto d1 = trig_diffmat(g) * std::span<const double>(v);
        const auto d2 = trig_diffmat(g, 2) * std::span<const double>(v);
        EXPECT_LE(max_abs_diff(d1, sample(g.nodes(), [](double t) { return 2.0 * std::cos(2.0 * t) - std::sin(t); })),
                  1e-12);
        EXPECT_LE(max_abs_diff(d2, sample(g.nodes(), [](double t) { return -4.0 * std::sin(2.0 * t) - std::cos(t); })),
                  1e-11);
    }
}

TEST(TrigDiffmat, ScalesWithPeriod) {
    const Grid g = trig_grid(12, 0.0, 3.0);
    const double w = 2.0 * std::numbers::pi / 3.0;
    const auto v = sample(g.nodes(), [w](double t) { return std::sin(w * t); });
    const auto d1 = trig_diffmat(g) * std::span<const double>(v);
    EXPECT_LE(max_abs_diff(d1, sample(g.nodes(), [w](double t) { return w * std::cos(w * t); })), 1e-12);
}

TEST(TrigBarymat, WrapsModuloPeriod) {
    const Grid g = trig_grid(10, 0.0, 1.0);
    const std::vector<double> a = {0.13, 0.71};
    const std::vector<double> b = {2.13, -0.29};
    EXPECT_LE((trig_barymat(a, g) - trig_barymat(b, g)).max_abs(), 1e-13);
}

TEST(WeightedResample, ReducesToBarymatWithoutWeight) {
    const Grid g = cheb_grid(10, 0.0, 1.0);
    const auto pts = random_vector(7, 0.0, 1.0);
    EXPECT_LE((weighted_resample(pts, g, 0.0) - barymat(pts, g)).max_abs(), 1e-15);
}

TEST(WeightedResample, ReproducesWeightedExponential) {
    const double b = 3.0;
    const Grid g = cheb_grid(16, 0.0, 2.0);
    const auto f = [b](double t) { return std::exp(-b * t / 2.0) * (1.0 + t * t); };
    const auto pts = random_vector(20, 0.0, 2.0);
    const auto out = weighted_resample(pts, g, b) * std::span<const double>(sample(g.nodes(), f));
    EXPECT_LE(max_abs_diff(out, sample(pts, f)), 1e-13);
}

TEST(ChebyshevCoefficients, RecoversChebyshevPolynomial) {
    const Grid g = cheb_grid(8, -1.0, 1.0);
    const auto c = chebyshev_coefficients(sample(g.nodes(), [](double t) { return 4.0 * t * t * t - 3.0 * t; }));
    ASSERT_EQ(c.size(), 8u);
    for (std::size_t k = 0; k < c.size(); ++k) EXPECT_NEAR(c[k], k == 3 ? 1.0 : 0.0, 1e-14);
}

TEST(TrigCoefficients, SingleWavenumber) {
    const Grid g = trig_grid(16, 0.0, 1.0);
    const auto m = trig_coefficient_magnitudes(
        sample(g.nodes(), [](double t) { return 2.0 + std::cos(2.0 * std::numbers::pi * 3.0 * t); }));
    ASSERT_EQ(m.size(), 9u);
    EXPECT_GT(m[0], 0.0);
    EXPECT_GT(m[3], 0.0);
    for (std::size_t k : {1u, 2u, 4u, 5u, 8u}) EXPECT_LE(m[k], 1e-14 * m[3]);
}

}  // namespace
}  // namespace chebdde
