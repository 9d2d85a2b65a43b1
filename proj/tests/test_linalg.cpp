#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <chebdde/errors.hpp>
#include <chebdde/interp.hpp>
#include <chebdde/linalg.hpp>

#include "support/oracles.hpp"

namespace chebdde {
namespace {

using testing::random_vector;

Matrix random_matrix(std::size_t n, double diagonal_boost = 0.0) {
    Matrix a(n, n);
    const auto v = random_vector(n * n);
    std::copy(v.begin(), v.end(), a.data().begin());
    for (std::size_t i = 0; i < n; ++i) a(i, i) += diagonal_boost;
    return a;
}

Eigen::MatrixXd to_eigen(const Matrix& a) {
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}

/// Sorted by real part then imaginary part for set comparison.
std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> v) {
    std::sort(v.begin(), v.end(), [](auto a, auto b) {
        if (std::abs(a.real() - b.real()) > 1e-9 * std::max(1.0, std::abs(a.real()))) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

TEST(LuSolve, Identity) {
    const std::vector<double> b = {1.0, -2.0, 3.5};
    EXPECT_EQ(lu_solve(Matrix::identity(3), b), b);
}

TEST(LuSolve, Diagonal) {
    const Matrix a{{2.0, 0.0}, {0.0, 4.0}};
    const std::vector<double> b = {2.0, 8.0};
    const auto x = lu_solve(a, b);
    EXPECT_DOUBLE_EQ(x[0], 1.0);
    EXPECT_DOUBLE_EQ(x[1], 2.0);
}

TEST(LuSolve, NeedsPivoting) {
    const Matrix a{{0.0, 1.0}, {1.0, 0.0}};
    const std::vector<double> b = {3.0, 4.0};
    EXPECT_EQ(lu_solve(a, b), (std::vector<double>{4.0, 3.0}));
}

TEST(LuSolve, RandomWellConditionedRecoversKnownSolution) {
    const Matrix a = random_matrix(50, 10.0);
    const auto x = random_vector(50);
    const auto b = a * std::span<const double>(x);
    const auto got = lu_solve(a, b);
    EXPECT_LE(testing::max_abs_diff(got, x) / norm_inf(x), 1e-11);
}

TEST(LuSolve, BackwardErrorBound) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t n : {10u, 100u, 400u}) {
        const Matrix a = random_matrix(n);
        const auto b = random_vector(n);
        const auto x = lu_solve(a, b);
        const auto ax = a * std::span<const double>(x);
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(ax[i] - b[i]));
        EXPECT_LE(r, 100.0 * eps * a.norm_inf() * norm_inf(x)) << "n=" << n;
    }
}

TEST(LuSolve, AgreesWithEigen) {
    const Matrix a = random_matrix(40);
    const auto b = random_vector(40);
    const auto x = lu_solve(a, b);
    const Eigen::VectorXd ref = to_eigen(a).partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), 40));
    for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(x[i], ref(i), 1e-10 * (1.0 + std::abs(ref(i))));
}

TEST(LuSolve, ExactlySingularThrows) {
    const Matrix a{{1.0, 2.0}, {2.0, 4.0}};
    EXPECT_THROW((void)lu_solve(a, std::vector<double>{1.0, 1.0}), SingularMatrixError);
    EXPECT_THROW((void)lu_solve(Matrix(3, 3, 0.0), std::vector<double>(3, 1.0)), SingularMatrixError);
}

TEST(LuFactorization, MatrixSolveAndInverse) {
    const Matrix a = random_matrix(12, 3.0);
    const LuFactorization lu(a);
    EXPECT_LE((a * lu.inverse() - Matrix::identity(12)).max_abs(), 1e-13);
    const Matrix b = random_matrix(12);
    EXPECT_LE((a * lu.solve(b) - b).max_abs(), 1e-13);
    EXPECT_GT(lu.pivot_ratio(), 0.0);
    EXPECT_LE(lu.pivot_ratio(), 1.0);
}

TEST(CondInf, KnownValues) {
    EXPECT_DOUBLE_EQ(cond_inf(Matrix::identity(5)), 1.0);
    EXPECT_DOUBLE_EQ(cond_inf(Matrix{{1.0, 0.0}, {0.0, 10.0}}), 10.0);
}

TEST(CondInf, AgreesWithEigenInverse) {
    const Matrix a = random_matrix(20, 2.0);
    const Eigen::MatrixXd m = to_eigen(a);
    const double ref = m.cwiseAbs().rowwise().sum().maxCoeff() * m.inverse().cwiseAbs().rowwise().sum().maxCoeff();
    EXPECT_NEAR(cond_inf(a), ref, 1e-10 * ref);
}

TEST(CondInf, FirstOrderOdeMatrixGrowsModestly) {
    double previous = 0.0;
    for (std::size_t n = 12; n <= 24; n += 2) {
        Matrix a = diffmat(cheb_grid(n, 0.0, 1.0)) + Matrix::identity(n);
        for (std::size_t j = 0; j < n; ++j) a(0, j) = j == 0 ? 1.0 : 0.0;
        const double c = cond_inf(a);
        EXPECT_GT(c, previous) << n;
        EXPECT_LE(c, 1e5) << n;
        previous = c;
    }
}

TEST(Hessenberg, StructureAndSpectrumPreserved) {
    const Matrix a = random_matrix(15);
    Matrix h = a;
    hessenberg(h);
    for (std::size_t i = 2; i < 15; ++i)
        for (std::size_t j = 0; j + 1 < i; ++j) EXPECT_EQ(h(i, j), 0.0);
    const auto ev_a = sorted(eigenvalues(a));
    const auto ev_h = sorted(hessenberg_eigenvalues(h));
    ASSERT_EQ(ev_a.size(), ev_h.size());
    for (std::size_t i = 0; i < ev_a.size(); ++i) EXPECT_LE(std::abs(ev_a[i] - ev_h[i]), 1e-10);
}

TEST(Eigenvalues, AgreeWithEigenOnRandomMatrices) {
    for (std::size_t n : {5u, 30u, 80u}) {
        const Matrix a = random_matrix(n);
        const auto ours = sorted(eigenvalues(a));
        Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(a), false);
        std::vector<std::complex<double>> ref(es.eigenvalues().data(), es.eigenvalues().data() + n);
        ref = sorted(ref);
        ASSERT_EQ(ours.size(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(ours[i] - ref[i]), 1e-9) << "n=" << n << " i=" << i;
    }
}

TEST(Eigenvalues, RotationHasConjugatePair) {
    const auto ev = sorted(eigenvalues(Matrix{{0.0, -1.0}, {1.0, 0.0}}));
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_NEAR(ev[0].imag(), -1.0, 1e-14);
    EXPECT_NEAR(ev[1].imag(), 1.0, 1e-14);
    EXPECT_NEAR(ev[0].real(), 0.0, 1e-14);
}

TEST(Balance, PreservesSpectrum) {
    Matrix a{{1.0, 1e6, 0.0}, {1e-6, 2.0, 1e4}, {0.0, 1e-4, 3.0}};
    const auto before = sorted(eigenvalues(a));
    balance(a);
    const auto after = sorted(eigenvalues(a));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(std::abs(before[i] - after[i]), 1e-9);
}

}  // namespace
}  // namespace chebdde
