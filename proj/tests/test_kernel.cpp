#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "stableheat/errors.hpp"
#include "stableheat/kernel.hpp"

using namespace stableheat;
using namespace stableheat::kernel;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracles: long raw sums, no truncation logic.
double oracle_spectral(double L, double t, double x, double y, int N = 400) {
    double s = 0.0;
    for (int n = 1; n <= N; ++n)
        s += std::sin(n * kPi * x / L) * std::sin(n * kPi * y / L) * std::exp(-n * n * kPi * kPi * t / (2 * L * L));
    return 2.0 / L * s;
}

double oracle_image(double L, double t, double x, double y, int M = 30) {
    double s = 0.0;
    for (int k = -M; k <= M; ++k)
        s += std::exp(-std::pow(y - x + 2 * k * L, 2) / (2 * t)) - std::exp(-std::pow(y + x + 2 * k * L, 2) / (2 * t));
    return s / std::sqrt(2 * kPi * t);
}

}  // namespace

// ============================================================================
// Pointwise values
// ============================================================================

TEST(KernelEval, ReferenceValue) {
    const KernelEvaluator ke(1.0);
    EXPECT_NEAR(oracle_spectral(1.0, 0.1, 0.5, 0.5), oracle_image(1.0, 0.1, 0.5, 0.5), 1e-13);
    EXPECT_NEAR(oracle_spectral(1.0, 0.1, 0.5, 0.5), 1.24457, 1e-5);
    for (Method m : {Method::image_sum, Method::spectral, Method::automatic})
        EXPECT_NEAR(ke.eval(m, 0.1, 0.5, 0.5), oracle_spectral(1.0, 0.1, 0.5, 0.5), 1e-10);
}

TEST(KernelEval, DirichletBoundary) {
    const KernelEvaluator ke(2.0);
    for (double t : {1e-3, 0.1, 1.0, 10.0})
        for (double y : {0.0, 0.3, 1.0, 2.0}) {
            EXPECT_EQ(ke.eval(t, 0.0, y), 0.0);
            EXPECT_EQ(ke.eval(t, 2.0, y), 0.0);
            EXPECT_EQ(ke.eval(t, y, 0.0), 0.0);
        }
}

TEST(KernelEval, Errors) {
    const KernelEvaluator ke(1.0);
    EXPECT_THROW(ke.eval(0.0, 0.5, 0.5), DeltaSingularityError);
    EXPECT_THROW(ke.eval(-1.0, 0.5, 0.5), ParameterError);
    EXPECT_THROW(ke.eval(0.1, 1.5, 0.5), ParameterError);
    EXPECT_THROW(ke.eval(Method::spectral, 1e-6, 0.5, 0.5), AccuracyError);
    const KernelEvaluator narrow(1.0, Method::image_sum, 1, 128, 1e-10);
    EXPECT_THROW(narrow.eval(2.0, 0.5, 0.5), AccuracyError);
    EXPECT_THROW(KernelEvaluator(1.0, Method::automatic, 0), ParameterError);
    EXPECT_THROW(KernelEvaluator(1.0, Method::automatic, 8, 128, 0.0), ParameterError);
}

TEST(KernelEval, ValidityRangeIsCertified) {
    const KernelEvaluator ke(1.0);
    EXPECT_LE(ke.truncation_bound(Method::spectral, ke.t_min(Method::spectral)), ke.abs_tol());
    EXPECT_GT(ke.truncation_bound(Method::spectral, 0.99 * ke.t_min(Method::spectral)), ke.abs_tol());
    EXPECT_LE(ke.truncation_bound(Method::image_sum, ke.t_max(Method::image_sum)), ke.abs_tol());
    // Both representations cover the crossover, and spectral covers the sweep range.
    EXPECT_LT(ke.t_min(Method::spectral), 1e-3);
    EXPECT_GT(ke.t_max(Method::image_sum), 1.0);
    EXPECT_EQ(ke.resolve(0.01), Method::image_sum);
    EXPECT_EQ(ke.resolve(1.0), Method::spectral);
}

TEST(KernelEval, CrossAgreementSweep) {
    const double L = 1.3;
    const KernelEvaluator ke(L);
    std::mt19937_64 eng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = L * L * std::pow(10.0, -3.0 * u(eng));
        const double x = L * u(eng), y = L * u(eng);
        const double a = ke.eval(Method::image_sum, t, x, y);
        const double b = ke.eval(Method::spectral, t, x, y);
        ASSERT_LE(std::abs(a - b), 2 * ke.abs_tol()) << "t=" << t << " x=" << x << " y=" << y;
        ASSERT_GE(a, -ke.abs_tol());
        ASSERT_GE(b, -ke.abs_tol());
        ASSERT_NEAR(a, oracle_image(L, t, x, y), ke.abs_tol());
    }
}

TEST(KernelEval, Symmetry) {
    const KernelEvaluator ke(1.0);
    std::mt19937_64 eng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double t = std::pow(10.0, -3.0 * u(eng));
        const double x = u(eng), y = u(eng);
        EXPECT_EQ(ke.eval(Method::spectral, t, x, y), ke.eval(Method::spectral, t, y, x));
        EXPECT_NEAR(ke.eval(Method::image_sum, t, x, y), ke.eval(Method::image_sum, t, y, x), ke.abs_tol());
    }
}

// ============================================================================
// Convolution, semigroup, Lp bounds
// ============================================================================

TEST(KernelConvolve, Eigenfunction) {
    const KernelEvaluator ke(1.0);
    for (double t : {0.001, 0.05, 0.5, 2.0}) {
        auto c = convolve(ke, t, [](double y) { return std::sin(kPi * y); }, 400);
        for (double x : {0.1, 0.37, 0.5, 0.93})
            EXPECT_NEAR(c(x), std::exp(-kPi * kPi * t / 2) * std::sin(kPi * x), 1e-10) << t;
    }
}

TEST(KernelConvolve, MassBoundAndIdentity) {
    const KernelEvaluator ke(1.0);
    for (double t : {0.001, 0.01, 0.1, 1.0}) {
        auto c = convolve(ke, t, [](double) { return 1.0; }, 1000);
        for (int i = 0; i <= 20; ++i) {
            const double v = c(i / 20.0);
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0 + ke.abs_tol());
        }
    }
    auto id = convolve(ke, 0.0, [](double y) { return y * y; }, 2);
    EXPECT_EQ(id(0.3), 0.3 * 0.3);
    EXPECT_THROW(convolve(ke, 1e-6, [](double) { return 1.0; }, 10), QuadratureError);
    EXPECT_THROW(convolve(ke, 0.1, [](double) { return 1.0; }, 1), ParameterError);
}

TEST(KernelSemigroup, Residuals) {
    const KernelEvaluator ke(1.0);
    EXPECT_LT(check_semigroup(ke, 0.05, 0.05, 0.5, 0.5, 400), 1e-8);
    EXPECT_LT(check_semigroup(ke, 0.05, 0.05, 0.0, 0.5, 400), ke.abs_tol());
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double s = std::pow(10.0, -2.0 * u(eng)), t = std::pow(10.0, -2.0 * u(eng));
        ASSERT_LT(check_semigroup(ke, s, t, u(eng), u(eng), 1000), 10 * ke.abs_tol()) << s << " " << t;
    }
}

TEST(KernelLp, Bounds) {
    const KernelEvaluator ke(1.0);
    for (double t : {0.001, 0.01, 0.1, 1.0})
        EXPECT_LE(lp_norm_bound_check(ke, t, 0.5, 1.0, 2000).value, 1.0 + ke.abs_tol());
    // Far from the walls the whole-line scaling sqrt(2) holds; near them images
    // lower the value at 2t more than at t, so the ratio exceeds sqrt(2).
    for (double t : {0.0005, 0.001, 0.002}) {
        const double v = lp_norm_bound_check(ke, t, 0.5, 2.0, 4000).value;
        const double w = lp_norm_bound_check(ke, t / 2, 0.5, 2.0, 4000).value;
        EXPECT_LE(w / v, std::sqrt(2.0) * (1.0 + 1e-9)) << t;
    }
    EXPECT_GT(lp_norm_bound_check(ke, 0.01, 0.5, 2.0, 4000).value /
                  lp_norm_bound_check(ke, 0.02, 0.5, 2.0, 4000).value,
              std::sqrt(2.0) * (1.0 + 1e-6));
    // Domination by the whole-line Gaussian: integral of G_t^2 <= (4 pi t)^(-1/2).
    for (double t : {0.001, 0.01, 0.1, 1.0})
        for (double x : {0.05, 0.3, 0.5})
            EXPECT_LE(lp_norm_bound_check(ke, t, x, 2.0, 4000).value, 1.0 / std::sqrt(4 * kPi * t));
    EXPECT_LT(lp_norm_bound_check(ke, 5.0, 0.5, 2.0, 200).value, 1e-9);
    const std::vector<double> ts{0.001, 0.01, 0.1, 1.0};
    const double C = fit_lp_constant(ke, ts, 0.5, 1.5, 4000);
    for (double t : ts)
        EXPECT_LE(lp_norm_bound_check(ke, t, 0.5, 1.5, 4000).value, C * std::pow(t, -0.25) * (1 + 1e-15));
    EXPECT_THROW(lp_norm_bound_check(ke, 0.1, 0.5, 0.5, 100), ParameterError);
}

TEST(KernelMatrix, OrderPreservingAndResolved) {
    const KernelEvaluator ke(1.0);
    const auto P = convolution_matrix(ke, 1.0 / 256, 128);
    ASSERT_EQ(P.size(), 127u * 127u);
    for (double v : P) EXPECT_GE(v, 0.0);
    // Row sums are masses, so at most one.
    for (int i = 0; i < 127; ++i) {
        double s = 0.0;
        for (int j = 0; j < 127; ++j) s += P[i * 127 + j];
        EXPECT_LE(s, 1.0 + 1e-10);
    }
    EXPECT_THROW(convolution_matrix(ke, 1e-6, 16), QuadratureError);
}

TEST(KernelDump, Csv) {
    const KernelEvaluator ke(1.0);
    std::ostringstream os;
    write_kernel_dump(os, ke, {{0.1, 0.5, 0.5}, {1.0, 0.2, 0.4}});
    const std::string s = os.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "t,x,y,value,method");
    EXPECT_NE(s.find("image_sum"), std::string::npos);
    EXPECT_NE(s.find("spectral"), std::string::npos);
}
