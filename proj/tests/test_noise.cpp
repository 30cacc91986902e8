#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "stableheat/errors.hpp"
#include "stableheat/noise.hpp"
#include "stableheat/rng.hpp"

using namespace stableheat;
using namespace stableheat::noise;

namespace {

const StableParams kSym{1.5, 0.5, 0.5};
const StableParams kPos{1.5, 1.0, 0.0};
const SpaceTimeDomain kUnit{1.0, 1.0};

TruncationSpec trunc(double eps, double K) {
    TruncationSpec t;
    t.small_cutoff = eps;
    t.big_cutoff = K;
    return t;
}

NoiseRealization explicit_noise(std::vector<JumpRecord> jumps, const StableParams& p = kSym,
                                const TruncationSpec& tr = trunc(0.01, 2.0)) {
    NoiseRealization r;
    r.params = p;
    r.truncation = tr;
    r.domain = kUnit;
    r.jumps = std::move(jumps);
    r.compensator_mu = compensator_drift(p, tr);
    return r;
}

}  // namespace

// ============================================================================
// Parameter validation
// ============================================================================

TEST(NoiseParams, RejectsOutOfDomain) {
    EXPECT_THROW((StableParams{1.0, 0.5, 0.5}.validate()), ParameterError);
    EXPECT_THROW((StableParams{2.0, 0.5, 0.5}.validate()), ParameterError);
    EXPECT_THROW((StableParams{1.5, 0.7, 0.7}.validate()), ParameterError);
    EXPECT_THROW((StableParams{1.5, -0.1, 1.1}.validate()), ParameterError);
    EXPECT_THROW(trunc(0.5, 0.5).validate(), ParameterError);
    EXPECT_THROW(trunc(0.0, 1.0).validate(), ParameterError);
    EXPECT_THROW((SpaceTimeDomain{0.0, 1.0}.validate()), ParameterError);
    EXPECT_THROW(sample_noise(kSym, trunc(1.0, 0.5), kUnit, 1), ParameterError);
}

// ============================================================================
// Closed forms
// ============================================================================

TEST(NoiseClosedForm, ExpectedJumpCount) {
    // (0.01^-1.5 - 1^-1.5) / 1.5 = 999 / 1.5
    EXPECT_NEAR(expected_jump_count(kSym, trunc(0.01, 1.0), kUnit), 666.0, 1e-9);
    EXPECT_NEAR(expected_jump_count(kSym, trunc(0.01, 1.0), {2.0, 3.0}), 6.0 * 666.0, 1e-8);
}

TEST(NoiseClosedForm, CompensatorDrift) {
    EXPECT_EQ(compensator_drift(kSym, trunc(0.01, 1.0)), 0.0);
    EXPECT_NEAR(compensator_drift(kPos, trunc(0.01, 1.0)), 18.0, 1e-12);
    EXPECT_NEAR(compensator_drift(kPos, trunc(1.0 - 1e-12, 1.0)), 0.0, 1e-10);
    // Negative tail flips the sign.
    EXPECT_NEAR(compensator_drift({1.5, 0.0, 1.0}, trunc(0.01, 1.0)), -18.0, 1e-12);
}

TEST(NoiseClosedForm, LevyMoment) {
    EXPECT_NEAR(levy_moment(kSym, 1.0, 2.0), 2.0, 1e-15);
    EXPECT_NEAR(levy_moment(kSym, 2.0, 2.0), 2.0 * std::sqrt(2.0), 1e-14);
    EXPECT_THROW(levy_moment(kSym, 1.0, 1.5), DivergenceError);
    EXPECT_THROW(levy_moment(kSym, 1.0, 1.2), DivergenceError);
    // Window form used for the sampled jumps: (1 - 0.1) / 0.5 = 1.8.
    EXPECT_NEAR(levy_moment_window(kSym, 0.01, 1.0, 2.0), 1.8, 1e-14);
}

TEST(NoiseClosedForm, SurvivalProbability) {
    EXPECT_NEAR(survival_probability(kSym, 1.0, kUnit), 0.513417, 1e-6);
    EXPECT_NEAR(survival_probability(kSym, 1.0, kUnit), std::exp(-2.0 / 3.0), 1e-15);
    EXPECT_EQ(survival_probability(kSym, std::numeric_limits<double>::infinity(), kUnit), 1.0);
    EXPECT_EQ(survival_probability(kSym, 1.0, {0.0, 1.0}), 1.0);
    EXPECT_NEAR(survival_probability(kSym, 10.0, kUnit), std::exp(-std::pow(10.0, -1.5) / 1.5), 1e-15);
}

// ============================================================================
// Sampling
// ============================================================================

TEST(NoiseSampling, Determinism) {
    const auto a = sample_noise(kSym, trunc(0.01, 1.0), kUnit, 42);
    const auto b = sample_noise(kSym, trunc(0.01, 1.0), kUnit, 42);
    EXPECT_EQ(a, b);
    EXPECT_FALSE(a.jumps.empty());
    const auto c = sample_noise(kSym, trunc(0.01, 1.0), kUnit, 43);
    EXPECT_NE(a.jumps, c.jumps);
}

TEST(NoiseSampling, Invariants) {
    const auto tr = trunc(0.01, 1.0);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto r = sample_noise(kSym, tr, {2.0, 3.0}, s);
        EXPECT_EQ(r.compensator_mu, compensator_drift(kSym, tr));
        for (std::size_t j = 0; j < r.jumps.size(); ++j) {
            const auto& J = r.jumps[j];
            EXPECT_GT(std::abs(J.z), tr.small_cutoff);
            EXPECT_LE(std::abs(J.z), tr.big_cutoff);
            EXPECT_GE(J.tau, 0.0);
            EXPECT_LE(J.tau, 2.0);
            EXPECT_GE(J.x, 0.0);
            EXPECT_LE(J.x, 3.0);
            if (j > 0) EXPECT_LE(r.jumps[j - 1].tau, J.tau);
        }
    }
}

TEST(NoiseSampling, OneSidedSigns) {
    const auto r = sample_noise(kPos, trunc(0.01, 1.0), kUnit, 7);
    for (const auto& j : r.jumps) EXPECT_GT(j.z, 0.0);
    const auto n = sample_noise({1.5, 0.0, 1.0}, trunc(0.01, 1.0), kUnit, 7);
    for (const auto& j : n.jumps) EXPECT_LT(j.z, 0.0);
}

TEST(NoiseSampling, DegenerateWindowIsEmpty) {
    const auto tr = trunc(1.0 - 1e-9, 1.0);
    EXPECT_LT(expected_jump_count(kSym, tr, kUnit), 1e-8);
    for (std::uint64_t s = 0; s < 1000; ++s)
        EXPECT_TRUE(sample_noise(kSym, tr, kUnit, s).jumps.empty());
}

TEST(NoiseLaw, JumpCountMeanAndVariance) {
    const auto tr = trunc(0.1, 1.0);
    const double lambda = expected_jump_count(kSym, tr, kUnit);
    const int n = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double c = static_cast<double>(sample_noise(kSym, tr, kUnit, derive_seed(11, i)).jumps.size());
        sum += c;
        sum2 += c * c;
    }
    const double mean = sum / n;
    const double var = (sum2 - n * mean * mean) / (n - 1);
    EXPECT_LT(std::abs(mean - lambda), 3.0 * std::sqrt(lambda / n));
    // Poisson: fourth central moment lambda + 3 lambda^2.
    EXPECT_LT(std::abs(var - lambda), 3.0 * std::sqrt((lambda + 2.0 * lambda * lambda) / n));
}

TEST(NoiseLaw, TruncatedMomentIdentity) {
    for (double p : {2.0, 1.8}) {
        const auto tr = trunc(0.05, 1.0);
        const SpaceTimeDomain dom{1.0, 2.0};
        const double target = levy_moment_window(kSym, 0.05, 1.0, p);
        const int n = 10000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (const auto& j : sample_noise(kSym, tr, dom, derive_seed(5, i)).jumps)
                s += std::pow(std::abs(j.z), p);
            s /= dom.T * dom.L;
            sum += s;
            sum2 += s * s;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum2 / n - mean * mean) / (n - 1));
        EXPECT_LT(std::abs(mean - target), 3.0 * se) << "p=" << p;
    }
}

TEST(NoiseLaw, SurvivalMatchesClosedForm) {
    // A huge sampled cutoff makes {R_K > T} observable up to O(Kmax^-alpha).
    const auto tr = trunc(0.5, 1e8);
    const double target = survival_probability(kSym, 1.0, kUnit);
    const int n = 10000;
    int survived = 0;
    for (int i = 0; i < n; ++i)
        if (stopping_time(sample_noise(kSym, tr, kUnit, derive_seed(3, i)), 1.0) > 1.0) ++survived;
    const double p = static_cast<double>(survived) / n;
    EXPECT_LT(std::abs(p - target), 3.0 * std::sqrt(target * (1 - target) / n));
}

// ============================================================================
// Stopping time and restriction
// ============================================================================

TEST(NoiseStopping, ExplicitList) {
    const auto r = explicit_noise({{0.3, 0.5, 0.5}, {0.7, 0.2, 1.4}});
    EXPECT_EQ(stopping_time(r, 1.0), 0.7);
    EXPECT_EQ(stopping_time(r, 1.5), std::numeric_limits<double>::infinity());
    EXPECT_EQ(stopping_time(r, 0.4), 0.3);
    EXPECT_THROW(stopping_time(r, 3.0), UnobservableEventError);
}

TEST(NoiseRestrict, IdentityAndCompensator) {
    const auto r = sample_noise(kPos, trunc(0.01, 1.0), kUnit, 9);
    EXPECT_EQ(restrict(r, 1.0), r);
    const auto h = restrict(r, 0.5);
    EXPECT_NEAR(r.compensator_mu, 18.0, 1e-12);
    EXPECT_NEAR(h.compensator_mu, 2.0 * (10.0 - std::pow(0.5, -0.5)), 1e-12);
    EXPECT_NEAR(h.compensator_mu, 17.17157, 1e-5);
    for (const auto& j : h.jumps) EXPECT_LE(std::abs(j.z), 0.5);
    EXPECT_THROW(restrict(r, 0.01), ParameterError);
    EXPECT_THROW(restrict(r, 1.5), ParameterError);
}

TEST(NoiseRestrict, CouplingPrefix) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto r = sample_noise(kSym, trunc(0.05, 2.0), kUnit, s);
        const auto h = restrict(r, 0.5);
        const double R = stopping_time(r, 0.5);
        std::size_t i = 0;
        for (; i < r.jumps.size() && r.jumps[i].tau < R; ++i) {
            ASSERT_LT(i, h.jumps.size());
            EXPECT_EQ(r.jumps[i], h.jumps[i]);
        }
        EXPECT_EQ(h.seed, r.seed);
    }
}

// ============================================================================
// Compensated integral
// ============================================================================

TEST(NoiseIntegrate, TrivialCases) {
    const auto r = sample_noise(kSym, trunc(0.01, 1.0), kUnit, 4);
    EXPECT_EQ(integrate(r, [](double, double) { return 0.0; }, 1.0), 0.0);
    double sum = 0.0;
    for (const auto& j : r.jumps) sum += j.z;
    EXPECT_DOUBLE_EQ(integrate(r, [](double, double) { return 1.0; }, 1.0), sum);
}

TEST(NoiseIntegrate, IndicatorMatchesEnumeration) {
    const auto r = sample_noise(kPos, trunc(0.05, 1.0), kUnit, 21);
    auto inside = [](double s, double x) { return s >= 0.25 && s < 0.75 && x >= 0.25 && x < 0.5; };
    double oracle = 0.0;
    for (const auto& j : r.jumps)
        if (inside(j.tau, j.x)) oracle += j.z;
    oracle -= r.compensator_mu * 0.5 * 0.25;
    const double got = integrate(r, [&](double s, double x) { return inside(s, x) ? 1.0 : 0.0; }, 1.0);
    EXPECT_NEAR(got, oracle, 1e-12);
}

TEST(NoiseIntegrate, LinearAndAdditive) {
    const auto r = sample_noise(kPos, trunc(0.05, 1.0), kUnit, 22);
    auto g = [](double s, double x) { return std::sin(3.0 * x) * (1.0 + s); };
    auto h = [](double s, double x) { return x * x - s; };
    const double a = 1.7, b = -0.3;
    const double lhs = integrate(r, [&](double s, double x) { return a * g(s, x) + b * h(s, x); }, 1.0);
    const double rhs = a * integrate(r, g, 1.0) + b * integrate(r, h, 1.0);
    EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(lhs)));
    const double whole = integrate(r, g, 0.0, 0.75);
    const double parts = integrate(r, g, 0.0, 0.5) + integrate(r, g, 0.5, 0.75);
    EXPECT_NEAR(whole, parts, 1e-6);
}

TEST(NoiseIntegrate, RoughIntegrandReportsNonConvergence) {
    const auto r = sample_noise(kPos, trunc(0.05, 1.0), kUnit, 23);
    noise::QuadratureOptions q;
    q.n_t = 4;
    q.n_x = 4;
    q.rel_tol = 1e-12;
    EXPECT_THROW(integrate(r, [](double s, double x) { return std::exp(5 * s) * x; }, 1.0, q),
                 QuadratureError);
}

// ============================================================================
// Serialization and Gaussian correction
// ============================================================================

TEST(NoiseFormat, RoundTrip) {
    auto tr = trunc(0.05, 1.0);
    tr.gaussian_correction = true;
    tr.correction_cells_t = 4;
    tr.correction_cells_x = 3;
    const auto r = sample_noise(kPos, tr, {0.5, 2.0}, 77);
    std::stringstream ss;
    write_noise(ss, r);
    const std::string text = ss.str();
    EXPECT_NE(text.find("tau,x,z\n"), std::string::npos);
    EXPECT_EQ(read_noise(ss), r);
    std::stringstream again;
    write_noise(again, read_noise(*std::make_unique<std::stringstream>(text)));
    EXPECT_EQ(again.str(), text);
}

TEST(NoiseFormat, RejectsTamperedCompensator) {
    const auto r = sample_noise(kPos, trunc(0.05, 1.0), kUnit, 5);
    std::stringstream ss;
    write_noise(ss, r);
    std::string text = ss.str();
    const auto pos = text.find("# compensator_mu=");
    text.replace(pos, text.find('\n', pos) - pos, "# compensator_mu=1");
    std::stringstream in(text);
    EXPECT_THROW(read_noise(in), ParameterError);
}

TEST(NoiseCorrection, MatchedVarianceAndIndependentStream) {
    auto tr = trunc(0.05, 1.0);
    const auto plain = sample_noise(kSym, tr, kUnit, 31);
    tr.gaussian_correction = true;
    tr.correction_cells_t = 50;
    tr.correction_cells_x = 40;
    const auto r = sample_noise(kSym, tr, kUnit, 31);
    EXPECT_EQ(r.jumps, plain.jumps);
    ASSERT_EQ(r.correction.size(), 2000u);
    const double area = (1.0 / 50) * (1.0 / 40);
    const double var_target = small_jump_variance(kSym, 0.05) * area;
    double s2 = 0.0;
    for (const auto& c : r.correction) s2 += c.z * c.z;
    const double var = s2 / r.correction.size();
    // Relative standard error of a chi-square sample variance is sqrt(2/n).
    EXPECT_LT(std::abs(var / var_target - 1.0), 3.0 * std::sqrt(2.0 / 2000));
    const auto merged = impulses(r);
    EXPECT_EQ(merged.size(), r.jumps.size() + r.correction.size());
    for (std::size_t i = 1; i < merged.size(); ++i) EXPECT_LE(merged[i - 1].tau, merged[i].tau);
}
