#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "stableheat/errors.hpp"
#include "stableheat/experiments.hpp"
#include "stableheat/rng.hpp"

using namespace stableheat;
using namespace stableheat::experiments;
using coefficients::CoefficientSpec;
using coefficients::InitialCondition;
using solvers::GridSpec;
using solvers::ProblemSpec;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProblemSpec one_sided(double eps = 0.1) {
    ProblemSpec p;
    p.params = {1.5, 1.0, 0.0};
    p.trunc.small_cutoff = eps;
    p.init = InitialCondition::bump(0.5, 0.4, 1.0);
    p.noise_coef = CoefficientSpec::clipped_linear(1.0, 2.0);
    return p;
}

ProblemSpec symmetric(double eps = 0.1) {
    ProblemSpec p;
    p.params = {1.5, 0.5, 0.5};
    p.trunc.small_cutoff = eps;
    p.init = InitialCondition::sine_mode(1);
    p.noise_coef = CoefficientSpec::clipped_linear(1.0, 1.0);
    return p;
}

}  // namespace

TEST(PositivePartEnergy, Examples) {
    std::vector<double> neg(33, -1.0), one(33, 1.0), s(33);
    for (int k = 0; k <= 32; ++k) s[k] = std::sin(kPi * k / 32.0);
    EXPECT_EQ(positive_part_energy(neg.data(), 32, 1.0).value, 0.0);
    EXPECT_NEAR(positive_part_energy(one.data(), 32, 1.0).value, 1.0, 1e-15);
    EXPECT_NEAR(positive_part_energy(s.data(), 32, 1.0).value, 0.5, 1e-15);
    // Zero iff w <= 0 at every node, endpoints included.
    neg[0] = 1e-3;
    EXPECT_GT(positive_part_energy(neg.data(), 32, 1.0).value, 0.0);
}

TEST(Tolerance, Calibration) {
    const GridSpec g{64, 32};
    const double err = deterministic_grid_error({1, 1}, g);
    EXPECT_LT(err, 1e-10);
    EXPECT_EQ(calibrated_tolerance({1, 1}, g), 10 * std::max(err, 2.220446049250313e-16));
}

TEST(ParallelMap, OrderAndErrors) {
    const std::function<int(std::size_t)> sq = [](std::size_t i) { return static_cast<int>(i * i); };
    for (unsigned t : {1u, 2u, 5u, 64u}) {
        const auto v = parallel_map<int>(10, t, sq);
        for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(v[i], static_cast<int>(i * i));
    }
    const std::function<int(std::size_t)> bad = [](std::size_t i) -> int {
        if (i == 3 || i == 7) throw std::runtime_error("path " + std::to_string(i));
        return 0;
    };
    try {
        parallel_map<int>(10, 4, bad);
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "path 3");
    }
    EXPECT_TRUE(parallel_map<int>(0, 4, sq).empty());
}

TEST(StoppingLaw, ClosedForm) {
    const auto r = run_stopping_law({1.5, 0.5, 0.5}, 1.0, {1, 1}, 10000, 42);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.estimates.at("target"), std::exp(-2.0 / 3.0), 1e-15);
    EXPECT_NEAR(r.estimates.at("survival_frequency"), 0.51342, 0.016);
    EXPECT_EQ(r.per_path.size(), 10000u);

    const auto big = run_stopping_law({1.5, 0.5, 0.5}, 10.0, {1, 1}, 10000, 43);
    EXPECT_NEAR(big.estimates.at("target"), 0.97914, 1e-5);
    EXPECT_TRUE(big.pass);
}

TEST(StoppingLaw, Errors) {
    EXPECT_THROW(run_stopping_law({1.5, 0.5, 0.5}, 1.0, {1, 1}, 0, 1), ConfigError);
    EXPECT_THROW(run_stopping_law({1.5, 0.5, 0.5}, 1.0, {1, 1}, 10, 1, 1.0), UnobservableEventError);
}

TEST(TruncatedMoment, ClosedForm) {
    noise::TruncationSpec tr;
    tr.small_cutoff = 0.1;
    const auto r = run_truncated_moment({1.5, 0.5, 0.5}, tr, {1, 2}, 2.0, 4000, 5);
    EXPECT_NEAR(r.estimates.at("target"), (1.0 - std::sqrt(0.1)) / 0.5, 1e-14);
    EXPECT_TRUE(r.pass);
}

TEST(Comparison, IdenticalProblemsNoViolation) {
    const auto p = one_sided();
    const auto r = run_comparison(p, p, {32, 16}, 5, 1, 0.0);
    EXPECT_TRUE(r.pass);
    for (double v : r.per_path) EXPECT_EQ(v, 0.0);
}

TEST(Comparison, ShiftedDriftPasses) {
    auto v = one_sided();
    v.drift = CoefficientSpec::clipped_linear(0.5, 1.0);
    auto u = v;
    u.drift = CoefficientSpec::shifted(v.drift, -0.5);
    const GridSpec g{64, 32};
    const auto r = run_comparison(u, v, g, 10, 3, calibrated_tolerance(u.dom, g));
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.estimates.at("max_positive_part_energy"),
              std::pow(r.estimates.at("tolerance"), 2) * u.dom.L);
}

TEST(Comparison, TwoSidedNoiseViolationIsReported) {
    // Negative impulses break pathwise ordering; the run reports it rather than hiding it.
    auto v = one_sided(0.2);
    v.params = {1.5, 0.5, 0.5};
    v.init = InitialCondition::bump(0.5, 0.4, 0.2);
    v.noise_coef = CoefficientSpec::clipped_linear(2.0, 2.0);
    auto u = v;
    u.init = InitialCondition::bump(0.5, 0.4, 0.1);
    const auto r = run_comparison(u, v, {64, 32}, 20, 11, 1e-13);
    EXPECT_FALSE(r.pass);
    EXPECT_GT(r.estimates.at("failing_paths"), 0.0);
}

TEST(Comparison, Gates) {
    const auto p = one_sided();
    auto bad_phi = p;
    bad_phi.noise_coef = CoefficientSpec::affine(0.0, -1.0);
    EXPECT_THROW(run_comparison(bad_phi, bad_phi, {16, 16}, 1, 1, 0.0), PreconditionError);
    auto hot = p;
    hot.drift = CoefficientSpec::constant(0.1);
    EXPECT_THROW(run_comparison(hot, p, {16, 16}, 1, 1, 0.0), PreconditionError);
    auto high = p;
    high.init = InitialCondition::bump(0.5, 0.4, 2.0);
    EXPECT_THROW(run_comparison(high, p, {16, 16}, 1, 1, 0.0), PreconditionError);
    auto other_phi = p;
    other_phi.noise_coef = CoefficientSpec::clipped_linear(0.5, 2.0);
    EXPECT_THROW(run_comparison(p, other_phi, {16, 16}, 1, 1, 0.0), PreconditionError);
    try {
        run_comparison(hot, p, {16, 16}, 1, 1, 0.0);
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("f <= g"), std::string::npos);
        EXPECT_EQ(e.error_class(), ErrorClass::precondition);
    }
}

TEST(Nonnegativity, ZeroInitialIsExactlyZero) {
    auto p = one_sided();
    p.init = InitialCondition::zero();
    p.drift = CoefficientSpec::affine(0.0, -0.5);
    const auto r = run_nonnegativity(p, {32, 16}, 5, 2, 0.0);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.estimates.at("min"), 0.0);
    EXPECT_EQ(r.estimates.at("max_abs"), 0.0);
}

TEST(Nonnegativity, BumpPasses) {
    auto p = one_sided();
    p.drift = CoefficientSpec::affine(0.0, -0.5);
    const auto r = run_nonnegativity(p, {64, 32}, 20, 4, 1e-13);
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.estimates.at("min"), 0.0);
}

TEST(Nonnegativity, Gates) {
    auto p = one_sided();
    p.init = InitialCondition::tabulated({0.0, -0.1, 0.5, 0.0});
    EXPECT_THROW(run_nonnegativity(p, {16, 16}, 1, 1, 0.0), PreconditionError);
    auto q = one_sided();
    q.drift = CoefficientSpec::constant(0.1);
    EXPECT_THROW(run_nonnegativity(q, {16, 16}, 1, 1, 0.0), PreconditionError);
    auto r = one_sided();
    r.noise_coef = CoefficientSpec::shifted(r.noise_coef, 0.1);
    EXPECT_THROW(run_nonnegativity(r, {16, 16}, 1, 1, 0.0), PreconditionError);
}

TEST(Consistency, SharedPath) {
    const auto p = symmetric(0.1);
    bool saw_quiet = false, saw_jump = false;
    for (std::uint64_t s = 0; s < 20 && !(saw_quiet && saw_jump); ++s) {
        const auto r = run_consistency(p, s, 0.5, 1.0, {64, 32});
        EXPECT_TRUE(r.pass) << s;
        EXPECT_EQ(r.estimates.at("relative_sup_difference"), 0.0);
        const bool quiet = std::find(r.flags.begin(), r.flags.end(), "no_large_jump") != r.flags.end();
        if (quiet) {
            saw_quiet = true;
            EXPECT_EQ(r.estimates.at("sup_difference_after"), 0.0);
        } else {
            saw_jump = true;
            EXPECT_LT(r.estimates.at("stopping_time"), 1.0);
            EXPECT_GT(r.estimates.at("sup_difference_after"), 0.0);
        }
    }
    EXPECT_TRUE(saw_quiet);
    EXPECT_TRUE(saw_jump);
}

TEST(Consistency, Gates) {
    auto p = symmetric();
    p.params = {1.5, 0.7, 0.3};
    EXPECT_THROW(run_consistency(p, 1, 0.5, 1.0, {16, 16}), PreconditionError);
    const auto q = symmetric();
    EXPECT_THROW(run_consistency(q, 1, 1.0, 0.5, {16, 16}), ConfigError);
    EXPECT_THROW(run_consistency(q, 1, 0.5, 2.0, {16, 16}), ConfigError);
}

TEST(GalerkinConvergence, DeterministicTail) {
    // Tent of height 1: a_n = 4 sqrt(2) sin(n pi / 2) / (n pi)^2, so the error at t = 0 is
    // the norm of the odd coefficients beyond m.
    auto p = symmetric();
    p.noise_coef = CoefficientSpec::zero();
    p.init = InitialCondition::tabulated({0.0, 1.0, 0.0});
    const std::vector<int> ms{4, 8, 16, 32};
    const auto r = run_galerkin_convergence(p, 1, ms, {32, 256});
    EXPECT_TRUE(r.pass);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        double tail = 0.0;
        for (int n = ms[i] + 1; n < 200000; n += 1)
            if (n % 2 == 1) tail += 32.0 / std::pow(n * kPi, 4);
        EXPECT_NEAR(r.per_path[i], std::sqrt(tail), 0.05 * std::sqrt(tail)) << ms[i];
        if (i > 0) EXPECT_LT(r.per_path[i], r.per_path[i - 1]);
    }
}

TEST(GalerkinConvergence, StochasticTrend) {
    auto p = symmetric(0.5);
    p.init = InitialCondition::tabulated({0.0, 1.0, 0.0});
    p.noise_coef = CoefficientSpec::affine(0.0, 0.25);
    EXPECT_TRUE(run_galerkin_convergence(p, derive_seed(7, 0), {4, 8, 16, 32}, {128, 128}).pass);
}

TEST(GalerkinConvergence, Errors) {
    const auto p = symmetric();
    EXPECT_THROW(run_galerkin_convergence(p, 1, {8}, {16, 64}), ConfigError);
    EXPECT_THROW(run_galerkin_convergence(p, 1, {8, 4}, {16, 64}), ConfigError);
    EXPECT_THROW(run_galerkin_convergence(p, 1, {4, 32}, {16, 64}), ConfigError);
}

TEST(MomentEstimate, Examples) {
    auto zero = symmetric();
    zero.init = InitialCondition::zero();
    const auto z = run_moment_estimate(zero, {32, 16}, 4, 2.0, 1);
    EXPECT_EQ(z.estimates.at("sup_mean_norm"), 0.0);
    EXPECT_TRUE(z.pass);

    // Deterministic heat flow decays, so the sup sits at t = 0.
    auto det = symmetric();
    det.noise_coef = CoefficientSpec::zero();
    const auto d = run_moment_estimate(det, {32, 64}, 4, 1.8, 1);
    std::vector<double> row(65);
    for (int k = 0; k <= 64; ++k) row[k] = det.init(k / 64.0);
    EXPECT_EQ(d.estimates.at("sup_mean_norm"), solvers::lp_norm_pow(row.data(), 64, 1.0, 1.8));
    EXPECT_EQ(d.estimates.at("argmax_time"), 0.0);

    EXPECT_THROW(run_moment_estimate(det, {32, 16}, 4, 1.5, 1), ConfigError);
    EXPECT_THROW(run_moment_estimate(det, {32, 16}, 4, 2.5, 1), ConfigError);
    EXPECT_THROW(run_moment_estimate(det, {32, 16}, 1, 2.0, 1), ConfigError);
}

TEST(Reports, IndependentOfThreadCount) {
    auto v = one_sided();
    v.drift = CoefficientSpec::clipped_linear(0.5, 1.0);
    auto u = v;
    u.drift = CoefficientSpec::shifted(v.drift, -0.5);
    const auto a = run_comparison(u, v, {32, 16}, 6, 9, 1e-12, {1});
    const auto b = run_comparison(u, v, {32, 16}, 6, 9, 1e-12, {3});
    EXPECT_EQ(to_json(a), to_json(b));
    const auto m1 = run_moment_estimate(symmetric(), {32, 16}, 8, 2.0, 4, {1});
    const auto m4 = run_moment_estimate(symmetric(), {32, 16}, 8, 2.0, 4, {4});
    EXPECT_EQ(to_json(m1), to_json(m4));
}

TEST(Reports, JsonAndCsvShape) {
    const auto r = run_stopping_law({1.5, 0.5, 0.5}, 1.0, {1, 1}, 5, 77);
    const auto j = nlohmann::json::parse(to_json(r));
    for (const char* key : {"name", "inputs_hash", "n_paths", "seeds", "estimates", "confidence_interval", "target",
                            "pass", "flags", "per_path"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_FALSE(j.contains("runtime_seconds"));
    EXPECT_EQ(j["seeds"]["master"].get<std::uint64_t>(), 77u);
    EXPECT_EQ(j["per_path"]["values"].size(), 5u);

    std::ostringstream os;
    write_per_path_csv(os, r);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "path,seed,survived");
    std::getline(is, line);
    EXPECT_EQ(line.substr(0, line.find(',', 2)), "0," + std::to_string(derive_seed(77, 0)));
}
