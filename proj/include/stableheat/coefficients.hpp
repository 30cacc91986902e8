#pragma once

// Closed registry of drift/noise coefficients f(t,x,u), phi(t,x,u) and initial
// conditions, each carrying declared Lipschitz/growth/monotonicity metadata.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stableheat/errors.hpp"

namespace stableheat::coefficients {

enum class Family { zero, constant, affine, clipped_linear, sine_modulated, shifted };

const char* to_string(Family f);

class CoefficientSpec {
public:
    static CoefficientSpec zero();
    static CoefficientSpec constant(double c);
    // a + b u
    static CoefficientSpec affine(double a, double b);
    // slope u clamped to [-cap, cap]
    static CoefficientSpec clipped_linear(double slope, double cap);
    // A (1 + sin(k pi x / L) / 2) sin(omega u)
    static CoefficientSpec sine_modulated(double amplitude, double omega, int mode, double length = 1.0);
    // base + delta
    static CoefficientSpec shifted(const CoefficientSpec& base, double delta);

    double operator()(double t, double x, double u) const;

    Family family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    const CoefficientSpec* base() const { return base_.get(); }

    double lipschitz_bound() const { return lipschitz_; }
    double growth_bound() const { return growth_; }
    bool monotone_in_u() const { return monotone_; }

    // Copy with overridden metadata; the audit decides whether the claim holds.
    CoefficientSpec with_declared(double lipschitz, double growth, bool monotone) const;

    // f(t, x, 0) = 0 for every (t, x), decided from the family and its parameters.
    bool vanishes_at_zero() const;

    // Stable human-readable description, e.g. "affine(a=1,b=0.5)".
    std::string describe() const;

    bool operator==(const CoefficientSpec& o) const;

private:
    CoefficientSpec() = default;

    Family family_ = Family::zero;
    std::vector<double> params_;
    std::shared_ptr<const CoefficientSpec> base_;
    double lipschitz_ = 0.0;
    double growth_ = 0.0;
    bool monotone_ = true;
};

struct AuditReport {
    bool pass = true;
    std::size_t samples = 0;
    double max_lipschitz_ratio = 0.0;  // observed |f(u)-f(v)| / |u-v|
    double max_growth_ratio = 0.0;     // observed |f(u)| / (1+|u|)
    std::optional<Witness> witness;
};

struct AuditOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 0x243f6a8885a308d3ULL;
    double horizon = 1.0;
    double length = 1.0;
};

// Non-throwing audit of the declared metadata.
AuditReport audit(const CoefficientSpec& spec, bool require_monotone, const AuditOptions& opt = {});

// Throws HypothesisError with the witness on failure.
AuditReport validate_hypothesis(const CoefficientSpec& spec, bool require_monotone,
                                const AuditOptions& opt = {});

// Randomized check of f <= g; throws OrderingError with the witness on failure.
AuditReport dominates(const CoefficientSpec& f, const CoefficientSpec& g, std::size_t samples = 10000,
                      const AuditOptions& opt = {});

enum class IcFamily { zero, constant, sine_mode, bump, tabulated };

const char* to_string(IcFamily f);

class InitialCondition {
public:
    static InitialCondition zero(double length = 1.0);
    // c on the open interval, 0 at the endpoints.
    static InitialCondition constant(double c, double length = 1.0);
    static InitialCondition sine_mode(int n, double amplitude = 1.0, double length = 1.0);
    // Smooth compact bump of the given height supported on (center - width, center + width).
    static InitialCondition bump(double center, double width, double height, double length = 1.0);
    // Piecewise-linear through equispaced values on [0, L].
    static InitialCondition tabulated(std::vector<double> values, double length = 1.0);

    double operator()(double x) const;

    IcFamily family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    double length() const { return length_; }

    // Finite values that vanish at 0 and L; the domain length must match.
    void validate(double length) const;

    std::string describe() const;
    bool operator==(const InitialCondition&) const = default;

private:
    InitialCondition() = default;

    IcFamily family_ = IcFamily::zero;
    std::vector<double> params_;
    double length_ = 1.0;
};

}  // namespace stableheat::coefficients
