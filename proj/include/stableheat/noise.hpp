#pragma once

// Truncated alpha-stable space-time white noise on [0,T] x [0,L], represented
// by its finitely many jumps with eps < |z| <= K plus an exact compensator.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace stableheat::noise {

struct StableParams {
    double alpha = 1.5;
    double c_plus = 0.5;
    double c_minus = 0.5;

    void validate() const;
    bool symmetric() const { return c_plus == c_minus; }
    bool operator==(const StableParams&) const = default;
};

struct TruncationSpec {
    double big_cutoff = 1.0;
    double small_cutoff = 0.01;
    bool gaussian_correction = false;
    // Lattice of the Gaussian correction field (one impulse per cell).
    int correction_cells_t = 32;
    int correction_cells_x = 32;

    void validate() const;
    bool operator==(const TruncationSpec&) const = default;
};

struct SpaceTimeDomain {
    double T = 1.0;
    double L = 1.0;

    void validate() const;
    bool operator==(const SpaceTimeDomain&) const = default;
};

struct JumpRecord {
    double tau = 0.0;
    double x = 0.0;
    double z = 0.0;
    bool operator==(const JumpRecord&) const = default;
};

struct NoiseRealization {
    StableParams params;
    TruncationSpec truncation;
    SpaceTimeDomain domain;
    std::vector<JumpRecord> jumps;       // sorted by tau, stable
    std::vector<JumpRecord> correction;  // Gaussian cell impulses, empty unless enabled
    double compensator_mu = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const NoiseRealization&) const = default;
};

// Mean number of jumps: T L (eps^-a - K^-a) / a.
double expected_jump_count(const StableParams& p, const TruncationSpec& tr, const SpaceTimeDomain& dom);

NoiseRealization sample_noise(const StableParams& p, const TruncationSpec& tr,
                              const SpaceTimeDomain& dom, std::uint64_t seed);

// Integral of z over the Levy measure restricted to eps < |z| <= K.
double compensator_drift(const StableParams& p, const TruncationSpec& tr);

// Integral of |z|^p over the Levy measure restricted to |z| <= K. Requires p > alpha.
double levy_moment(const StableParams& p, double K, double power);

// Same integral over eps < |z| <= K.
double levy_moment_window(const StableParams& p, double eps, double K, double power);

// Variance density per unit dt dx of the neglected compensated small jumps.
double small_jump_variance(const StableParams& p, double eps);

// First jump time with |z| > K, or +infinity.
double stopping_time(const NoiseRealization& r, double K);

double survival_probability(const StableParams& p, double K, const SpaceTimeDomain& dom);

NoiseRealization restrict(const NoiseRealization& r, double K_new);

// Jumps and correction impulses merged by time; jumps first on ties.
std::vector<JumpRecord> impulses(const NoiseRealization& r);

struct QuadratureOptions {
    int n_t = 256;
    int n_x = 256;
    int refinement = 1;
    // Bound on |fine - coarse| / 3 relative to max(1, |drift term|).
    double rel_tol = 1e-5;
};

using Integrand = std::function<double(double s, double x)>;

// Compensated integral over [0, t_end] x [0, L].
double integrate(const NoiseRealization& r, const Integrand& g, double t_end,
                 const QuadratureOptions& q = {});

// Compensated integral over (t_begin, t_end] x [0, L]; t_begin = 0 includes tau = 0.
double integrate(const NoiseRealization& r, const Integrand& g, double t_begin, double t_end,
                 const QuadratureOptions& q = {});

// Columnar text format: '#'-prefixed key=value header, then "tau,x,z" rows.
void write_noise(std::ostream& os, const NoiseRealization& r);
NoiseRealization read_noise(std::istream& is);

}  // namespace stableheat::noise
