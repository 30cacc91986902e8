#pragma once

// Two independent solvers for the truncated stochastic heat equation
//   du = (1/2) u_xx dt + f(t,x,u) dt + phi(t,x,u) dL,  u(t,0) = u(t,L) = 0,
// driven by one NoiseRealization: a mild-form Picard iteration on a space-time
// grid and a sine-Galerkin projection with exact jump handling.
//
// Grid convention: node t_i holds the left limit u(t_i-). An impulse at time
// tau first shows up at the smallest grid time strictly greater than tau.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "stableheat/coefficients.hpp"
#include "stableheat/kernel.hpp"
#include "stableheat/noise.hpp"

namespace stableheat::solvers {

struct GridSpec {
    int n_t = 256;
    int n_x = 128;

    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

struct ProblemSpec {
    noise::StableParams params;
    noise::TruncationSpec trunc;
    noise::SpaceTimeDomain dom;
    coefficients::CoefficientSpec drift = coefficients::CoefficientSpec::zero();
    coefficients::CoefficientSpec noise_coef = coefficients::CoefficientSpec::zero();
    coefficients::InitialCondition init = coefficients::InitialCondition::zero();

    // Audits Lipschitz/growth of both coefficients (and monotone phi if asked).
    void validate(bool require_monotone = false) const;
    std::string describe() const;
    std::string hash() const;
};

// An impulse of the driving noise with the state it saw.
struct ImpulseRecord {
    double tau = 0.0;
    double x = 0.0;
    double z = 0.0;
    double left_limit = 0.0;  // u(tau-, x)
};

struct GridSolution {
    GridSpec grid;
    ProblemSpec problem;
    std::vector<double> values;  // row-major (n_t+1) x (n_x+1)
    std::vector<int> window_start;
    std::vector<int> window_steps;
    std::vector<int> picard_iterations;
    std::vector<double> contraction_ratios;
    std::vector<ImpulseRecord> impulses;  // impulses inside the horizon, time order
    std::string solver_tag;
    std::uint64_t noise_seed = 0;

    double time(int i) const { return problem.dom.T * i / grid.n_t; }
    double space(int k) const { return problem.dom.L * k / grid.n_x; }
    double at(int i, int k) const { return values[static_cast<std::size_t>(i) * (grid.n_x + 1) + k]; }
    const double* row(int i) const { return values.data() + static_cast<std::size_t>(i) * (grid.n_x + 1); }
};

struct SpectralSolution {
    int m = 0;
    GridSpec grid;
    ProblemSpec problem;
    std::vector<double> coeffs;  // row-major (n_t+1) x m, a_n(t_i) for n = 1..m
    std::vector<ImpulseRecord> impulses;
    std::uint64_t noise_seed = 0;

    double coeff(int i, int n) const { return coeffs[static_cast<std::size_t>(i) * m + (n - 1)]; }
    double basis(int n, double x) const;  // sqrt(2/L) sin(n pi x / L)
    double rate(int n) const;             // n^2 pi^2 / (2 L^2)
};

struct MildOptions {
    double tol = 1e-12;        // sup-norm Picard increment at exit
    int max_iter = 200;
    int window_steps = 8;      // initial window length in time steps
    double halving_ratio = 0.9;
    double kernel_abs_tol = 1e-10;
};

GridSolution solve_mild(const ProblemSpec& problem, const noise::NoiseRealization& noise,
                        const GridSpec& grid, const MildOptions& opt);
GridSolution solve_mild(const ProblemSpec& problem, const noise::NoiseRealization& noise,
                        const GridSpec& grid, double tol = 1e-12, int max_iter = 200);

// Coordinates L_n(t) = sum over impulses of e_n(x_j) z_j - mu t integral(e_n).
struct ProjectedNoise {
    int m = 0;
    double length = 1.0;
    std::vector<double> times;
    std::vector<double> increments;  // per impulse, m entries
    std::vector<double> drift;       // per mode, rate of the compensator term

    double increment(std::size_t j, int n) const { return increments[j * m + (n - 1)]; }
    double value(int n, double t) const;
};

ProjectedNoise project_noise(const noise::NoiseRealization& noise, int m);

SpectralSolution solve_galerkin(const ProblemSpec& problem, const noise::NoiseRealization& noise,
                                int m, const GridSpec& grid);

GridSolution spectral_to_grid(const SpectralSolution& sol, const GridSpec& grid);

// Sine coefficients of node values (trapezoid on the nodes).
std::vector<double> project_to_modes(const double* row, int n_x, int m, double length);

struct TestFunction {
    std::function<double(double)> value;
    std::function<double(double)> first;
    std::function<double(double)> second;
};

// sin^3(pi x / L) and its derivatives.
TestFunction default_test_function(double length);

double weak_form_residual(const GridSolution& sol, const noise::NoiseRealization& noise,
                          const TestFunction& test_fn, double t);

// Grid norms by the trapezoid rule on the nodes.
double h_norm(const double* row, int n_x, double length);
double lp_norm_pow(const double* row, int n_x, double length, double p);

// sup over nodes of |a - b|.
double sup_distance(const GridSolution& a, const GridSolution& b);

// CSV: header "t,<x_0>,...,<x_n>", then one row per grid time.
void write_grid_csv(std::ostream& os, const GridSolution& sol);

}  // namespace stableheat::solvers
