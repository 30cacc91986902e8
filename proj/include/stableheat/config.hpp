#pragma once

// Versioned JSON run configuration. Unknown keys are rejected, missing keys take
// defaults, and `effective` holds the fully resolved document for echoing.
//
// Each experiment section may carry its own "noise", "domain", "grid", "drift",
// "noise_coefficient" and "initial_condition" objects; they are merged over the
// top-level ones (JSON merge patch) before parsing.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stableheat/coefficients.hpp"
#include "stableheat/solvers.hpp"

namespace stableheat::config {

inline constexpr int kVersion = 1;

enum class SolverMethod { mild, galerkin, both };

struct SolverSettings {
    SolverMethod method = SolverMethod::mild;
    int modes = 32;
    solvers::MildOptions mild;
};

struct Setup {
    solvers::ProblemSpec problem;
    solvers::GridSpec grid;
};

struct StoppingLaw {
    Setup setup;
    double K = 1.0;
    double k_max = 1e8;
    std::size_t paths = 10000;
};

struct TruncatedMoment {
    Setup setup;
    double p = 2.0;
    std::size_t paths = 10000;
};

struct Comparison {
    Setup setup;  // the upper problem v
    solvers::ProblemSpec lower;  // u: drift and initial condition from "lower"
    std::size_t paths = 200;
    std::optional<double> tolerance;  // calibrated when absent
};

struct Nonnegativity {
    Setup setup;
    std::size_t paths = 200;
    std::optional<double> tolerance;
};

struct Consistency {
    Setup setup;
    double k_small = 0.5;
    double k_large = 1.0;
    std::size_t paths = 100;
};

struct GalerkinConvergence {
    Setup setup;
    std::vector<int> modes{4, 8, 16, 32};
    std::uint64_t path = 0;  // noise seed is derive_seed(seed, path)
};

struct MomentEstimate {
    Setup setup;
    double p = 2.0;
    std::size_t paths = 200;
};

struct Experiments {
    std::optional<StoppingLaw> stopping_law;
    std::optional<TruncatedMoment> truncated_moment;
    std::optional<Comparison> comparison;
    std::optional<Nonnegativity> nonnegativity;
    std::optional<Consistency> consistency;
    std::optional<GalerkinConvergence> galerkin_convergence;
    std::optional<MomentEstimate> moment_estimate;

    bool empty() const;
};

struct RunConfig {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string output_dir = "out";
    Setup base;
    SolverSettings solver;
    Experiments experiments;
    nlohmann::json effective;
};

// Throws ConfigError for schema problems and the module errors for invalid values.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
// Throws IoError if the file cannot be read.
RunConfig load_config(const std::string& path);

coefficients::CoefficientSpec parse_coefficient(const nlohmann::json& j, double length);
coefficients::InitialCondition parse_initial_condition(const nlohmann::json& j, double length);
nlohmann::json to_json(const coefficients::CoefficientSpec& c);
nlohmann::json to_json(const coefficients::InitialCondition& ic);

}  // namespace stableheat::config
