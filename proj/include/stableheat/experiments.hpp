#pragma once

// Seeded Monte Carlo checks. Path i always uses derive_seed(master, i), and
// results are reduced in path order, so reports do not depend on thread count.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "stableheat/noise.hpp"
#include "stableheat/solvers.hpp"

namespace stableheat::experiments {

struct ExperimentReport {
    std::string name;
    std::string inputs_hash;
    std::size_t n_paths = 0;
    std::uint64_t master_seed = 0;
    std::map<std::string, double> estimates;
    std::pair<double, double> confidence_interval{0.0, 0.0};
    std::string target;
    bool pass = false;
    std::vector<std::string> flags;
    std::string per_path_label;
    std::vector<double> per_path;
    // Wall time; never serialised into the report so reports stay byte-stable.
    double runtime_seconds = 0.0;
};

// Stable key order and %.17g-equivalent round-trip numbers.
std::string to_json(const ExperimentReport& r);
void write_per_path_csv(std::ostream& os, const ExperimentReport& r);

// fn(i) for i in [0, n) on up to `threads` workers; results in index order.
// The first exception by index is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned threads, const std::function<T(std::size_t)>& fn);

struct PositivePartEnergy {
    double value = 0.0;
};

// Integral of (w+)^2 by the midpoint rule on the dual cells centred at the nodes
// (half cells at the ends).
PositivePartEnergy positive_part_energy(const double* w, int n_x, double length);

// Sup-error of the mild solver against exp(-pi^2 t / (2 L^2)) sin(pi x / L).
double deterministic_grid_error(const noise::SpaceTimeDomain& dom, const solvers::GridSpec& grid);
// 10x the deterministic grid error, floored at 10 machine epsilons.
double calibrated_tolerance(const noise::SpaceTimeDomain& dom, const solvers::GridSpec& grid);

struct RunOptions {
    unsigned threads = 1;
};

// Frequency of {R_K > T}; noise is sampled with cutoffs (K/2, k_max] so R_K is observable.
ExperimentReport run_stopping_law(const noise::StableParams& params, double K, const noise::SpaceTimeDomain& dom,
                                  std::size_t n_paths, std::uint64_t seed, double k_max = 1e8,
                                  const RunOptions& ro = {});

// Mean of sum |z|^p per unit space-time against (K^{p-a} - eps^{p-a}) / (p - a).
ExperimentReport run_truncated_moment(const noise::StableParams& params, const noise::TruncationSpec& trunc,
                                      const noise::SpaceTimeDomain& dom, double p, std::size_t n_paths,
                                      std::uint64_t seed, const RunOptions& ro = {});

ExperimentReport run_comparison(const solvers::ProblemSpec& problem_u, const solvers::ProblemSpec& problem_v,
                                const solvers::GridSpec& grid, std::size_t n_paths, std::uint64_t seed,
                                double tol, const RunOptions& ro = {});

ExperimentReport run_nonnegativity(const solvers::ProblemSpec& problem, const solvers::GridSpec& grid,
                                   std::size_t n_paths, std::uint64_t seed, double tol, const RunOptions& ro = {});

// One shared path sampled at the problem's cutoff, restricted to both levels.
ExperimentReport run_consistency(const solvers::ProblemSpec& problem, std::uint64_t noise_seed, double k_small,
                                 double k_large, const solvers::GridSpec& grid);

// run_consistency over paths derive_seed(seed, i); passes iff every path passes.
ExperimentReport run_consistency_batch(const solvers::ProblemSpec& problem, std::size_t n_paths,
                                       std::uint64_t seed, double k_small, double k_large,
                                       const solvers::GridSpec& grid, const RunOptions& ro = {});

ExperimentReport run_galerkin_convergence(const solvers::ProblemSpec& problem, std::uint64_t noise_seed,
                                          const std::vector<int>& m_list, const solvers::GridSpec& grid);

// sup_t E||u(t)||_p^p from paths [0, n), checked against the same estimate from the
// first n/2 paths.
ExperimentReport run_moment_estimate(const solvers::ProblemSpec& problem, const solvers::GridSpec& grid,
                                     std::size_t n_paths, double p, std::uint64_t seed, const RunOptions& ro = {});

// ---------------------------------------------------------------------------

template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned threads, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errs(n);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < n; i += stride) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    const std::size_t k = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
    if (k == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < k; ++t) pool.emplace_back(work, t, k);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace stableheat::experiments
