#include "stableheat/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stableheat/experiments.hpp"
#include "stableheat/noise.hpp"
#include "stableheat/rng.hpp"
#include "stableheat/solvers.hpp"

namespace stableheat::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
    return fs::path(dir);
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write " + p.string());
    os << content;
    if (!os) throw IoError("write failed for " + p.string());
}

template <class F>
void write_with(const fs::path& p, F&& fill) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write " + p.string());
    fill(os);
    if (!os) throw IoError("write failed for " + p.string());
}

fs::path start(const config::RunConfig& rc) {
    const auto dir = prepare_dir(rc.output_dir);
    write_file(dir / "effective_config.json", rc.effective.dump(2) + "\n");
    return dir;
}

noise::NoiseRealization base_noise(const config::RunConfig& rc) {
    const auto& p = rc.base.problem;
    return noise::sample_noise(p.params, p.trunc, p.dom, rc.seed);
}

json mild_stats(const solvers::GridSolution& s) {
    const int iters = s.picard_iterations.empty()
                          ? 0
                          : *std::max_element(s.picard_iterations.begin(), s.picard_iterations.end());
    const double ratio = s.contraction_ratios.empty()
                             ? 0.0
                             : *std::max_element(s.contraction_ratios.begin(), s.contraction_ratios.end());
    return {{"windows", s.window_start.size()}, {"max_picard_iterations", iters}, {"max_contraction_ratio", ratio}};
}

}  // namespace

int exit_code_for(ErrorClass c) {
    switch (c) {
        case ErrorClass::validation: return validation;
        case ErrorClass::numerical: return numerical;
        case ErrorClass::precondition: return precondition;
        case ErrorClass::io: return io;
    }
    return internal;
}

int cmd_sample_noise(const config::RunConfig& rc, std::ostream& out) {
    const auto dir = start(rc);
    const auto n = base_noise(rc);
    write_with(dir / "noise.csv", [&](std::ostream& os) { noise::write_noise(os, n); });
    const json meta = {{"seed", n.seed},
                       {"jumps", n.jumps.size()},
                       {"correction_impulses", n.correction.size()},
                       {"expected_jumps", noise::expected_jump_count(n.params, n.truncation, n.domain)},
                       {"compensator_mu", n.compensator_mu},
                       {"format", "noise.csv: '# key=value' header lines, then tau,x,z rows"}};
    write_file(dir / "noise.json", meta.dump(2) + "\n");
    out << "sampled " << n.jumps.size() << " jumps into " << (dir / "noise.csv").string() << "\n";
    return ok;
}

int cmd_solve(const config::RunConfig& rc, std::ostream& out) {
    const auto dir = start(rc);
    const auto& p = rc.base.problem;
    const auto& g = rc.base.grid;
    const auto n = base_noise(rc);
    const auto method = rc.solver.method;

    json meta = {{"problem", p.describe()},
                 {"problem_hash", p.hash()},
                 {"grid", {{"n_t", g.n_t}, {"n_x", g.n_x}}},
                 {"noise_seed", n.seed},
                 {"jumps", n.jumps.size()},
                 {"deterministic_grid_error", experiments::deterministic_grid_error(p.dom, g)}};

    std::optional<solvers::GridSolution> mild, gal;
    if (method != config::SolverMethod::galerkin) {
        mild = solvers::solve_mild(p, n, g, rc.solver.mild);
        write_with(dir / "solution_mild.csv", [&](std::ostream& os) { solvers::write_grid_csv(os, *mild); });
        meta["mild"] = mild_stats(*mild);
    }
    if (method != config::SolverMethod::mild) {
        gal = solvers::spectral_to_grid(solvers::solve_galerkin(p, n, rc.solver.modes, g), g);
        gal->solver_tag = "galerkin";
        write_with(dir / "solution_galerkin.csv", [&](std::ostream& os) { solvers::write_grid_csv(os, *gal); });
        meta["galerkin"] = {{"modes", rc.solver.modes}};
    }
    if (mild && gal) {
        double h = 0.0;
        std::vector<double> w(g.n_x + 1);
        for (int i = 0; i <= g.n_t; ++i) {
            for (int k = 0; k <= g.n_x; ++k) w[k] = mild->at(i, k) - gal->at(i, k);
            h = std::max(h, solvers::h_norm(w.data(), g.n_x, p.dom.L));
        }
        meta["discrepancy"] = {{"max_abs", solvers::sup_distance(*mild, *gal)}, {"max_l2_in_space", h}};
    }
    write_file(dir / "solution.json", meta.dump(2) + "\n");
    out << "solved " << p.describe() << " into " << dir.string() << "\n";
    return ok;
}

int cmd_verify(const config::RunConfig& rc, std::ostream& out) {
    const auto& E = rc.experiments;
    if (E.empty()) throw ConfigError("verify needs at least one experiment in config.experiments");
    const auto dir = start(rc);
    const experiments::RunOptions ro{rc.threads};
    const std::uint64_t seed = rc.seed;

    std::vector<experiments::ExperimentReport> reports;
    auto finish = [&](experiments::ExperimentReport r) {
        write_file(dir / ("report_" + r.name + ".json"), experiments::to_json(r));
        write_with(dir / ("paths_" + r.name + ".csv"), [&](std::ostream& os) { experiments::write_per_path_csv(os, r); });
        out << (r.pass ? "PASS " : "FAIL ") << r.name << "\n";
        reports.push_back(std::move(r));
    };

    if (E.stopping_law) {
        const auto& x = *E.stopping_law;
        const auto& p = x.setup.problem;
        finish(experiments::run_stopping_law(p.params, x.K, p.dom, x.paths, seed, x.k_max, ro));
    }
    if (E.truncated_moment) {
        const auto& x = *E.truncated_moment;
        const auto& p = x.setup.problem;
        finish(experiments::run_truncated_moment(p.params, p.trunc, p.dom, x.p, x.paths, seed, ro));
    }
    if (E.comparison) {
        const auto& x = *E.comparison;
        const auto& v = x.setup.problem;
        const double tol = x.tolerance ? *x.tolerance : experiments::calibrated_tolerance(v.dom, x.setup.grid);
        finish(experiments::run_comparison(x.lower, v, x.setup.grid, x.paths, seed, tol, ro));
    }
    if (E.nonnegativity) {
        const auto& x = *E.nonnegativity;
        const auto& p = x.setup.problem;
        const double tol = x.tolerance ? *x.tolerance : experiments::calibrated_tolerance(p.dom, x.setup.grid);
        finish(experiments::run_nonnegativity(p, x.setup.grid, x.paths, seed, tol, ro));
    }
    if (E.consistency) {
        const auto& x = *E.consistency;
        finish(experiments::run_consistency_batch(x.setup.problem, x.paths, seed, x.k_small, x.k_large,
                                                  x.setup.grid, ro));
    }
    if (E.galerkin_convergence) {
        const auto& x = *E.galerkin_convergence;
        finish(experiments::run_galerkin_convergence(x.setup.problem, derive_seed(seed, x.path), x.modes,
                                                     x.setup.grid));
    }
    if (E.moment_estimate) {
        const auto& x = *E.moment_estimate;
        finish(experiments::run_moment_estimate(x.setup.problem, x.setup.grid, x.paths, x.p, seed, ro));
    }

    json summary = json::array();
    json timings = json::object();
    const experiments::ExperimentReport* first_fail = nullptr;
    for (const auto& r : reports) {
        summary.push_back({{"name", r.name}, {"pass", r.pass}});
        timings[r.name] = r.runtime_seconds;
        if (!r.pass && !first_fail) first_fail = &r;
    }
    write_file(dir / "summary.json", json{{"reports", summary}, {"all_pass", first_fail == nullptr}}.dump(2) + "\n");
    write_file(dir / "timings.json", timings.dump(2) + "\n");
    if (first_fail) {
        out << "first failing report: report_" << first_fail->name << ".json\n";
        return experiment_failed;
    }
    return ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Truncated stable-noise heat equation: sampling, solving and verification"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--seed", seed, "override the master seed");
        sub->add_option("--out", out_dir, "override the output directory");
        sub->add_option("--threads", threads, "worker threads for Monte Carlo paths")->check(CLI::PositiveNumber);
    };
    auto* sample = app.add_subcommand("sample-noise", "sample one noise realization");
    auto* solve = app.add_subcommand("solve", "solve on one noise realization");
    auto* verify = app.add_subcommand("verify", "run the configured experiments");
    for (auto* s : {sample, solve, verify}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : validation;
    }

    try {
        auto rc = config::load_config(config_path);
        auto* active = app.got_subcommand(sample) ? sample : app.got_subcommand(solve) ? solve : verify;
        if (active->count("--seed")) {
            rc.seed = seed;
            rc.effective["seed"] = seed;
        }
        if (active->count("--out")) {
            rc.output_dir = out_dir;
            rc.effective["output_dir"] = out_dir;
        }
        if (active->count("--threads")) {
            rc.threads = threads;
            rc.effective["threads"] = threads;
        }
        if (active == sample) return cmd_sample_noise(rc, out);
        if (active == solve) return cmd_solve(rc, out);
        return cmd_verify(rc, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.error_class());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return internal;
    }
}

}  // namespace stableheat::cli
