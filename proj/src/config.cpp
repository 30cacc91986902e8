#include "stableheat/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "stableheat/errors.hpp"

namespace stableheat::config {

using nlohmann::json;
using coefficients::CoefficientSpec;
using coefficients::InitialCondition;

namespace {

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    require_object(j, where);
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
}

double get_num(const json& j, const char* key, double def, const std::string& where) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

double need_num(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing " + where + "." + key);
    return get_num(j, key, 0.0, where);
}

long long get_int(const json& j, const char* key, long long def, const std::string& where) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
    return v.get<long long>();
}

std::size_t get_count(const json& j, const char* key, std::size_t def, const std::string& where) {
    const long long v = get_int(j, key, static_cast<long long>(def), where);
    if (v < 1) throw ConfigError(where + "." + key + " must be >= 1");
    return static_cast<std::size_t>(v);
}

bool get_bool(const json& j, const char* key, bool def, const std::string& where) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(where + "." + key + " must be true or false");
    return v.get<bool>();
}

std::string get_str(const json& j, const char* key, const std::string& def, const std::string& where) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

const json& section(const json& j, const char* key) {
    static const json empty = json::object();
    return j.contains(key) ? j.at(key) : empty;
}

const char* kSetupKeys[] = {"noise", "domain", "grid", "drift", "noise_coefficient", "initial_condition"};

bool is_setup_key(const std::string& k) {
    for (const char* s : kSetupKeys)
        if (k == s) return true;
    return false;
}

Setup parse_setup(const json& j, const std::string& where) {
    Setup s;
    auto& p = s.problem;

    const auto& nz = section(j, "noise");
    const std::string wn = where + "noise";
    check_keys(nz, {"alpha", "c_plus", "c_minus", "small_cutoff", "big_cutoff", "gaussian_correction",
                    "correction_cells_t", "correction_cells_x"},
               wn);
    p.params.alpha = get_num(nz, "alpha", p.params.alpha, wn);
    p.params.c_plus = get_num(nz, "c_plus", p.params.c_plus, wn);
    p.params.c_minus = get_num(nz, "c_minus", p.params.c_minus, wn);
    p.trunc.small_cutoff = get_num(nz, "small_cutoff", p.trunc.small_cutoff, wn);
    p.trunc.big_cutoff = get_num(nz, "big_cutoff", p.trunc.big_cutoff, wn);
    p.trunc.gaussian_correction = get_bool(nz, "gaussian_correction", p.trunc.gaussian_correction, wn);
    p.trunc.correction_cells_t = static_cast<int>(get_int(nz, "correction_cells_t", p.trunc.correction_cells_t, wn));
    p.trunc.correction_cells_x = static_cast<int>(get_int(nz, "correction_cells_x", p.trunc.correction_cells_x, wn));

    const auto& dm = section(j, "domain");
    check_keys(dm, {"T", "L"}, where + "domain");
    p.dom.T = get_num(dm, "T", p.dom.T, where + "domain");
    p.dom.L = get_num(dm, "L", p.dom.L, where + "domain");

    const auto& gr = section(j, "grid");
    check_keys(gr, {"n_t", "n_x"}, where + "grid");
    s.grid.n_t = static_cast<int>(get_int(gr, "n_t", s.grid.n_t, where + "grid"));
    s.grid.n_x = static_cast<int>(get_int(gr, "n_x", s.grid.n_x, where + "grid"));

    p.params.validate();
    p.trunc.validate();
    p.dom.validate();
    s.grid.validate();

    if (j.contains("drift")) p.drift = parse_coefficient(j.at("drift"), p.dom.L);
    if (j.contains("noise_coefficient")) p.noise_coef = parse_coefficient(j.at("noise_coefficient"), p.dom.L);
    p.init = j.contains("initial_condition") ? parse_initial_condition(j.at("initial_condition"), p.dom.L)
                                             : InitialCondition::sine_mode(1, 1.0, p.dom.L);
    p.init.validate(p.dom.L);
    return s;
}

json setup_json(const Setup& s) {
    const auto& p = s.problem;
    return {{"noise",
             {{"alpha", p.params.alpha},
              {"c_plus", p.params.c_plus},
              {"c_minus", p.params.c_minus},
              {"small_cutoff", p.trunc.small_cutoff},
              {"big_cutoff", p.trunc.big_cutoff},
              {"gaussian_correction", p.trunc.gaussian_correction},
              {"correction_cells_t", p.trunc.correction_cells_t},
              {"correction_cells_x", p.trunc.correction_cells_x}}},
            {"domain", {{"T", p.dom.T}, {"L", p.dom.L}}},
            {"grid", {{"n_t", s.grid.n_t}, {"n_x", s.grid.n_x}}},
            {"drift", to_json(p.drift)},
            {"noise_coefficient", to_json(p.noise_coef)},
            {"initial_condition", to_json(p.init)}};
}

// Splits an experiment section into its own keys and a setup merged over the base.
Setup experiment_setup(const json& base, const json& sec, const std::string& where) {
    json merged = base;
    for (const auto& [key, val] : sec.items()) {
        if (!is_setup_key(key)) continue;
        if (key == "noise" || key == "domain" || key == "grid") {
            if (!merged.contains(key)) merged[key] = json::object();
            merged[key].merge_patch(val);
        } else {
            merged[key] = val;  // coefficient objects are replaced, not merged
        }
    }
    return parse_setup(merged, where);
}

json own_keys(const json& sec) {
    json out = json::object();
    for (const auto& [key, val] : sec.items())
        if (!is_setup_key(key)) out[key] = val;
    return out;
}

std::optional<double> get_opt_num(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    return get_num(j, key, 0.0, where);
}

const char* method_name(SolverMethod m) {
    switch (m) {
        case SolverMethod::mild: return "mild";
        case SolverMethod::galerkin: return "galerkin";
        case SolverMethod::both: return "both";
    }
    return "mild";
}

}  // namespace

bool Experiments::empty() const {
    return !stopping_law && !truncated_moment && !comparison && !nonnegativity && !consistency &&
           !galerkin_convergence && !moment_estimate;
}

CoefficientSpec parse_coefficient(const json& j, double length) {
    require_object(j, "coefficient");
    if (!j.contains("family")) throw ConfigError("coefficient is missing its \"family\" name");
    const std::string f = get_str(j, "family", "", "coefficient");
    const std::string w = "coefficient " + f;
    if (f == "zero") {
        check_keys(j, {"family"}, w);
        return CoefficientSpec::zero();
    }
    if (f == "constant") {
        check_keys(j, {"family", "c"}, w);
        return CoefficientSpec::constant(need_num(j, "c", w));
    }
    if (f == "affine") {
        check_keys(j, {"family", "a", "b"}, w);
        return CoefficientSpec::affine(get_num(j, "a", 0.0, w), need_num(j, "b", w));
    }
    if (f == "clipped_linear") {
        check_keys(j, {"family", "slope", "cap"}, w);
        return CoefficientSpec::clipped_linear(need_num(j, "slope", w), need_num(j, "cap", w));
    }
    if (f == "sine_modulated") {
        check_keys(j, {"family", "amplitude", "omega", "mode"}, w);
        return CoefficientSpec::sine_modulated(need_num(j, "amplitude", w), need_num(j, "omega", w),
                                               static_cast<int>(get_int(j, "mode", 1, w)), length);
    }
    if (f == "shifted") {
        check_keys(j, {"family", "base", "delta"}, w);
        if (!j.contains("base")) throw ConfigError("missing " + w + ".base");
        return CoefficientSpec::shifted(parse_coefficient(j.at("base"), length), need_num(j, "delta", w));
    }
    throw ConfigError("unknown coefficient family \"" + f + "\"");
}

InitialCondition parse_initial_condition(const json& j, double length) {
    require_object(j, "initial_condition");
    if (!j.contains("family")) throw ConfigError("initial_condition is missing its \"family\" name");
    const std::string f = get_str(j, "family", "", "initial_condition");
    const std::string w = "initial_condition " + f;
    if (f == "zero") {
        check_keys(j, {"family"}, w);
        return InitialCondition::zero(length);
    }
    if (f == "constant") {
        check_keys(j, {"family", "c"}, w);
        return InitialCondition::constant(need_num(j, "c", w), length);
    }
    if (f == "sine_mode") {
        check_keys(j, {"family", "n", "amplitude"}, w);
        return InitialCondition::sine_mode(static_cast<int>(get_int(j, "n", 1, w)),
                                           get_num(j, "amplitude", 1.0, w), length);
    }
    if (f == "bump") {
        check_keys(j, {"family", "center", "width", "height"}, w);
        return InitialCondition::bump(need_num(j, "center", w), need_num(j, "width", w),
                                      get_num(j, "height", 1.0, w), length);
    }
    if (f == "tabulated") {
        check_keys(j, {"family", "values"}, w);
        if (!j.contains("values") || !j.at("values").is_array()) throw ConfigError(w + ".values must be an array");
        std::vector<double> v;
        for (const auto& x : j.at("values")) {
            if (!x.is_number()) throw ConfigError(w + ".values must hold numbers");
            v.push_back(x.get<double>());
        }
        return InitialCondition::tabulated(std::move(v), length);
    }
    throw ConfigError("unknown initial condition family \"" + f + "\"");
}

json to_json(const CoefficientSpec& c) {
    const auto& p = c.params();
    switch (c.family()) {
        case coefficients::Family::zero: return {{"family", "zero"}};
        case coefficients::Family::constant: return {{"family", "constant"}, {"c", p[0]}};
        case coefficients::Family::affine: return {{"family", "affine"}, {"a", p[0]}, {"b", p[1]}};
        case coefficients::Family::clipped_linear:
            return {{"family", "clipped_linear"}, {"slope", p[0]}, {"cap", p[1]}};
        case coefficients::Family::sine_modulated:
            return {{"family", "sine_modulated"}, {"amplitude", p[0]}, {"omega", p[1]},
                    {"mode", static_cast<int>(p[2])}};
        case coefficients::Family::shifted:
            return {{"family", "shifted"}, {"base", to_json(*c.base())}, {"delta", p[0]}};
    }
    return {};
}

json to_json(const InitialCondition& ic) {
    const auto& p = ic.params();
    switch (ic.family()) {
        case coefficients::IcFamily::zero: return {{"family", "zero"}};
        case coefficients::IcFamily::constant: return {{"family", "constant"}, {"c", p[0]}};
        case coefficients::IcFamily::sine_mode:
            return {{"family", "sine_mode"}, {"n", static_cast<int>(p[0])}, {"amplitude", p[1]}};
        case coefficients::IcFamily::bump:
            return {{"family", "bump"}, {"center", p[0]}, {"width", p[1]}, {"height", p[2]}};
        case coefficients::IcFamily::tabulated: return {{"family", "tabulated"}, {"values", p}};
    }
    return {};
}

RunConfig parse_config(const json& doc) {
    check_keys(doc, {"version", "seed", "threads", "output_dir", "noise", "domain", "grid", "drift",
                     "noise_coefficient", "initial_condition", "solver", "experiments"},
               "config");
    if (!doc.contains("version")) throw ConfigError("config is missing the required \"version\" field");
    if (get_int(doc, "version", 0, "config") != kVersion)
        throw ConfigError("unsupported config version; expected " + std::to_string(kVersion));

    RunConfig rc;
    if (doc.contains("seed")) {
        const auto& s = doc.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw ConfigError("config.seed must be a non-negative integer");
        rc.seed = s.get<std::uint64_t>();
    }
    rc.threads = static_cast<unsigned>(get_count(doc, "threads", 1, "config"));
    rc.output_dir = get_str(doc, "output_dir", rc.output_dir, "config");

    json base = json::object();
    for (const char* k : kSetupKeys)
        if (doc.contains(k)) base[k] = doc.at(k);
    rc.base = parse_setup(base, "");

    const auto& sv = section(doc, "solver");
    check_keys(sv, {"method", "modes", "tol", "max_iter", "window_steps"}, "solver");
    const std::string m = get_str(sv, "method", "mild", "solver");
    if (m == "mild") rc.solver.method = SolverMethod::mild;
    else if (m == "galerkin") rc.solver.method = SolverMethod::galerkin;
    else if (m == "both") rc.solver.method = SolverMethod::both;
    else throw ConfigError("solver.method must be mild, galerkin or both");
    rc.solver.modes = static_cast<int>(get_count(sv, "modes", 32, "solver"));
    rc.solver.mild.tol = get_num(sv, "tol", rc.solver.mild.tol, "solver");
    rc.solver.mild.max_iter = static_cast<int>(get_count(sv, "max_iter", 200, "solver"));
    rc.solver.mild.window_steps = static_cast<int>(get_count(sv, "window_steps", 8, "solver"));
    if (!(rc.solver.mild.tol > 0.0)) throw ConfigError("solver.tol must be positive");

    const auto& ex = section(doc, "experiments");
    check_keys(ex, {"stopping_law", "truncated_moment", "comparison", "nonnegativity", "consistency",
                    "galerkin_convergence", "moment_estimate"},
               "experiments");
    json eff_ex = json::object();
    auto& E = rc.experiments;
    for (const auto& [name, sec] : ex.items()) {
        const std::string w = "experiments." + name;
        require_object(sec, w);
        const Setup setup = experiment_setup(base, sec, w + ".");
        const json own = own_keys(sec);
        json e = setup_json(setup);
        if (name == "stopping_law") {
            check_keys(own, {"K", "k_max", "paths"}, w);
            StoppingLaw x{setup};
            x.K = get_num(own, "K", x.K, w);
            x.k_max = get_num(own, "k_max", x.k_max, w);
            x.paths = get_count(own, "paths", x.paths, w);
            e.update({{"K", x.K}, {"k_max", x.k_max}, {"paths", x.paths}});
            E.stopping_law = x;
        } else if (name == "truncated_moment") {
            check_keys(own, {"p", "paths"}, w);
            TruncatedMoment x{setup};
            x.p = get_num(own, "p", x.p, w);
            x.paths = get_count(own, "paths", x.paths, w);
            e.update({{"p", x.p}, {"paths", x.paths}});
            E.truncated_moment = x;
        } else if (name == "comparison") {
            check_keys(own, {"paths", "tolerance", "lower"}, w);
            Comparison x;
            x.setup = setup;
            x.lower = setup.problem;
            x.paths = get_count(own, "paths", x.paths, w);
            x.tolerance = get_opt_num(own, "tolerance", w);
            const auto& lo = section(own, "lower");
            check_keys(lo, {"drift", "initial_condition"}, w + ".lower");
            const double L = setup.problem.dom.L;
            if (lo.contains("drift")) x.lower.drift = parse_coefficient(lo.at("drift"), L);
            if (lo.contains("initial_condition")) {
                x.lower.init = parse_initial_condition(lo.at("initial_condition"), L);
                x.lower.init.validate(L);
            }
            e.update({{"paths", x.paths},
                      {"lower", {{"drift", to_json(x.lower.drift)}, {"initial_condition", to_json(x.lower.init)}}}});
            if (x.tolerance) e["tolerance"] = *x.tolerance;
            E.comparison = x;
        } else if (name == "nonnegativity") {
            check_keys(own, {"paths", "tolerance"}, w);
            Nonnegativity x;
            x.setup = setup;
            x.paths = get_count(own, "paths", x.paths, w);
            x.tolerance = get_opt_num(own, "tolerance", w);
            e["paths"] = x.paths;
            if (x.tolerance) e["tolerance"] = *x.tolerance;
            E.nonnegativity = x;
        } else if (name == "consistency") {
            check_keys(own, {"k_small", "k_large", "paths"}, w);
            Consistency x{setup};
            x.k_small = get_num(own, "k_small", x.k_small, w);
            x.k_large = get_num(own, "k_large", setup.problem.trunc.big_cutoff, w);
            x.paths = get_count(own, "paths", x.paths, w);
            e.update({{"k_small", x.k_small}, {"k_large", x.k_large}, {"paths", x.paths}});
            E.consistency = x;
        } else if (name == "galerkin_convergence") {
            check_keys(own, {"modes", "path"}, w);
            GalerkinConvergence x{setup};
            if (own.contains("modes")) {
                if (!own.at("modes").is_array()) throw ConfigError(w + ".modes must be an array");
                x.modes.clear();
                for (const auto& v : own.at("modes")) {
                    if (!v.is_number_integer()) throw ConfigError(w + ".modes must hold integers");
                    x.modes.push_back(v.get<int>());
                }
            }
            const long long path = get_int(own, "path", 0, w);
            if (path < 0) throw ConfigError(w + ".path must be >= 0");
            x.path = static_cast<std::uint64_t>(path);
            e.update({{"modes", x.modes}, {"path", x.path}});
            E.galerkin_convergence = x;
        } else if (name == "moment_estimate") {
            check_keys(own, {"p", "paths"}, w);
            MomentEstimate x{setup};
            x.p = get_num(own, "p", x.p, w);
            x.paths = get_count(own, "paths", x.paths, w);
            e.update({{"p", x.p}, {"paths", x.paths}});
            E.moment_estimate = x;
        }
        eff_ex[name] = e;
    }

    rc.effective = setup_json(rc.base);
    rc.effective["version"] = kVersion;
    rc.effective["seed"] = rc.seed;
    rc.effective["threads"] = rc.threads;
    rc.effective["output_dir"] = rc.output_dir;
    rc.effective["solver"] = {{"method", method_name(rc.solver.method)},
                              {"modes", rc.solver.modes},
                              {"tol", rc.solver.mild.tol},
                              {"max_iter", rc.solver.mild.max_iter},
                              {"window_steps", rc.solver.mild.window_steps}};
    rc.effective["experiments"] = eff_ex;
    return rc;
}

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace stableheat::config
