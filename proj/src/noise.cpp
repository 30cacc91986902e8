#include "stableheat/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "stableheat/errors.hpp"
#include "stableheat/rng.hpp"

namespace stableheat::noise {

namespace {

constexpr std::uint64_t kCorrectionStream = 0x5851f42d4c957f2dULL;

bool finite(double v) { return std::isfinite(v); }

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void StableParams::validate() const {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw ParameterError("alpha must lie in (1,2), got " + fmt17(alpha));
    if (!(c_plus >= 0.0) || !(c_minus >= 0.0) || !finite(c_plus) || !finite(c_minus))
        throw ParameterError("tail weights must be finite and non-negative");
    if (std::abs(c_plus + c_minus - 1.0) > 1e-12)
        throw ParameterError("tail weights must sum to 1, got " + fmt17(c_plus + c_minus));
}

void TruncationSpec::validate() const {
    if (!(small_cutoff > 0.0) || !finite(small_cutoff))
        throw ParameterError("small cutoff must be positive and finite");
    if (!(big_cutoff > small_cutoff) || !finite(big_cutoff))
        throw ParameterError("need 0 < eps < K < inf, got eps=" + fmt17(small_cutoff) +
                             " K=" + fmt17(big_cutoff));
    if (correction_cells_t < 1 || correction_cells_x < 1)
        throw ParameterError("correction lattice needs at least one cell per axis");
}

void SpaceTimeDomain::validate() const {
    if (!(T > 0.0) || !finite(T)) throw ParameterError("horizon T must be positive and finite");
    if (!(L > 0.0) || !finite(L)) throw ParameterError("length L must be positive and finite");
}

double expected_jump_count(const StableParams& p, const TruncationSpec& tr,
                           const SpaceTimeDomain& dom) {
    p.validate();
    tr.validate();
    dom.validate();
    const double a = p.alpha;
    return dom.T * dom.L * (std::pow(tr.small_cutoff, -a) - std::pow(tr.big_cutoff, -a)) / a;
}

NoiseRealization sample_noise(const StableParams& p, const TruncationSpec& tr,
                              const SpaceTimeDomain& dom, std::uint64_t seed) {
    const double lambda = expected_jump_count(p, tr, dom);

    NoiseRealization r;
    r.params = p;
    r.truncation = tr;
    r.domain = dom;
    r.seed = seed;
    r.compensator_mu = compensator_drift(p, tr);

    std::mt19937_64 eng(splitmix64(seed));
    long long count = 0;
    if (lambda > 0.0) count = std::poisson_distribution<long long>(lambda)(eng);

    const double a = std::pow(tr.small_cutoff, -p.alpha);
    const double b = std::pow(tr.big_cutoff, -p.alpha);
    const double inv = -1.0 / p.alpha;
    r.jumps.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
        JumpRecord j;
        j.tau = dom.T * uniform_open1(eng);
        j.x = dom.L * uniform_open1(eng);
        const bool positive = uniform_open1(eng) < p.c_plus;
        const double u = uniform_open0(eng);
        double mag = std::pow(a - u * (a - b), inv);
        // Rounding guards for the endpoints of (eps, K].
        if (mag <= tr.small_cutoff) mag = std::nextafter(tr.small_cutoff, tr.big_cutoff);
        if (mag > tr.big_cutoff) mag = tr.big_cutoff;
        j.z = positive ? mag : -mag;
        r.jumps.push_back(j);
    }
    std::stable_sort(r.jumps.begin(), r.jumps.end(),
                     [](const JumpRecord& l, const JumpRecord& rr) { return l.tau < rr.tau; });

    if (tr.gaussian_correction) {
        std::mt19937_64 geng(splitmix64(seed ^ kCorrectionStream));
        std::normal_distribution<double> normal(0.0, 1.0);
        const int nt = tr.correction_cells_t;
        const int nx = tr.correction_cells_x;
        const double dt = dom.T / nt;
        const double dx = dom.L / nx;
        const double sd = std::sqrt(small_jump_variance(p, tr.small_cutoff) * dt * dx);
        r.correction.reserve(static_cast<std::size_t>(nt) * nx);
        for (int i = 0; i < nt; ++i)
            for (int k = 0; k < nx; ++k)
                r.correction.push_back({(i + 0.5) * dt, (k + 0.5) * dx, sd * normal(geng)});
    }
    return r;
}

double compensator_drift(const StableParams& p, const TruncationSpec& tr) {
    p.validate();
    tr.validate();
    const double a = p.alpha;
    return (p.c_plus - p.c_minus) *
           (std::pow(tr.small_cutoff, 1.0 - a) - std::pow(tr.big_cutoff, 1.0 - a)) / (a - 1.0);
}

double levy_moment(const StableParams& p, double K, double power) {
    p.validate();
    if (!(K > 0.0)) throw ParameterError("cutoff K must be positive");
    if (!(power > p.alpha))
        throw DivergenceError("moment of order p <= alpha diverges at the origin (p=" +
                              fmt17(power) + ", alpha=" + fmt17(p.alpha) + ")");
    return std::pow(K, power - p.alpha) / (power - p.alpha);
}

double levy_moment_window(const StableParams& p, double eps, double K, double power) {
    const double upper = levy_moment(p, K, power);
    if (!(eps > 0.0) || !(eps < K)) throw ParameterError("need 0 < eps < K");
    return upper - std::pow(eps, power - p.alpha) / (power - p.alpha);
}

double small_jump_variance(const StableParams& p, double eps) {
    p.validate();
    if (!(eps > 0.0)) throw ParameterError("eps must be positive");
    return std::pow(eps, 2.0 - p.alpha) / (2.0 - p.alpha);
}

double stopping_time(const NoiseRealization& r, double K) {
    if (!(K > 0.0)) throw ParameterError("stopping level K must be positive");
    if (K > r.truncation.big_cutoff)
        throw UnobservableEventError("jumps above the sampled cutoff " +
                                     fmt17(r.truncation.big_cutoff) +
                                     " are not recorded; cannot observe level " + fmt17(K));
    for (const auto& j : r.jumps)
        if (std::abs(j.z) > K) return j.tau;
    return std::numeric_limits<double>::infinity();
}

double survival_probability(const StableParams& p, double K, const SpaceTimeDomain& dom) {
    p.validate();
    if (!(K > 0.0)) throw ParameterError("K must be positive");
    if (std::isinf(K)) return 1.0;
    return std::exp(-dom.T * dom.L * std::pow(K, -p.alpha) / p.alpha);
}

NoiseRealization restrict(const NoiseRealization& r, double K_new) {
    if (!(K_new > r.truncation.small_cutoff) || !(K_new <= r.truncation.big_cutoff))
        throw ParameterError("restriction level must lie in (eps, K], got " + fmt17(K_new));
    NoiseRealization out;
    out.params = r.params;
    out.truncation = r.truncation;
    out.truncation.big_cutoff = K_new;
    out.domain = r.domain;
    out.seed = r.seed;
    out.correction = r.correction;
    out.compensator_mu = compensator_drift(out.params, out.truncation);
    out.jumps.reserve(r.jumps.size());
    for (const auto& j : r.jumps)
        if (std::abs(j.z) <= K_new) out.jumps.push_back(j);
    return out;
}

std::vector<JumpRecord> impulses(const NoiseRealization& r) {
    std::vector<JumpRecord> out;
    out.reserve(r.jumps.size() + r.correction.size());
    std::merge(r.jumps.begin(), r.jumps.end(), r.correction.begin(), r.correction.end(),
               std::back_inserter(out),
               [](const JumpRecord& l, const JumpRecord& rr) { return l.tau < rr.tau; });
    return out;
}

namespace {

double midpoint(const Integrand& g, double t0, double t1, double L, int nt, int nx) {
    const double ht = (t1 - t0) / nt;
    const double hx = L / nx;
    double sum = 0.0;
    for (int i = 0; i < nt; ++i) {
        const double s = t0 + (i + 0.5) * ht;
        double row = 0.0;
        for (int k = 0; k < nx; ++k) row += g(s, (k + 0.5) * hx);
        sum += row;
    }
    return sum * ht * hx;
}

}  // namespace

double integrate(const NoiseRealization& r, const Integrand& g, double t_end,
                 const QuadratureOptions& q) {
    return integrate(r, g, 0.0, t_end, q);
}

double integrate(const NoiseRealization& r, const Integrand& g, double t_begin, double t_end,
                 const QuadratureOptions& q) {
    if (!(t_begin >= 0.0) || !(t_end >= t_begin) || !(t_end <= r.domain.T))
        throw ParameterError("integration window must satisfy 0 <= t_begin <= t_end <= T");
    if (q.n_t < 2 || q.n_x < 2 || q.refinement < 1 || !(q.rel_tol > 0.0))
        throw ParameterError("invalid quadrature options");

    auto inside = [&](double tau) {
        return (tau > t_begin || (t_begin == 0.0 && tau == 0.0)) && tau <= t_end;
    };
    double jumps = 0.0;
    for (const auto& j : r.jumps)
        if (inside(j.tau)) jumps += g(j.tau, j.x) * j.z;
    for (const auto& j : r.correction)
        if (inside(j.tau)) jumps += g(j.tau, j.x) * j.z;

    if (r.compensator_mu == 0.0 || t_end == t_begin) return jumps;

    const int nt = q.n_t * q.refinement;
    const int nx = q.n_x * q.refinement;
    const double fine = midpoint(g, t_begin, t_end, r.domain.L, nt, nx);
    const double coarse = midpoint(g, t_begin, t_end, r.domain.L, (nt + 1) / 2, (nx + 1) / 2);
    const double drift = r.compensator_mu * fine;
    const double est = std::abs(r.compensator_mu) * std::abs(fine - coarse) / 3.0;
    if (!std::isfinite(fine) || est > q.rel_tol * std::max(1.0, std::abs(drift))) {
        std::ostringstream msg;
        msg << "compensator quadrature not converged: fine(" << nt << "x" << nx
            << ")=" << fmt17(fine) << " coarse=" << fmt17(coarse) << " error estimate "
            << fmt17(est) << " exceeds " << fmt17(q.rel_tol);
        throw QuadratureError(msg.str());
    }
    return jumps - drift;
}

void write_noise(std::ostream& os, const NoiseRealization& r) {
    os << "# stableheat-noise v1\n";
    os << "# alpha=" << fmt17(r.params.alpha) << '\n';
    os << "# c_plus=" << fmt17(r.params.c_plus) << '\n';
    os << "# c_minus=" << fmt17(r.params.c_minus) << '\n';
    os << "# big_cutoff=" << fmt17(r.truncation.big_cutoff) << '\n';
    os << "# small_cutoff=" << fmt17(r.truncation.small_cutoff) << '\n';
    os << "# gaussian_correction=" << (r.truncation.gaussian_correction ? 1 : 0) << '\n';
    os << "# correction_cells_t=" << r.truncation.correction_cells_t << '\n';
    os << "# correction_cells_x=" << r.truncation.correction_cells_x << '\n';
    os << "# T=" << fmt17(r.domain.T) << '\n';
    os << "# L=" << fmt17(r.domain.L) << '\n';
    os << "# seed=" << r.seed << '\n';
    os << "# compensator_mu=" << fmt17(r.compensator_mu) << '\n';
    os << "# jumps=" << r.jumps.size() << '\n';
    os << "tau,x,z\n";
    for (const auto& j : r.jumps) os << fmt17(j.tau) << ',' << fmt17(j.x) << ',' << fmt17(j.z) << '\n';
    if (!r.correction.empty()) {
        os << "# correction=" << r.correction.size() << '\n';
        os << "tau,x,w\n";
        for (const auto& j : r.correction)
            os << fmt17(j.tau) << ',' << fmt17(j.x) << ',' << fmt17(j.z) << '\n';
    }
}

namespace {

JumpRecord parse_row(const std::string& line) {
    JumpRecord j;
    char c1 = 0, c2 = 0;
    std::istringstream in(line);
    if (!(in >> j.tau >> c1 >> j.x >> c2 >> j.z) || c1 != ',' || c2 != ',')
        throw ParameterError("malformed noise row: " + line);
    return j;
}

}  // namespace

NoiseRealization read_noise(std::istream& is) {
    std::map<std::string, std::string> header;
    NoiseRealization r;
    std::string line;
    std::vector<JumpRecord>* target = nullptr;
    std::size_t expected_jumps = 0, expected_correction = 0;
    bool saw_magic = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line == "# stableheat-noise v1") {
                saw_magic = true;
                continue;
            }
            const auto eq = line.find('=');
            if (line.size() < 3 || eq == std::string::npos)
                throw ParameterError("malformed header line: " + line);
            const std::string key = line.substr(2, eq - 2);
            const std::string val = line.substr(eq + 1);
            if (key == "correction") {
                expected_correction = std::stoull(val);
                target = nullptr;
            } else {
                header[key] = val;
            }
            continue;
        }
        if (line == "tau,x,z") {
            target = &r.jumps;
            continue;
        }
        if (line == "tau,x,w") {
            target = &r.correction;
            continue;
        }
        if (target == nullptr) throw ParameterError("data row outside a section: " + line);
        target->push_back(parse_row(line));
    }
    if (!saw_magic) throw ParameterError("missing noise format header");
    auto get = [&](const char* key) -> const std::string& {
        auto it = header.find(key);
        if (it == header.end()) throw ParameterError(std::string("missing header key ") + key);
        return it->second;
    };
    r.params = {std::stod(get("alpha")), std::stod(get("c_plus")), std::stod(get("c_minus"))};
    r.truncation.big_cutoff = std::stod(get("big_cutoff"));
    r.truncation.small_cutoff = std::stod(get("small_cutoff"));
    r.truncation.gaussian_correction = get("gaussian_correction") == "1";
    r.truncation.correction_cells_t = std::stoi(get("correction_cells_t"));
    r.truncation.correction_cells_x = std::stoi(get("correction_cells_x"));
    r.domain = {std::stod(get("T")), std::stod(get("L"))};
    r.seed = std::stoull(get("seed"));
    r.compensator_mu = std::stod(get("compensator_mu"));
    expected_jumps = std::stoull(get("jumps"));
    r.params.validate();
    r.truncation.validate();
    r.domain.validate();
    if (r.jumps.size() != expected_jumps || r.correction.size() != expected_correction)
        throw ParameterError("row count does not match header");
    if (r.compensator_mu != compensator_drift(r.params, r.truncation))
        throw ParameterError("compensator does not match the closed form for the header parameters");
    return r;
}

}  // namespace stableheat::noise
