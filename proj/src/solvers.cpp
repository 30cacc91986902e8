#include "stableheat/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "stableheat/errors.hpp"
#include "stableheat/hash.hpp"

namespace stableheat::solvers {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double grid_time(const noise::SpaceTimeDomain& dom, const GridSpec& g, int i) {
    return dom.T * i / g.n_t;
}

// Step l with t_l <= tau < t_{l+1}; n_t when tau lies at or beyond T.
int step_of(double tau, const noise::SpaceTimeDomain& dom, const GridSpec& g) {
    int l = static_cast<int>(std::floor(tau / dom.T * g.n_t));
    l = std::clamp(l, 0, g.n_t);
    while (l > 0 && grid_time(dom, g, l) > tau) --l;
    while (l < g.n_t && grid_time(dom, g, l + 1) <= tau) ++l;
    return l;
}

// Linear interpolation of node values at x.
double interp(const double* row, int n_x, double dx, double x) {
    const double s = x / dx;
    int k = std::clamp(static_cast<int>(std::floor(s)), 0, n_x - 1);
    const double w = s - k;
    return (1.0 - w) * row[k] + w * row[k + 1];
}

void check_noise_matches(const ProblemSpec& p, const noise::NoiseRealization& n) {
    if (!(p.params == n.params)) throw ParameterError("noise was sampled with different stable parameters");
    if (!(p.trunc == n.truncation)) throw ParameterError("noise was sampled with a different truncation");
    if (!(p.dom == n.domain)) throw ParameterError("noise was sampled on a different domain");
}

struct Event {
    noise::JumpRecord rec;
    int step = 0;
};

std::vector<Event> horizon_events(const noise::NoiseRealization& noise, const GridSpec& g) {
    std::vector<Event> out;
    for (const auto& r : noise::impulses(noise)) {
        const int l = step_of(r.tau, noise.domain, g);
        if (l < g.n_t) out.push_back({r, l});
    }
    return out;
}

}  // namespace

void GridSpec::validate() const {
    if (n_t < 2 || n_x < 2) throw ParameterError("grid needs n_t >= 2 and n_x >= 2");
}

void ProblemSpec::validate(bool require_monotone) const {
    params.validate();
    trunc.validate();
    dom.validate();
    init.validate(dom.L);
    coefficients::AuditOptions opt;
    opt.horizon = dom.T;
    opt.length = dom.L;
    coefficients::validate_hypothesis(drift, false, opt);
    coefficients::validate_hypothesis(noise_coef, require_monotone, opt);
}

std::string ProblemSpec::describe() const {
    std::ostringstream os;
    os << "alpha=" << num(params.alpha) << ";c_plus=" << num(params.c_plus)
       << ";c_minus=" << num(params.c_minus) << ";K=" << num(trunc.big_cutoff)
       << ";eps=" << num(trunc.small_cutoff) << ";gauss=" << trunc.gaussian_correction
       << ";cells=" << trunc.correction_cells_t << "x" << trunc.correction_cells_x
       << ";T=" << num(dom.T) << ";L=" << num(dom.L) << ";f=" << drift.describe()
       << ";phi=" << noise_coef.describe() << ";u0=" << init.describe();
    return os.str();
}

std::string ProblemSpec::hash() const { return hex64(fnv1a64(describe())); }

// ---------------------------------------------------------------------------
// Mild solver
// ---------------------------------------------------------------------------

namespace {

class MildSolver {
public:
    MildSolver(const ProblemSpec& p, const noise::NoiseRealization& n, const GridSpec& g,
               const MildOptions& o)
        : prob_(p),
          grid_(g),
          opt_(o),
          ke_(p.dom.L, kernel::Method::automatic, 8, 128, o.kernel_abs_tol),
          nx_(g.n_x),
          ni_(g.n_x - 1),
          dt_(p.dom.T / g.n_t),
          dx_(p.dom.L / g.n_x),
          mu_(n.compensator_mu) {
        P_ = kernel::convolution_matrix(ke_, dt_, nx_);
        events_ = horizon_events(n, g);
        by_step_.assign(g.n_t, {});
        for (std::size_t j = 0; j < events_.size(); ++j) by_step_[events_[j].step].push_back(j);

        // Kernel row of each impulse at the next grid time.
        rows_.resize(events_.size());
        pairs_.resize(events_.size());
        for (std::size_t j = 0; j < events_.size(); ++j) {
            const auto& e = events_[j];
            const double lag = time(e.step + 1) - e.rec.tau;
            auto& r = rows_[j];
            r.assign(nx_ + 1, 0.0);
            for (int k = 1; k < nx_; ++k) r[k] = std::max(0.0, ke_.eval(lag, space(k), e.rec.x));
        }
        // Exact kernel between impulses sharing a step, earlier to later.
        for (const auto& ids : by_step_)
            for (std::size_t a = 0; a < ids.size(); ++a)
                for (std::size_t b = 0; b < a; ++b) {
                    const auto& ej = events_[ids[a]].rec;
                    const auto& ei = events_[ids[b]].rec;
                    if (ei.tau < ej.tau)
                        pairs_[ids[a]].push_back(
                            {ids[b], std::max(0.0, ke_.eval(ej.tau - ei.tau, ej.x, ei.x))});
                }
    }

    GridSolution run() {
        GridSolution sol;
        sol.grid = grid_;
        sol.problem = prob_;
        sol.solver_tag = "mild";
        sol.values.assign(static_cast<std::size_t>(grid_.n_t + 1) * (nx_ + 1), 0.0);
        for (int k = 1; k < nx_; ++k) sol.values[k] = prob_.init(space(k));
        ell_.assign(events_.size(), 0.0);

        int w = 0;
        while (w < grid_.n_t) {
            int len = std::min(opt_.window_steps, grid_.n_t - w);
            WindowResult res;
            for (;;) {
                res = window(sol, w, len);
                const bool accept = res.converged && (res.ratio < opt_.halving_ratio || len == 1);
                if (accept) break;
                if (len == 1) {
                    std::ostringstream msg;
                    msg << "Picard iteration did not converge on window [t=" << num(time(w))
                        << ", t=" << num(time(w + 1)) << "] after " << res.iterations
                        << " iterations; observed contraction ratio " << num(res.ratio);
                    throw NonContractionError(msg.str());
                }
                len /= 2;
            }
            for (int s = 1; s <= len; ++s)
                std::copy(res.U[s].begin(), res.U[s].end(),
                          sol.values.begin() + static_cast<std::ptrdiff_t>(w + s) * (nx_ + 1));
            for (std::size_t q = 0; q < res.ids.size(); ++q) ell_[res.ids[q]] = res.ell[q];
            sol.window_start.push_back(w);
            sol.window_steps.push_back(len);
            sol.picard_iterations.push_back(res.iterations);
            sol.contraction_ratios.push_back(res.ratio);
            w += len;
        }
        sol.impulses.reserve(events_.size());
        for (std::size_t j = 0; j < events_.size(); ++j)
            sol.impulses.push_back({events_[j].rec.tau, events_[j].rec.x, events_[j].rec.z, ell_[j]});
        return sol;
    }

private:
    struct WindowResult {
        bool converged = false;
        int iterations = 0;
        double ratio = 0.0;
        std::vector<std::vector<double>> U;
        std::vector<std::size_t> ids;
        std::vector<double> ell;
    };

    double time(int i) const { return grid_time(prob_.dom, grid_, i); }
    double space(int k) const { return prob_.dom.L * k / nx_; }

    void apply_P(const std::vector<double>& in, std::vector<double>& out) const {
        out.assign(nx_ + 1, 0.0);
        for (int i = 0; i < ni_; ++i) {
            const double* Pi = P_.data() + static_cast<std::size_t>(i) * ni_;
            double s = 0.0;
            for (int j = 0; j < ni_; ++j) s += Pi[j] * in[j + 1];
            out[i + 1] = s;
        }
    }

    WindowResult window(const GridSolution& sol, int w, int len) const {
        WindowResult r;
        std::vector<double> start(sol.row(w), sol.row(w) + nx_ + 1);
        r.U.assign(len + 1, start);
        for (int s = 0; s < len; ++s)
            for (std::size_t j : by_step_[w + s]) r.ids.push_back(j);
        std::vector<std::size_t> local(events_.size(), 0);
        for (std::size_t q = 0; q < r.ids.size(); ++q) local[r.ids[q]] = q;

        std::vector<double> ell(r.ids.size()), ell_new(r.ids.size()), c(r.ids.size());
        for (std::size_t q = 0; q < r.ids.size(); ++q)
            ell[q] = interp(start.data(), nx_, dx_, events_[r.ids[q]].rec.x);

        std::vector<std::vector<double>> Y(len + 1);
        std::vector<double> base(nx_ + 1, 0.0), q_row;
        std::vector<double> incs;
        const auto& f = prob_.drift;
        const auto& phi = prob_.noise_coef;

        for (int it = 1; it <= opt_.max_iter; ++it) {
            for (std::size_t q = 0; q < r.ids.size(); ++q) {
                const auto& e = events_[r.ids[q]].rec;
                c[q] = phi(e.tau, e.x, ell[q]) * e.z;
            }
            Y[0] = start;
            for (int s = 0; s < len; ++s) {
                const int l = w + s;
                const double tl = time(l);
                const auto& Ul = r.U[s];
                for (int k = 1; k < nx_; ++k) {
                    const double x = space(k);
                    base[k] = Y[s][k] + dt_ * (f(tl, x, Ul[k]) - mu_ * phi(tl, x, Ul[k]));
                }
                apply_P(base, q_row);
                for (std::size_t j : by_step_[l]) {
                    const auto& e = events_[j].rec;
                    const double theta = (e.tau - tl) / dt_;
                    double acc = (1.0 - theta) * interp(Y[s].data(), nx_, dx_, e.x) +
                                 theta * interp(q_row.data(), nx_, dx_, e.x);
                    for (const auto& [i, kij] : pairs_[j]) acc += kij * c[local[i]];
                    ell_new[local[j]] = acc;
                }
                for (std::size_t j : by_step_[l]) {
                    const double cj = c[local[j]];
                    if (cj == 0.0) continue;
                    const auto& gj = rows_[j];
                    for (int k = 1; k < nx_; ++k) q_row[k] += cj * gj[k];
                }
                Y[s + 1] = q_row;
            }

            double inc = 0.0;
            for (int s = 1; s <= len; ++s)
                for (int k = 1; k < nx_; ++k) {
                    const double v = Y[s][k];
                    if (!std::isfinite(v)) {
                        std::ostringstream msg;
                        msg << "non-finite solution value at t=" << num(time(w + s))
                            << " x=" << num(space(k)) << " (window starting t=" << num(time(w)) << ")";
                        throw BlowUpError(msg.str());
                    }
                    inc = std::max(inc, std::abs(v - r.U[s][k]));
                }
            for (std::size_t q = 0; q < r.ids.size(); ++q) {
                if (!std::isfinite(ell_new[q])) throw BlowUpError("non-finite left limit at an impulse");
                inc = std::max(inc, std::abs(ell_new[q] - ell[q]));
            }
            for (int s = 1; s <= len; ++s) r.U[s].swap(Y[s]);
            ell.swap(ell_new);
            incs.push_back(inc);
            r.iterations = it;
            if (inc <= opt_.tol) {
                r.converged = true;
                break;
            }
        }
        // Geometric mean of the increment ratios up to the last non-zero increment.
        std::size_t last = 0;
        for (std::size_t i = 0; i < incs.size(); ++i)
            if (incs[i] > 0.0) last = i;
        r.ratio = (last > 0 && incs[0] > 0.0) ? std::pow(incs[last] / incs[0], 1.0 / last) : 0.0;
        r.ell = std::move(ell);
        return r;
    }

    const ProblemSpec& prob_;
    GridSpec grid_;
    MildOptions opt_;
    kernel::KernelEvaluator ke_;
    int nx_;
    int ni_;
    double dt_;
    double dx_;
    double mu_;
    std::vector<double> P_;
    std::vector<Event> events_;
    std::vector<std::vector<std::size_t>> by_step_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::vector<std::pair<std::size_t, double>>> pairs_;
    std::vector<double> ell_;
};

}  // namespace

GridSolution solve_mild(const ProblemSpec& problem, const noise::NoiseRealization& noise,
                        const GridSpec& grid, const MildOptions& opt) {
    grid.validate();
    problem.validate(false);
    check_noise_matches(problem, noise);
    if (!(opt.tol > 0.0)) throw ParameterError("Picard tolerance must be positive");
    if (opt.max_iter < 1) throw ParameterError("max_iter must be >= 1");
    if (opt.window_steps < 1) throw ParameterError("window_steps must be >= 1");
    MildSolver s(problem, noise, grid, opt);
    GridSolution sol = s.run();
    sol.noise_seed = noise.seed;
    return sol;
}

GridSolution solve_mild(const ProblemSpec& problem, const noise::NoiseRealization& noise,
                        const GridSpec& grid, double tol, int max_iter) {
    MildOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    return solve_mild(problem, noise, grid, opt);
}

// ---------------------------------------------------------------------------
// Galerkin solver
// ---------------------------------------------------------------------------

double SpectralSolution::basis(int n, double x) const {
    const double L = problem.dom.L;
    return std::sqrt(2.0 / L) * std::sin(n * kPi * x / L);
}

double SpectralSolution::rate(int n) const {
    const double L = problem.dom.L;
    return n * n * kPi * kPi / (2.0 * L * L);
}

double ProjectedNoise::value(int n, double t) const {
    double v = drift[n - 1] * t;
    for (std::size_t j = 0; j < times.size() && times[j] <= t; ++j) v += increment(j, n);
    return v;
}

ProjectedNoise project_noise(const noise::NoiseRealization& noise, int m) {
    if (m < 1) throw ParameterError("project_noise needs m >= 1");
    ProjectedNoise pn;
    pn.m = m;
    const double L = noise.domain.L;
    pn.length = L;
    const double norm = std::sqrt(2.0 / L);
    for (const auto& r : noise::impulses(noise)) {
        pn.times.push_back(r.tau);
        for (int n = 1; n <= m; ++n) pn.increments.push_back(norm * std::sin(n * kPi * r.x / L) * r.z);
    }
    pn.drift.resize(m);
    for (int n = 1; n <= m; ++n) {
        const double integral = (n % 2 == 1) ? std::sqrt(2.0 * L) * 2.0 / (n * kPi) : 0.0;
        pn.drift[n - 1] = -noise.compensator_mu * integral;
    }
    return pn;
}

SpectralSolution solve_galerkin(const ProblemSpec& problem, const noise::NoiseRealization& noise,
                                int m, const GridSpec& grid) {
    if (m < 1) throw ParameterError("Galerkin solver needs m >= 1");
    grid.validate();
    problem.validate(false);
    check_noise_matches(problem, noise);

    const double L = problem.dom.L;
    const int nq = grid.n_x;
    const double h = L / nq;
    const double norm = std::sqrt(2.0 / L);

    // Basis at cell midpoints, E[n][q].
    std::vector<double> E(static_cast<std::size_t>(m) * nq), yq(nq);
    for (int q = 0; q < nq; ++q) yq[q] = (q + 0.5) * h;
    for (int n = 1; n <= m; ++n)
        for (int q = 0; q < nq; ++q) E[(n - 1) * nq + q] = norm * std::sin(n * kPi * yq[q] / L);
    std::vector<double> lambda(m);
    for (int n = 1; n <= m; ++n) lambda[n - 1] = n * n * kPi * kPi / (2.0 * L * L);

    const ProjectedNoise pn = project_noise(noise, m);
    std::vector<double> comp(nq, 0.0);  // -mu P_m 1 at the midpoints
    for (int n = 1; n <= m; ++n)
        for (int q = 0; q < nq; ++q) comp[q] += pn.drift[n - 1] * E[(n - 1) * nq + q];

    SpectralSolution sol;
    sol.m = m;
    sol.grid = grid;
    sol.problem = problem;
    sol.noise_seed = noise.seed;
    sol.coeffs.assign(static_cast<std::size_t>(grid.n_t + 1) * m, 0.0);

    std::vector<double> a(m, 0.0), u(nq), work(nq), D(m);
    for (int n = 0; n < m; ++n) {
        double s = 0.0;
        for (int q = 0; q < nq; ++q) s += problem.init(yq[q]) * E[n * nq + q];
        a[n] = s * h;
    }
    std::copy(a.begin(), a.end(), sol.coeffs.begin());

    auto synth = [&] {
        for (int q = 0; q < nq; ++q) {
            double s = 0.0;
            for (int n = 0; n < m; ++n) s += a[n] * E[n * nq + q];
            u[q] = s;
        }
    };
    auto project = [&](const std::vector<double>& g, std::vector<double>& out) {
        for (int n = 0; n < m; ++n) {
            double s = 0.0;
            for (int q = 0; q < nq; ++q) s += g[q] * E[n * nq + q];
            out[n] = s * h;
        }
    };
    auto check = [&](double t) {
        for (double v : a)
            if (!std::isfinite(v)) throw BlowUpError("non-finite Galerkin coefficient at t=" + num(t));
    };
    // Exponential Euler with the drift frozen at the left end.
    auto advance = [&](double t0, double t1) {
        const double dt = t1 - t0;
        if (!(dt > 0.0)) return;
        synth();
        for (int q = 0; q < nq; ++q)
            work[q] = problem.drift(t0, yq[q], u[q]) + problem.noise_coef(t0, yq[q], u[q]) * comp[q];
        project(work, D);
        for (int n = 0; n < m; ++n) {
            const double z = lambda[n] * dt;
            a[n] = std::exp(-z) * a[n] + (-std::expm1(-z) / lambda[n]) * D[n];
        }
        check(t1);
    };

    const auto events = horizon_events(noise, grid);
    std::size_t next = 0;
    double t = 0.0;
    std::vector<double> dl(m);
    for (int l = 0; l < grid.n_t; ++l) {
        const double t_next = grid_time(problem.dom, grid, l + 1);
        for (; next < events.size() && events[next].step == l; ++next) {
            const auto& e = events[next].rec;
            advance(t, e.tau);
            t = std::max(t, e.tau);
            synth();
            double left = 0.0;
            for (int n = 0; n < m; ++n) left += a[n] * norm * std::sin((n + 1) * kPi * e.x / L);
            sol.impulses.push_back({e.tau, e.x, e.z, left});
            for (int n = 0; n < m; ++n) dl[n] = norm * std::sin((n + 1) * kPi * e.x / L) * e.z;
            for (int q = 0; q < nq; ++q) {
                double s = 0.0;
                for (int n = 0; n < m; ++n) s += dl[n] * E[n * nq + q];
                work[q] = problem.noise_coef(e.tau, yq[q], u[q]) * s;
            }
            project(work, D);
            for (int n = 0; n < m; ++n) a[n] += D[n];
            check(e.tau);
        }
        advance(t, t_next);
        t = t_next;
        std::copy(a.begin(), a.end(), sol.coeffs.begin() + static_cast<std::ptrdiff_t>(l + 1) * m);
    }
    return sol;
}

GridSolution spectral_to_grid(const SpectralSolution& sol, const GridSpec& grid) {
    grid.validate();
    if (grid.n_t != sol.grid.n_t)
        throw ParameterError("synthesis grid must have the solution's time steps");
    GridSolution out;
    out.grid = grid;
    out.problem = sol.problem;
    out.solver_tag = "galerkin(m=" + std::to_string(sol.m) + ")";
    out.impulses = sol.impulses;
    out.noise_seed = sol.noise_seed;
    const int nx = grid.n_x;
    out.values.assign(static_cast<std::size_t>(grid.n_t + 1) * (nx + 1), 0.0);
    std::vector<double> B(static_cast<std::size_t>(sol.m) * (nx + 1), 0.0);
    for (int n = 1; n <= sol.m; ++n)
        for (int k = 1; k < nx; ++k) B[(n - 1) * (nx + 1) + k] = sol.basis(n, out.space(k));
    for (int i = 0; i <= grid.n_t; ++i)
        for (int k = 1; k < nx; ++k) {
            double s = 0.0;
            for (int n = 1; n <= sol.m; ++n) s += sol.coeff(i, n) * B[(n - 1) * (nx + 1) + k];
            out.values[static_cast<std::size_t>(i) * (nx + 1) + k] = s;
        }
    return out;
}

std::vector<double> project_to_modes(const double* row, int n_x, int m, double length) {
    std::vector<double> a(m, 0.0);
    const double dx = length / n_x;
    const double norm = std::sqrt(2.0 / length);
    for (int n = 1; n <= m; ++n) {
        double s = 0.0;
        for (int k = 1; k < n_x; ++k) s += row[k] * norm * std::sin(n * kPi * k / n_x);
        a[n - 1] = s * dx;
    }
    return a;
}

TestFunction default_test_function(double length) {
    const double c = kPi / length;
    TestFunction tf;
    tf.value = [c](double x) {
        const double s = std::sin(c * x);
        return s * s * s;
    };
    tf.first = [c](double x) {
        const double s = std::sin(c * x);
        return 3.0 * c * s * s * std::cos(c * x);
    };
    tf.second = [c](double x) {
        const double s = std::sin(c * x);
        const double co = std::cos(c * x);
        return c * c * (6.0 * s * co * co - 3.0 * s * s * s);
    };
    return tf;
}

double weak_form_residual(const GridSolution& sol, const noise::NoiseRealization& noise,
                          const TestFunction& test_fn, double t) {
    const auto& dom = sol.problem.dom;
    const double L = dom.L;
    for (double x : {0.0, L})
        if (std::abs(test_fn.value(x)) > 1e-10 || std::abs(test_fn.first(x)) > 1e-10)
            throw ParameterError("test function must vanish with its derivative at 0 and L");
    const int n_t = sol.grid.n_t, nx = sol.grid.n_x;
    const double dt = dom.T / n_t, dx = L / nx;
    const double steps = t / dt;
    const int I = static_cast<int>(std::llround(steps));
    if (I < 0 || I > n_t || std::abs(steps - I) > 1e-9)
        throw ParameterError("weak-form residual is evaluated at grid times only");

    std::vector<double> psi(nx + 1), psi2(nx + 1);
    for (int k = 0; k <= nx; ++k) {
        psi[k] = test_fn.value(sol.space(k));
        psi2[k] = test_fn.second(sol.space(k));
    }
    const double mu = noise.compensator_mu;
    auto pairing = [&](int i) {
        const double* u = sol.row(i);
        const double ti = sol.time(i);
        double up = 0.0, lin = 0.0;
        for (int k = 0; k <= nx; ++k) {
            const double w = (k == 0 || k == nx) ? 0.5 * dx : dx;
            const double x = sol.space(k);
            up += w * u[k] * psi[k];
            lin += w * (0.5 * u[k] * psi2[k] +
                        (sol.problem.drift(ti, x, u[k]) - mu * sol.problem.noise_coef(ti, x, u[k])) * psi[k]);
        }
        return std::pair{up, lin};
    };

    double integral = 0.0;
    std::pair<double, double> prev = pairing(0);
    const double start = prev.first;
    for (int i = 1; i <= I; ++i) {
        const auto cur = pairing(i);
        integral += 0.5 * dt * (prev.second + cur.second);
        prev = cur;
    }
    const double end = prev.first;

    const auto events = horizon_events(noise, sol.grid);
    const bool have_limits = sol.impulses.size() == events.size();
    const double tI = sol.time(I);
    double jumps = 0.0;
    for (std::size_t j = 0; j < events.size(); ++j) {
        const auto& e = events[j].rec;
        if (!(e.tau < tI)) break;
        double left = 0.0;
        if (have_limits) {
            left = sol.impulses[j].left_limit;
        } else {
            const int l = events[j].step;
            left = interp(sol.row(l), nx, dx, e.x);
        }
        jumps += sol.problem.noise_coef(e.tau, e.x, left) * test_fn.value(e.x) * e.z;
    }
    return std::abs(end - start - integral - jumps);
}

double h_norm(const double* row, int n_x, double length) {
    return std::sqrt(lp_norm_pow(row, n_x, length, 2.0));
}

double lp_norm_pow(const double* row, int n_x, double length, double p) {
    const double dx = length / n_x;
    double s = 0.0;
    for (int k = 0; k <= n_x; ++k) {
        const double w = (k == 0 || k == n_x) ? 0.5 * dx : dx;
        s += w * (p == 2.0 ? row[k] * row[k] : std::pow(std::abs(row[k]), p));
    }
    return s;
}

double sup_distance(const GridSolution& a, const GridSolution& b) {
    if (!(a.grid == b.grid)) throw ParameterError("solutions live on different grids");
    double d = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d;
}

void write_grid_csv(std::ostream& os, const GridSolution& sol) {
    char buf[40];
    os << "t";
    for (int k = 0; k <= sol.grid.n_x; ++k) {
        std::snprintf(buf, sizeof buf, ",%.17g", sol.space(k));
        os << buf;
    }
    os << '\n';
    for (int i = 0; i <= sol.grid.n_t; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", sol.time(i));
        os << buf;
        for (int k = 0; k <= sol.grid.n_x; ++k) {
            std::snprintf(buf, sizeof buf, ",%.17g", sol.at(i, k));
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace stableheat::solvers
