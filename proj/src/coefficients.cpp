#include "stableheat/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace stableheat::coefficients {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_finite(std::initializer_list<double> vs) {
    for (double v : vs)
        if (!std::isfinite(v)) throw ParameterError("coefficient parameters must be finite");
}

// Rounding slack for the audit inequalities.
double slack(double a, double b) { return 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::zero: return "zero";
        case Family::constant: return "constant";
        case Family::affine: return "affine";
        case Family::clipped_linear: return "clipped_linear";
        case Family::sine_modulated: return "sine_modulated";
        case Family::shifted: return "shifted";
    }
    return "?";
}

CoefficientSpec CoefficientSpec::zero() { return CoefficientSpec{}; }

CoefficientSpec CoefficientSpec::constant(double c) {
    require_finite({c});
    CoefficientSpec s;
    s.family_ = Family::constant;
    s.params_ = {c};
    s.growth_ = std::abs(c);
    return s;
}

CoefficientSpec CoefficientSpec::affine(double a, double b) {
    require_finite({a, b});
    CoefficientSpec s;
    s.family_ = Family::affine;
    s.params_ = {a, b};
    s.lipschitz_ = std::abs(b);
    s.growth_ = std::max(std::abs(a), std::abs(b));
    s.monotone_ = b >= 0.0;
    return s;
}

CoefficientSpec CoefficientSpec::clipped_linear(double slope, double cap) {
    require_finite({slope, cap});
    if (!(cap > 0.0)) throw ParameterError("clipped_linear needs cap > 0");
    CoefficientSpec s;
    s.family_ = Family::clipped_linear;
    s.params_ = {slope, cap};
    s.lipschitz_ = std::abs(slope);
    s.growth_ = std::min(std::abs(slope), cap);
    s.monotone_ = slope >= 0.0;
    return s;
}

CoefficientSpec CoefficientSpec::sine_modulated(double amplitude, double omega, int mode, double length) {
    require_finite({amplitude, omega, length});
    if (!(length > 0.0)) throw ParameterError("sine_modulated needs a positive length");
    CoefficientSpec s;
    s.family_ = Family::sine_modulated;
    s.params_ = {amplitude, omega, static_cast<double>(mode), length};
    s.lipschitz_ = 1.5 * std::abs(amplitude * omega);
    s.growth_ = 1.5 * std::abs(amplitude);
    s.monotone_ = amplitude == 0.0 || omega == 0.0;
    return s;
}

CoefficientSpec CoefficientSpec::shifted(const CoefficientSpec& base, double delta) {
    require_finite({delta});
    CoefficientSpec s;
    s.family_ = Family::shifted;
    s.params_ = {delta};
    s.base_ = std::make_shared<const CoefficientSpec>(base);
    s.lipschitz_ = base.lipschitz_;
    s.growth_ = base.growth_ + std::abs(delta);
    s.monotone_ = base.monotone_;
    return s;
}

double CoefficientSpec::operator()(double t, double x, double u) const {
    switch (family_) {
        case Family::zero: return 0.0;
        case Family::constant: return params_[0];
        case Family::affine: return params_[0] + params_[1] * u;
        case Family::clipped_linear: return std::clamp(params_[0] * u, -params_[1], params_[1]);
        case Family::sine_modulated: {
            const double mod = 1.0 + 0.5 * std::sin(params_[2] * kPi * x / params_[3]);
            return params_[0] * mod * std::sin(params_[1] * u);
        }
        case Family::shifted: return (*base_)(t, x, u) + params_[0];
    }
    return 0.0;
}

CoefficientSpec CoefficientSpec::with_declared(double lipschitz, double growth, bool monotone) const {
    CoefficientSpec s = *this;
    s.lipschitz_ = lipschitz;
    s.growth_ = growth;
    s.monotone_ = monotone;
    return s;
}

bool CoefficientSpec::vanishes_at_zero() const {
    switch (family_) {
        case Family::zero: return true;
        case Family::constant: return params_[0] == 0.0;
        case Family::affine: return params_[0] == 0.0;
        case Family::clipped_linear: return true;
        case Family::sine_modulated: return true;
        case Family::shifted: return params_[0] == 0.0 && base_->vanishes_at_zero();
    }
    return false;
}

std::string CoefficientSpec::describe() const {
    switch (family_) {
        case Family::zero: return "zero";
        case Family::constant: return "constant(c=" + num(params_[0]) + ")";
        case Family::affine: return "affine(a=" + num(params_[0]) + ",b=" + num(params_[1]) + ")";
        case Family::clipped_linear:
            return "clipped_linear(slope=" + num(params_[0]) + ",cap=" + num(params_[1]) + ")";
        case Family::sine_modulated:
            return "sine_modulated(amplitude=" + num(params_[0]) + ",omega=" + num(params_[1]) +
                   ",mode=" + num(params_[2]) + ",length=" + num(params_[3]) + ")";
        case Family::shifted: return "shifted(" + base_->describe() + ",delta=" + num(params_[0]) + ")";
    }
    return "?";
}

bool CoefficientSpec::operator==(const CoefficientSpec& o) const {
    if (family_ != o.family_ || params_ != o.params_ || lipschitz_ != o.lipschitz_ ||
        growth_ != o.growth_ || monotone_ != o.monotone_)
        return false;
    if (base_ && o.base_) return *base_ == *o.base_;
    return !base_ && !o.base_;
}

namespace {

struct Sample {
    double t, x, u, v;
};

// Points where the declared bounds are tight for each family.
std::vector<Sample> analytic_extremes(const CoefficientSpec& s, const AuditOptions& opt) {
    std::vector<Sample> out;
    const double T = opt.horizon;
    const double L = opt.length;
    for (double u : {0.0, 1.0, -1.0, 2.0, -2.0, 10.0, -10.0, 1e3, -1e3, 1e6, -1e6})
        out.push_back({0.0, 0.5 * L, u, u + 1e-7 * (1.0 + std::abs(u))});
    switch (s.family()) {
        case Family::clipped_linear: {
            const double slope = s.params()[0], cap = s.params()[1];
            if (slope != 0.0) {
                const double knee = cap / std::abs(slope);
                for (double k : {knee, -knee}) {
                    out.push_back({0.0, 0.5 * L, k - 1e-6 * (1 + knee), k});
                    out.push_back({0.0, 0.5 * L, k, k + 1e-6 * (1 + knee)});
                }
            }
            break;
        }
        case Family::sine_modulated: {
            const double omega = s.params()[1];
            const double mode = s.params()[2];
            const double len = s.params()[3];
            const double xpeak = mode != 0.0 ? len / (2.0 * std::abs(mode)) : 0.5 * len;
            if (omega != 0.0) {
                const double h = 1e-6 / std::abs(omega);
                for (int j = -2; j <= 2; ++j) {
                    const double u = j * kPi / omega;
                    out.push_back({0.0, xpeak, u - h, u + h});
                }
                out.push_back({0.0, xpeak, 0.5 * kPi / omega, 0.5 * kPi / omega + h});
            }
            break;
        }
        default: break;
    }
    (void)T;
    return out;
}

std::vector<Sample> random_samples(const AuditOptions& opt) {
    std::mt19937_64 eng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Sample> out;
    out.reserve(opt.samples);
    for (std::size_t i = 0; i < opt.samples; ++i) {
        Sample s;
        s.t = opt.horizon * unit(eng);
        s.x = opt.length * unit(eng);
        switch (i % 4) {
            case 0:
                s.u = -10.0 + 20.0 * unit(eng);
                s.v = -10.0 + 20.0 * unit(eng);
                break;
            case 1: {
                const double mag = std::pow(10.0, -6.0 + 12.0 * unit(eng));
                s.u = unit(eng) < 0.5 ? -mag : mag;
                const double mag2 = std::pow(10.0, -6.0 + 12.0 * unit(eng));
                s.v = unit(eng) < 0.5 ? -mag2 : mag2;
                break;
            }
            default: {
                // Nearby pairs act as finite differences.
                s.u = -10.0 + 20.0 * unit(eng);
                const double h = std::pow(10.0, -6.0 + 4.0 * unit(eng));
                s.v = s.u + (unit(eng) < 0.5 ? -h : h);
                break;
            }
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace

AuditReport audit(const CoefficientSpec& spec, bool require_monotone, const AuditOptions& opt) {
    AuditReport rep;
    const double Lb = spec.lipschitz_bound();
    const double Gb = spec.growth_bound();

    auto fail = [&](const Sample& s, const std::string& prop) {
        if (rep.pass) {
            rep.pass = false;
            rep.witness = Witness{s.t, s.x, s.u, s.v, prop};
        }
    };
    auto check = [&](const Sample& s) {
        const double fu = spec(s.t, s.x, s.u);
        const double fv = spec(s.t, s.x, s.v);
        if (!std::isfinite(fu) || !std::isfinite(fv)) return fail(s, "non-finite value");
        const double du = std::abs(s.u - s.v);
        const double df = std::abs(fu - fv);
        if (du > 0.0) rep.max_lipschitz_ratio = std::max(rep.max_lipschitz_ratio, df / du);
        rep.max_growth_ratio = std::max(rep.max_growth_ratio, std::abs(fu) / (1.0 + std::abs(s.u)));
        if (df > Lb * du * (1.0 + 1e-9) + slack(fu, fv))
            fail(s, "lipschitz bound " + num(Lb) + " exceeded");
        if (std::abs(fu) > Gb * (1.0 + std::abs(s.u)) * (1.0 + 1e-12) + 1e-300)
            fail(s, "growth bound " + num(Gb) + " exceeded");
        if (require_monotone) {
            const double lo = s.u < s.v ? fu : fv;
            const double hi = s.u < s.v ? fv : fu;
            if (lo > hi + slack(fu, fv)) fail(s, "not non-decreasing in u");
        }
        ++rep.samples;
    };

    for (const auto& s : analytic_extremes(spec, opt)) check(s);
    for (const auto& s : random_samples(opt)) check(s);

    // Monotone flag against a u-grid.
    if (rep.pass && (spec.monotone_in_u() || require_monotone)) {
        for (double x : {0.0, 0.25 * opt.length, 0.5 * opt.length, 0.75 * opt.length}) {
            double prev = spec(0.0, x, -10.0);
            for (int i = 1; i <= 2000 && rep.pass; ++i) {
                const double u = -10.0 + 0.01 * i;
                const double cur = spec(0.0, x, u);
                if (cur < prev - slack(cur, prev))
                    fail({0.0, x, u - 0.01, u}, "declared monotone but decreasing in u");
                prev = cur;
            }
        }
    }
    if (rep.pass && require_monotone && !spec.monotone_in_u())
        fail({0.0, 0.0, 0.0, 0.0}, "monotonicity required but not declared for " + spec.describe());
    return rep;
}

AuditReport validate_hypothesis(const CoefficientSpec& spec, bool require_monotone,
                                const AuditOptions& opt) {
    AuditReport rep = audit(spec, require_monotone, opt);
    if (!rep.pass) throw HypothesisError("hypothesis audit failed for " + spec.describe(), *rep.witness);
    return rep;
}

AuditReport dominates(const CoefficientSpec& f, const CoefficientSpec& g, std::size_t samples,
                      const AuditOptions& opt) {
    AuditReport rep;
    auto check = [&](double t, double x, double u) {
        const double fu = f(t, x, u);
        const double gu = g(t, x, u);
        ++rep.samples;
        if (!(fu <= gu + slack(fu, gu)) && rep.pass) {
            rep.pass = false;
            rep.witness = Witness{t, x, u, u, "f=" + num(fu) + " > g=" + num(gu)};
        }
    };
    for (double u : {0.0, 1.0, -1.0, 2.0, -2.0, 10.0, -10.0, 1e3, -1e3, 1e6, -1e6})
        for (double x : {0.0, 0.25 * opt.length, 0.5 * opt.length, opt.length}) check(0.0, x, u);
    AuditOptions o = opt;
    o.samples = samples;
    for (const auto& s : random_samples(o)) check(s.t, s.x, s.u);
    if (!rep.pass)
        throw OrderingError("ordering f <= g fails for f=" + f.describe() + ", g=" + g.describe(),
                            *rep.witness);
    return rep;
}

const char* to_string(IcFamily f) {
    switch (f) {
        case IcFamily::zero: return "zero";
        case IcFamily::constant: return "constant";
        case IcFamily::sine_mode: return "sine_mode";
        case IcFamily::bump: return "bump";
        case IcFamily::tabulated: return "tabulated";
    }
    return "?";
}

InitialCondition InitialCondition::zero(double length) {
    InitialCondition ic;
    ic.length_ = length;
    return ic;
}

InitialCondition InitialCondition::constant(double c, double length) {
    require_finite({c});
    InitialCondition ic;
    ic.family_ = IcFamily::constant;
    ic.params_ = {c};
    ic.length_ = length;
    return ic;
}

InitialCondition InitialCondition::sine_mode(int n, double amplitude, double length) {
    require_finite({amplitude});
    if (n < 1) throw ParameterError("sine_mode needs n >= 1");
    InitialCondition ic;
    ic.family_ = IcFamily::sine_mode;
    ic.params_ = {static_cast<double>(n), amplitude};
    ic.length_ = length;
    return ic;
}

InitialCondition InitialCondition::bump(double center, double width, double height, double length) {
    require_finite({center, width, height});
    if (!(width > 0.0)) throw ParameterError("bump needs width > 0");
    InitialCondition ic;
    ic.family_ = IcFamily::bump;
    ic.params_ = {center, width, height};
    ic.length_ = length;
    return ic;
}

InitialCondition InitialCondition::tabulated(std::vector<double> values, double length) {
    if (values.size() < 2) throw ParameterError("tabulated initial condition needs >= 2 values");
    for (double v : values) require_finite({v});
    InitialCondition ic;
    ic.family_ = IcFamily::tabulated;
    ic.params_ = std::move(values);
    ic.length_ = length;
    return ic;
}

double InitialCondition::operator()(double x) const {
    const double L = length_;
    switch (family_) {
        case IcFamily::zero: return 0.0;
        case IcFamily::constant: return (x <= 0.0 || x >= L) ? 0.0 : params_[0];
        case IcFamily::sine_mode:
            if (x <= 0.0 || x >= L) return 0.0;
            return params_[1] * std::sin(params_[0] * kPi * x / L);
        case IcFamily::bump: {
            const double r = (x - params_[0]) / params_[1];
            if (std::abs(r) >= 1.0) return 0.0;
            return params_[2] * std::exp(1.0 - 1.0 / (1.0 - r * r));
        }
        case IcFamily::tabulated: {
            const std::size_t n = params_.size() - 1;
            const double s = std::clamp(x / L, 0.0, 1.0) * static_cast<double>(n);
            const std::size_t i = std::min(static_cast<std::size_t>(s), n - 1);
            const double w = s - static_cast<double>(i);
            return (1.0 - w) * params_[i] + w * params_[i + 1];
        }
    }
    return 0.0;
}

void InitialCondition::validate(double length) const {
    if (length != length_)
        throw ParameterError("initial condition defined on length " + num(length_) +
                             " but domain has length " + num(length));
    if ((*this)(0.0) != 0.0 || (*this)(length_) != 0.0)
        throw ParameterError("initial condition must vanish at 0 and L: " + describe());
    for (int i = 0; i <= 1000; ++i)
        if (!std::isfinite((*this)(length_ * i / 1000.0)))
            throw ParameterError("initial condition has non-finite values: " + describe());
}

std::string InitialCondition::describe() const {
    switch (family_) {
        case IcFamily::zero: return "zero";
        case IcFamily::constant: return "constant(c=" + num(params_[0]) + ")";
        case IcFamily::sine_mode:
            return "sine_mode(n=" + num(params_[0]) + ",amplitude=" + num(params_[1]) + ")";
        case IcFamily::bump:
            return "bump(center=" + num(params_[0]) + ",width=" + num(params_[1]) +
                   ",height=" + num(params_[2]) + ")";
        case IcFamily::tabulated: {
            std::string s = "tabulated(";
            for (std::size_t i = 0; i < params_.size(); ++i) s += (i ? "," : "") + num(params_[i]);
            return s + ")";
        }
    }
    return "?";
}

}  // namespace stableheat::coefficients
