#include "stableheat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "stableheat/errors.hpp"

namespace stableheat::kernel {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Largest t in (0, hi] with pred(t) true, assuming pred is true below a single threshold.
template <class Pred>
double bisect_upper(Pred pred, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// Trapezoid rule refuses kernels narrower than this many panel widths:
// its aliasing error for a Gaussian of width s at spacing h is about 2 exp(-2 pi^2 s^2 / h^2).
double min_width_ratio(double tol) { return std::sqrt(std::log(2.0 / tol) / (2.0 * kPi * kPi)); }

void require_resolved(const KernelEvaluator& ke, double t, int n_quad, const char* who) {
    const double h = ke.length() / n_quad;
    const double ratio = std::sqrt(t) / h;
    const double need = min_width_ratio(ke.abs_tol());
    if (ratio < need)
        throw QuadratureError(std::string(who) + ": kernel width sqrt(t)=" + num(std::sqrt(t)) +
                              " spans " + num(ratio) + " panels, need at least " + num(need) +
                              " (t=" + num(t) + ", n_quad=" + std::to_string(n_quad) + ")");
}

}  // namespace

const char* to_string(Method m) {
    switch (m) {
        case Method::image_sum: return "image_sum";
        case Method::spectral: return "spectral";
        case Method::automatic: return "automatic";
    }
    return "?";
}

KernelEvaluator::KernelEvaluator(double length, Method method, int image_terms,
                                 int spectral_modes, double abs_tol)
    : L_(length),
      method_(method),
      image_terms_(image_terms),
      spectral_modes_(spectral_modes),
      abs_tol_(abs_tol) {
    if (!(L_ > 0.0) || !std::isfinite(L_)) throw ParameterError("kernel length must be positive");
    if (image_terms_ < 1) throw ParameterError("image_terms must be >= 1");
    if (spectral_modes_ < 1) throw ParameterError("spectral_modes must be >= 1");
    if (!(abs_tol_ > 0.0)) throw ParameterError("abs_tol must be positive");

    double hi = L_ * L_;
    while (image_bound(image_terms_, hi) <= abs_tol_ && hi < 1e8 * L_ * L_) hi *= 2.0;
    image_t_max_ = image_bound(image_terms_, hi) <= abs_tol_
                       ? std::numeric_limits<double>::infinity()
                       : bisect_upper([&](double t) { return image_bound(image_terms_, t) <= abs_tol_; },
                                      0.0, hi);

    double lo = L_ * L_;
    while (spectral_bound(spectral_modes_, lo) <= abs_tol_ && lo > 1e-12 * L_ * L_) lo *= 0.5;
    // Smallest t with a certified spectral tail.
    double a = lo, b = 2.0 * lo;
    while (spectral_bound(spectral_modes_, b) > abs_tol_) b *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        if (spectral_bound(spectral_modes_, mid) <= abs_tol_)
            b = mid;
        else
            a = mid;
    }
    spectral_t_min_ = b;

    if (method_ == Method::automatic &&
        !(image_t_max_ >= crossover() || spectral_t_min_ <= crossover()))
        throw ParameterError("truncation settings leave a gap around the crossover time");
}

double KernelEvaluator::crossover() const { return L_ * L_ / kPi; }

double KernelEvaluator::image_bound(int M, double t) const {
    const double c = L_ * L_ / t;
    const double denom = -std::expm1(-4.0 * M * c);
    return 2.0 / std::sqrt(2.0 * kPi * t) * std::exp(-2.0 * M * M * c) / denom;
}

double KernelEvaluator::spectral_bound(int N, double t) const {
    const double a = kPi * kPi * t / (2.0 * L_ * L_);
    const double n1 = N + 1.0;
    const double denom = -std::expm1(-2.0 * n1 * a);
    return 2.0 / L_ * std::exp(-n1 * n1 * a) / denom;
}

double KernelEvaluator::truncation_bound(Method m, double t) const {
    if (m == Method::automatic) m = resolve(t);
    return m == Method::image_sum ? image_bound(image_terms_, t) : spectral_bound(spectral_modes_, t);
}

double KernelEvaluator::t_min(Method m) const {
    switch (m) {
        case Method::image_sum: return 0.0;
        case Method::spectral: return spectral_t_min_;
        case Method::automatic: return 0.0;
    }
    return 0.0;
}

double KernelEvaluator::t_max(Method m) const {
    switch (m) {
        case Method::image_sum: return image_t_max_;
        case Method::spectral: return std::numeric_limits<double>::infinity();
        case Method::automatic: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

Method KernelEvaluator::resolve(double t) const {
    if (method_ != Method::automatic) return method_;
    if (t <= crossover()) return t <= image_t_max_ ? Method::image_sum : Method::spectral;
    return t >= spectral_t_min_ ? Method::spectral : Method::image_sum;
}

double KernelEvaluator::eval(double t, double x, double y) const { return eval(method_, t, x, y); }

double KernelEvaluator::eval(Method m, double t, double x, double y) const {
    if (t == 0.0)
        throw DeltaSingularityError("heat kernel at t=0 is a delta; use convolve for t=0");
    if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("kernel time must be positive");
    if (!(x >= 0.0 && x <= L_ && y >= 0.0 && y <= L_))
        throw ParameterError("kernel arguments must lie in [0, L]");
    if (m == Method::automatic) m = resolve(t);
    if (x == 0.0 || y == 0.0 || x == L_ || y == L_) return 0.0;
    return m == Method::image_sum ? eval_image(t, x, y) : eval_spectral(t, x, y);
}

double KernelEvaluator::eval_image(double t, double x, double y) const {
    int M = 1;
    while (M < image_terms_ && image_bound(M, t) > abs_tol_) ++M;
    if (image_bound(M, t) > abs_tol_)
        throw AccuracyError("image sum with " + std::to_string(image_terms_) +
                            " terms cannot reach abs_tol at t=" + num(t) +
                            " (valid up to t=" + num(image_t_max_) + ")");
    const double inv2t = 1.0 / (2.0 * t);
    double sum = 0.0;
    for (int k = -M; k <= M; ++k) {
        const double d1 = y - x + 2.0 * k * L_;
        const double d2 = y + x + 2.0 * k * L_;
        sum += std::exp(-d1 * d1 * inv2t) - std::exp(-d2 * d2 * inv2t);
    }
    return sum / std::sqrt(2.0 * kPi * t);
}

double KernelEvaluator::eval_spectral(double t, double x, double y) const {
    const double a = kPi * kPi * t / (2.0 * L_ * L_);
    int N = static_cast<int>(std::ceil(std::sqrt(std::max(0.0, std::log(2.0 / (L_ * abs_tol_)) / a)))) - 1;
    N = std::clamp(N, 1, spectral_modes_);
    while (N < spectral_modes_ && spectral_bound(N, t) > abs_tol_) ++N;
    while (N > 1 && spectral_bound(N - 1, t) <= abs_tol_) --N;
    if (spectral_bound(N, t) > abs_tol_)
        throw AccuracyError("spectral series with " + std::to_string(spectral_modes_) +
                            " modes cannot reach abs_tol at t=" + num(t) +
                            " (valid from t=" + num(spectral_t_min_) + ")");
    const double px = kPi * x / L_;
    const double py = kPi * y / L_;
    double sum = 0.0;
    for (int n = 1; n <= N; ++n)
        sum += std::sin(n * px) * std::sin(n * py) * std::exp(-a * n * n);
    return 2.0 / L_ * sum;
}

double Convolution::operator()(double x) const {
    if (identity_) return identity_(x);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (weighted_[i] != 0.0) sum += ke_->eval(t_, x, nodes_[i]) * weighted_[i];
    return sum;
}

Convolution convolve(const KernelEvaluator& ke, double t, const std::function<double(double)>& h,
                     int n_quad) {
    if (n_quad < 2) throw ParameterError("convolve needs n_quad >= 2");
    if (!(t >= 0.0)) throw ParameterError("convolution time must be non-negative");
    Convolution c;
    c.ke_ = &ke;
    c.t_ = t;
    if (t == 0.0) {
        c.identity_ = h;
        return c;
    }
    require_resolved(ke, t, n_quad, "convolve");
    const double step = ke.length() / n_quad;
    c.nodes_.resize(n_quad + 1);
    c.weighted_.resize(n_quad + 1);
    for (int i = 0; i <= n_quad; ++i) {
        c.nodes_[i] = i == n_quad ? ke.length() : i * step;
        const double w = (i == 0 || i == n_quad) ? 0.5 * step : step;
        c.weighted_[i] = w * h(c.nodes_[i]);
    }
    return c;
}

std::vector<double> convolution_matrix(const KernelEvaluator& ke, double t, int n_cells) {
    if (n_cells < 2) throw ParameterError("convolution matrix needs at least 2 cells");
    if (!(t > 0.0)) throw ParameterError("convolution matrix needs t > 0");
    require_resolved(ke, t, n_cells, "convolution_matrix");
    const int n = n_cells - 1;
    const double dx = ke.length() / n_cells;
    std::vector<double> P(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double g = std::max(0.0, ke.eval(t, (i + 1) * dx, (j + 1) * dx)) * dx;
            P[static_cast<std::size_t>(i) * n + j] = g;
            P[static_cast<std::size_t>(j) * n + i] = g;
        }
    return P;
}

double check_semigroup(const KernelEvaluator& ke, double s, double t, double x, double z,
                       int n_quad) {
    if (!(s > 0.0) || !(t > 0.0)) throw ParameterError("check_semigroup needs s, t > 0");
    if (n_quad < 2) throw ParameterError("check_semigroup needs n_quad >= 2");
    const double step = ke.length() / n_quad;
    double sum = 0.0;
    for (int i = 1; i < n_quad; ++i) {
        const double y = i * step;
        sum += ke.eval(s, x, y) * ke.eval(t, y, z);
    }
    return std::abs(sum * step - ke.eval(s + t, x, z));
}

LpCheck lp_norm_bound_check(const KernelEvaluator& ke, double t, double x, double p, int n_quad) {
    if (!(p >= 1.0)) throw ParameterError("lp check needs p >= 1");
    if (!(t > 0.0)) throw ParameterError("lp check needs t > 0");
    if (n_quad < 2) throw ParameterError("lp check needs n_quad >= 2");
    const double step = ke.length() / n_quad;
    double sum = 0.0;
    for (int i = 1; i < n_quad; ++i) sum += std::pow(std::abs(ke.eval(t, x, i * step)), p);
    LpCheck out;
    out.value = sum * step;
    out.constant = out.value * std::pow(t, (p - 1.0) / 2.0);
    return out;
}

double fit_lp_constant(const KernelEvaluator& ke, const std::vector<double>& times, double x,
                       double p, int n_quad) {
    double c = 0.0;
    for (double t : times) c = std::max(c, lp_norm_bound_check(ke, t, x, p, n_quad).constant);
    return c;
}

void write_kernel_dump(std::ostream& os, const KernelEvaluator& ke,
                       const std::vector<KernelSample>& samples) {
    os << "t,x,y,value,method\n";
    char buf[160];
    for (const auto& s : samples) {
        const Method m = ke.resolve(s.t);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s\n", s.t, s.x, s.y,
                      ke.eval(m, s.t, s.x, s.y), to_string(m));
        os << buf;
    }
}

}  // namespace stableheat::kernel
