#pragma once

// Dirichlet heat kernel of d/dt - (1/2) d^2/dx^2 on [0, L].

#include <functional>
#include <iosfwd>
#include <vector>

namespace stableheat::kernel {

enum class Method { image_sum, spectral, automatic };

const char* to_string(Method m);

class KernelEvaluator {
public:
    explicit KernelEvaluator(double length, Method method = Method::automatic,
                             int image_terms = 8, int spectral_modes = 128,
                             double abs_tol = 1e-10);

    // Value within abs_tol of the exact kernel. t must be positive.
    double eval(double t, double x, double y) const;
    double eval(Method m, double t, double x, double y) const;

    // Representation used for time t (resolves automatic).
    Method resolve(double t) const;

    // Analytic bound on the series remainder at the configured truncation.
    double truncation_bound(Method m, double t) const;

    // Validity range of a representation at the configured truncation.
    double t_min(Method m) const;
    double t_max(Method m) const;

    double length() const { return L_; }
    Method method() const { return method_; }
    int image_terms() const { return image_terms_; }
    int spectral_modes() const { return spectral_modes_; }
    double abs_tol() const { return abs_tol_; }
    double crossover() const;

private:
    double image_bound(int M, double t) const;
    double spectral_bound(int N, double t) const;
    double eval_image(double t, double x, double y) const;
    double eval_spectral(double t, double x, double y) const;

    double L_;
    Method method_;
    int image_terms_;
    int spectral_modes_;
    double abs_tol_;
    double image_t_max_;
    double spectral_t_min_;
};

// x -> integral of G_t(x,y) h(y) dy by the trapezoid rule on n_quad panels.
class Convolution {
public:
    double operator()(double x) const;

private:
    friend Convolution convolve(const KernelEvaluator&, double, const std::function<double(double)>&, int);
    const KernelEvaluator* ke_ = nullptr;
    double t_ = 0.0;
    std::function<double(double)> identity_;
    std::vector<double> nodes_;
    std::vector<double> weighted_;  // quadrature weight times h at each node
};

Convolution convolve(const KernelEvaluator& ke, double t, const std::function<double(double)>& h,
                     int n_quad);

// Trapezoid weights times G_t(x_i, x_j) on the interior nodes of an n-cell grid,
// row-major (n-1) x (n-1). Entries are clamped at zero so the matrix preserves order.
std::vector<double> convolution_matrix(const KernelEvaluator& ke, double t, int n_cells);

// |integral G_s(x,y) G_t(y,z) dy - G_{s+t}(x,z)|.
double check_semigroup(const KernelEvaluator& ke, double s, double t, double x, double z,
                       int n_quad);

struct LpCheck {
    double value = 0.0;     // integral of |G_t(x,y)|^p dy
    double constant = 0.0;  // smallest C with value <= C t^{-(p-1)/2}
};

LpCheck lp_norm_bound_check(const KernelEvaluator& ke, double t, double x, double p, int n_quad);

// Largest constant over the sampled times.
double fit_lp_constant(const KernelEvaluator& ke, const std::vector<double>& times, double x,
                       double p, int n_quad);

struct KernelSample {
    double t;
    double x;
    double y;
};

// CSV rows "t,x,y,value,method".
void write_kernel_dump(std::ostream& os, const KernelEvaluator& ke,
                       const std::vector<KernelSample>& samples);

}  // namespace stableheat::kernel
