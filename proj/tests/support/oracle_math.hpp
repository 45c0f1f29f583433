#pragma once

// Reference computations used by the tests.  They avoid the library's quadrature on purpose.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle_math {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                          double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12)
{
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50);
}

/// Composite Simpson over n panels of [a, b].
inline double simpson_fixed(const std::function<double(double)>& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a + i * h;
        sum += f(x) + 4.0 * f(x + 0.5 * h) + f(x + h);
    }
    return sum * h / 6.0;
}

/// B(r, 1 - s) = integral of theta^{r-1} (1 - theta)^{-s}, with 1 - theta = w^{1/(1-s)}.
inline double beta_integral(double r, double s)
{
    auto f = [&](double w) { return std::pow(1.0 - std::pow(w, 1.0 / (1.0 - s)), r - 1.0) / (1.0 - s); };
    return simpson(f, 0.0, 1.0, 1e-14);
}

/// Double integral for a unit-step staircase with levels u_1 .. u_N: the derivative is a sum of
/// jumps at t = k - 1, each contributing jump * integral over (k - 1, N) of (theta - k + 1)^{-s}.
/// The inner integral uses theta - k + 1 = w^2.
inline double staircase_memory(const std::vector<double>& levels, double s)
{
    const auto n = static_cast<int>(levels.size());
    double total = 0.0;
    for (int k = 2; k <= n; ++k) {
        const double jump = levels[k - 1] - levels[k - 2];
        auto f = [&](double w) { return 2.0 * std::pow(w, 1.0 - 2.0 * s); };
        total += jump * simpson(f, 0.0, std::sqrt(static_cast<double>(n - k + 1)), 1e-13);
    }
    return total;
}

inline double normal_cdf(double x, double variance)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

inline double cauchy_cdf(double x, double scale)
{
    return 0.5 + std::atan(x / scale) / std::numbers::pi;
}

/// Free-space s = 1/2 evolution at time t of a Gaussian bump of standard deviation sigma and unit
/// mass: (1/pi) integral over (0, inf) of exp(-t xi - sigma^2 xi^2 / 2) cos(x xi).
inline double cauchy_gauss_evolution(double x, double t, double sigma)
{
    auto f = [&](double xi) { return std::exp(-t * xi - 0.5 * sigma * sigma * xi * xi) * std::cos(x * xi); };
    const double top = std::sqrt(2.0 * 40.0) / sigma;
    return simpson_fixed(f, 0.0, top, 20000) / std::numbers::pi;
}

/// Trapezoid rule on the unit circle with n nodes.
inline double circle_trapezoid(const std::function<double(double, double)>& f, int n)
{
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * i / n;
        sum += f(std::cos(th), std::sin(th));
    }
    return sum * 2.0 * std::numbers::pi / n;
}

/// Neville extrapolation of samples (x_i, y_i) to x = x0.
inline double extrapolate(std::vector<double> x, std::vector<double> y, double x0)
{
    const std::size_t n = x.size();
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i + k < n; ++i) {
            y[i] = ((x0 - x[i + k]) * y[i] + (x[i] - x0) * y[i + 1]) / (x[i] - x[i + k]);
        }
    }
    return y[0];
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace oracle_math
