#include "fraclab/heatflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fraclab/errors.hpp"
#include "fraclab/fitting.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {

double trapezoid_mass(std::span<const double> x, std::span<const double> v)
{
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        m += 0.5 * (x[i + 1] - x[i]) * (v[i] + v[i + 1]);
    }
    return m;
}

double table_value(const HeatKernelTable& t, double x)
{
    if (t.x.empty() || x < t.x.front() || x > t.x.back()) {
        throw ValidationError("point outside the kernel table");
    }
    auto it = std::lower_bound(t.x.begin(), t.x.end(), x);
    std::size_t j = static_cast<std::size_t>(it - t.x.begin());
    if (j == 0) {
        return t.values.front();
    }
    const double w = (x - t.x[j - 1]) / (t.x[j] - t.x[j - 1]);
    return (1.0 - w) * t.values[j - 1] + w * t.values[j];
}

void check_sorted(std::span<const double> x)
{
    if (x.empty()) {
        throw ValidationError("empty grid");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || (i > 0 && !(x[i] > x[i - 1]))) {
            throw ValidationError("grid must be finite and strictly increasing");
        }
    }
}

} // namespace

double heat_kernel_value(FracOrder s, double x)
{
    const double two_s = 2.0 * s.value();
    const double cutoff = std::pow(std::log(1e12), 1.0 / two_s);
    const double ax = std::abs(x);
    const double width = std::min(1.0, std::numbers::pi / std::max(ax, 1e-300));

    auto f = [&](double xi) { return std::exp(-std::pow(xi, two_s)) * std::cos(ax * xi); };

    // exp(-xi^{2s}) has an algebraic singularity at the origin; grade toward it.
    double sum = 0.0;
    const double first = std::min(width, cutoff);
    double lo = first * 1e-12;
    sum += quad::gauss_legendre(f, 0.0, lo);
    for (double hi = 2.0 * lo; lo < first; hi = std::min(first, 2.0 * hi)) {
        sum += quad::gauss_legendre(f, lo, hi);
        lo = hi;
    }
    const auto panels = static_cast<std::size_t>(std::ceil((cutoff - first) / width));
    const double step = panels > 0 ? (cutoff - first) / static_cast<double>(panels) : 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double a = first + static_cast<double>(k) * step;
        sum += quad::gauss_legendre(f, a, a + step);
    }
    return sum / std::numbers::pi;
}

HeatKernelTable heat_kernel_fourier(FracOrder s, std::span<const double> x_grid, unsigned threads)
{
    check_sorted(x_grid);
    HeatKernelTable t;
    t.order = s.value();
    t.x.assign(x_grid.begin(), x_grid.end());
    t.values.resize(t.x.size());
    parallel_for(t.x.size(), threads, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t i = b; i < e; ++i) {
            t.values[i] = heat_kernel_value(s, t.x[i]);
        }
    });
    t.mass = trapezoid_mass(t.x, t.values);
    // Complete the mass beyond the grid ends with the algebraic tail series.
    const double v = s.value();
    for (double end : {std::abs(t.x.front()), std::abs(t.x.back())}) {
        double previous = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 8; ++k) {
            const double ak = (k % 2 == 1 ? 1.0 : -1.0) * std::tgamma(1.0 + 2.0 * v * k) *
                              std::sin(std::numbers::pi * v * k) / (std::numbers::pi * std::tgamma(k + 1.0));
            const double term = ak * std::pow(end, -2.0 * v * k) / (2.0 * v * k);
            if (std::abs(term) > previous) {
                break;
            }
            t.mass += term;
            if (term != 0.0) {
                previous = std::abs(term);
            }
        }
    }
    return t;
}

HeatKernelTable gaussian_kernel_table(double time, std::span<const double> x_grid)
{
    if (!(time > 0.0)) {
        throw ValidationError("time must be positive");
    }
    check_sorted(x_grid);
    HeatKernelTable t;
    t.order = 1.0;
    t.x.assign(x_grid.begin(), x_grid.end());
    t.values.reserve(t.x.size());
    for (double x : t.x) {
        t.values.push_back(std::exp(-x * x / (4.0 * time)) / std::sqrt(4.0 * std::numbers::pi * time));
    }
    t.mass = trapezoid_mass(t.x, t.values);
    return t;
}

double kernel_tail_constant(FracOrder s)
{
    const double v = s.value();
    return std::tgamma(1.0 + 2.0 * v) * std::sin(std::numbers::pi * v) / std::numbers::pi;
}

TailFit kernel_tail_fit(const HeatKernelTable& table, std::span<const double> radii)
{
    if (radii.size() < 2) {
        throw ValidationError("tail fit needs at least two radii");
    }
    std::vector<double> r;
    std::vector<double> g;
    for (double R : radii) {
        if (!(R >= 5.0)) {
            throw ValidationError("tail radii must satisfy |x| >= 5");
        }
        const double v = table_value(table, R);
        if (!(v > 0.0)) {
            throw ValidationError("kernel is not positive at a tail radius");
        }
        r.push_back(R);
        g.push_back(v);
    }
    const PowerLawFit fit = fit_power_law(r, g);
    TailFit out;
    out.exponent = fit.exponent;
    for (std::size_t i = 0; i < r.size(); ++i) {
        out.products.push_back(std::pow(r[i], 1.0 + 2.0 * table.order) * g[i]);
    }
    out.constant = out.products.back();
    return out;
}

double kernel_scaling_check(FracOrder s, double t, std::span<const double> x_grid)
{
    if (!(t > 0.0)) {
        throw ValidationError("time must be positive");
    }
    const double v = s.value();
    const double scale = std::pow(t, 1.0 / (2.0 * v));
    const double period = 400.0 * scale;

    std::vector<double> bulk;
    for (double x : x_grid) {
        if (std::abs(x) <= 5.0 * scale) {
            bulk.push_back(x);
        }
    }
    if (bulk.empty()) {
        throw ValidationError("no grid point inside the bulk region");
    }

    const double a1 = kernel_tail_constant(s);
    const double omega = 2.0 * std::numbers::pi / period;
    const auto modes = static_cast<std::size_t>(std::ceil(std::pow(std::log(1e17) / t, 1.0 / (2.0 * v)) / omega));
    std::vector<double> damping(modes + 1);
    for (std::size_t k = 1; k <= modes; ++k) {
        damping[k] = std::exp(-std::pow(omega * static_cast<double>(k), 2.0 * v) * t);
    }

    double worst = 0.0;
    for (double x : bulk) {
        double sum = 0.0;
        for (std::size_t k = modes; k >= 1; --k) {
            sum += damping[k] * std::cos(omega * static_cast<double>(k) * x);
        }
        double periodic = (1.0 + 2.0 * sum) / period;

        // Remove the periodic images through their leading tail asymptotics.
        constexpr int images = 2000;
        double ghost = 0.0;
        for (int m = images; m >= 1; --m) {
            ghost += std::pow(std::abs(x + m * period), -1.0 - 2.0 * v) + std::pow(std::abs(x - m * period), -1.0 - 2.0 * v);
        }
        ghost += 2.0 * std::pow((images + 0.5) * period, -2.0 * v) / (2.0 * v * period);
        periodic -= a1 * t * ghost;

        const double exact = heat_kernel_value(s, x / scale) / scale;
        worst = std::max(worst, std::abs(periodic - exact) / std::abs(exact));
    }
    return worst;
}

std::vector<TruncatedMoment> truncated_msd(const HeatKernelTable& table, std::span<const double> radii)
{
    std::vector<TruncatedMoment> out;
    for (double R : radii) {
        if (!(R > 0.0) || table.x.empty() || table.x.front() > -R || table.x.back() < R) {
            throw ValidationError("kernel table does not cover the truncation radius");
        }
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < table.x.size(); ++i) {
            const double a = std::max(table.x[i], -R);
            const double b = std::min(table.x[i + 1], R);
            if (!(b > a)) {
                continue;
            }
            const double fa = a * a * table_value(table, a);
            const double fb = b * b * table_value(table, b);
            m += 0.5 * (b - a) * (fa + fb);
        }
        out.push_back({R, m});
    }
    return out;
}

DiffusionReport fit_diffusion(std::span<const double> times, std::span<const double> msd)
{
    if (times.size() != msd.size() || times.size() < 2) {
        throw ValidationError("diffusion fit needs matching samples");
    }
    const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
    if (!(*lo > 0.0) || *hi < 10.0 * *lo * (1.0 - 1e-12)) {
        throw ValidationError("diffusion fit needs positive times spanning a decade");
    }
    const PowerLawFit fit = fit_power_law(times, msd);
    DiffusionReport r;
    r.times.assign(times.begin(), times.end());
    r.msd.assign(msd.begin(), msd.end());
    r.exponent = fit.exponent;
    r.constant = fit.constant;
    r.half_width = fit.half_width;
    return r;
}

std::vector<double> regional_generator(const Domain& omega, std::size_t nodes, FracOrder s, unsigned threads)
{
    if (omega.kind() != Domain::Kind::interval || nodes < 3) {
        throw ValidationError("regional generator needs an interval grid with at least three nodes");
    }
    const double v = s.value();
    const double h = (omega.hi() - omega.lo()) / static_cast<double>(nodes - 1);
    const double c = normalization_constant(1, s);

    std::vector<double> kernel(nodes);
    for (std::size_t k = 1; k < nodes; ++k) {
        const double d = static_cast<double>(k) * h;
        kernel[k] = c * (std::pow(d - 0.5 * h, -2.0 * v) - std::pow(d + 0.5 * h, -2.0 * v)) / (2.0 * v * h);
    }
    // Self-cell contribution through the second difference.
    kernel[1] += c * std::pow(0.5 * h, 2.0 - 2.0 * v) / ((2.0 - 2.0 * v) * h * h * h);

    std::vector<double> a(nodes * nodes, 0.0);
    parallel_for(nodes, threads, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t i = b; i < e; ++i) {
            double diag = 0.0;
            for (std::size_t j = 0; j < nodes; ++j) {
                if (j == i) {
                    continue;
                }
                const double m = (j == 0 || j == nodes - 1) ? 0.5 * h : h;
                const double w = kernel[i > j ? i - j : j - i] * m;
                a[i * nodes + j] = w;
                diag -= w;
            }
            a[i * nodes + i] = diag;
        }
    });
    return a;
}

RegionalHeatResult regional_heat_solve(const GridFunction& u0, FracOrder s, double t, const RegionalHeatOptions& options)
{
    if (!(t >= 0.0) || !(options.time_scale > 0.0) || !(options.dt >= 0.0)) {
        throw ValidationError("invalid time, time scale or step");
    }
    const std::size_t n = u0.size();
    std::vector<double> a = regional_generator(u0.domain(), n, s, options.threads);
    for (double& x : a) {
        x *= options.time_scale;
    }
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, std::abs(a[i * n + i]));
    }

    RegionalHeatResult result{u0, 0.0, 0, false};
    if (t == 0.0) {
        return result;
    }
    const double bound = 0.4 / max_diag;
    double dt = options.dt > 0.0 ? options.dt : bound;
    if (dt > bound) {
        dt = bound;
        result.dt_reduced = true;
    }
    const auto steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-12));
    dt = t / static_cast<double>(steps);

    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        parallel_for(n, options.threads, [&](std::size_t b, std::size_t e, unsigned) {
            for (std::size_t i = b; i < e; ++i) {
                const double* row = &a[i * n];
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    acc += row[j] * in[j];
                }
                out[i] = acc;
            }
        });
    };

    std::vector<double> u(u0.values().begin(), u0.values().end());
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (std::size_t step = 0; step < steps; ++step) {
        apply(u, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
        apply(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
        apply(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + dt * k3[i];
        apply(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    result.solution = u0.with_values(std::move(u));
    result.dt = dt;
    result.steps = steps;
    return result;
}

} // namespace fraclab
