#include "fraclab/caputo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fraclab/quadrature.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

namespace {

constexpr double kPi = std::numbers::pi;

bool on_grid_tolerance(double a, double b)
{
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

// Derivative of the analytic value by central differences (one-sided next to t = 0).
double numeric_derivative(const std::function<double(double)>& f, double t)
{
    const double h = 1e-5 * std::max(1.0, std::abs(t));
    if (t < h) {
        return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h);
    }
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

// Exact integral of (t - tau)^{-s} times the piecewise-linear derivative of the samples.
double product_integration(const TimeSeries& u, double t, double s)
{
    const double e = 1.0 - s;
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < u.times.size() && u.times[j] < t; ++j) {
        const double a = u.times[j];
        const double b = std::min(u.times[j + 1], t);
        const double slope = (u.values[j + 1] - u.values[j]) / (u.times[j + 1] - u.times[j]);
        total += slope * (std::pow(t - a, e) - std::pow(t - b, e)) / e;
    }
    return total;
}

} // namespace

TimeSeries TimeSeries::sampled(std::vector<double> times, std::vector<double> values)
{
    TimeSeries ts;
    ts.times = std::move(times);
    ts.values = std::move(values);
    if (!ts.values.empty()) {
        ts.initial = ts.values.front();
    }
    ts.validate();
    return ts;
}

TimeSeries TimeSeries::uniform(double horizon, std::size_t steps, const std::function<double(double)>& f)
{
    if (!(horizon > 0.0) || steps < 1) {
        throw ValidationError("time series needs a positive horizon and at least one step");
    }
    std::vector<double> t(steps + 1);
    std::vector<double> v(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
        v[i] = f(t[i]);
    }
    return sampled(std::move(t), std::move(v));
}

TimeSeries TimeSeries::analytic(std::function<double(double)> f, std::function<double(double)> df, double horizon,
                                std::size_t steps)
{
    TimeSeries ts = uniform(horizon, steps, f);
    ts.value_fn = std::move(f);
    ts.derivative_fn = std::move(df);
    return ts;
}

void TimeSeries::validate() const
{
    if (times.size() < 2 || times.size() != values.size()) {
        throw ValidationError("time series needs at least two samples and matching lengths");
    }
    if (times.front() != 0.0) {
        throw ValidationError("time series grid must start at t = 0");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw ValidationError("time series grid must be strictly increasing");
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ValidationError("time series values must be finite");
        }
    }
}

bool TimeSeries::is_uniform() const
{
    const double h = step();
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (std::abs((times[i] - times[i - 1]) - h) > 1e-9 * h) {
            return false;
        }
    }
    return true;
}

double TimeSeries::step() const
{
    return times.back() / static_cast<double>(times.size() - 1);
}

double TimeSeries::value(double t) const
{
    if (value_fn) {
        return value_fn(t);
    }
    if (t <= 0.0) {
        return initial;
    }
    if (t >= times.back()) {
        return values.back();
    }
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
    const double w = (t - times[i]) / (times[i + 1] - times[i]);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

double TimeSeries::integral(double a, double b) const
{
    if (!(b > a)) {
        return 0.0;
    }
    if (value_fn) {
        const auto bp = std::vector<double>{a, 0.5 * (a + b), b};
        return quad::integrate_panels(value_fn, bp, 1e-13 * std::max(1.0, b - a)).estimate.value;
    }
    // Exact for the piecewise-linear interpolant.
    std::vector<double> pts{a, b};
    for (double t : times) {
        if (t > a && t < b) {
            pts.push_back(t);
        }
    }
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        total += 0.5 * (value(pts[i]) + value(pts[i + 1])) * (pts[i + 1] - pts[i]);
    }
    return total;
}

MemoryWeights::MemoryWeights(FracOrder s, std::size_t horizon) : order(s), c(horizon)
{
    for (std::size_t j = 0; j < horizon; ++j) {
        c[j] = weight(s, j);
    }
}

double MemoryWeights::weight(FracOrder s, std::size_t j)
{
    const double e = 1.0 - s.value();
    const double jd = static_cast<double>(j);
    return (std::pow(jd + 1.0, e) - std::pow(jd, e)) / e;
}

double caputo_derivative(const TimeSeries& u, double t, FracOrder order, CaputoScheme scheme)
{
    u.validate();
    if (!(t >= 0.0) || t > u.horizon() * (1.0 + 1e-12)) {
        throw ValidationError("caputo_derivative: t outside the series range");
    }
    if (t == 0.0) {
        return 0.0;
    }
    const double s = order.value();
    if (scheme == CaputoScheme::l1) {
        if (!u.is_uniform()) {
            throw ValidationError("caputo_derivative: the L1 scheme needs a uniform grid");
        }
        const double h = u.step();
        const auto n = static_cast<std::size_t>(std::llround(t / h));
        if (!on_grid_tolerance(static_cast<double>(n) * h, t)) {
            throw ValidationError("caputo_derivative: the L1 scheme evaluates at grid nodes only");
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += MemoryWeights::weight(order, j) * (u.values[n - j] - u.values[n - j - 1]);
        }
        return sum * std::pow(h, -s);
    }

    if (!u.derivative_fn && !u.value_fn) {
        return product_integration(u, t, s);
    }
    std::function<double(double)> du = u.derivative_fn;
    if (!du) {
        du = [&](double tau) { return numeric_derivative(u.value_fn, tau); };
    }
    // tau = t - w^{1/(1-s)} removes the kernel singularity at tau = t.
    const double e = 1.0 - s;
    const double top = std::pow(t, e);
    auto f = [&](double w) { return du(std::max(0.0, t - std::pow(w, 1.0 / e))) / e; };
    std::vector<double> bp{0.0};
    for (double frac : {1e-6, 1e-4, 1e-2, 0.1, 0.5, 0.9, 0.99, 0.9999}) {
        bp.push_back(frac * top);
    }
    bp.push_back(top);
    return quad::integrate_panels(f, bp, 1e-13 * std::max(1.0, std::abs(du(t))) * std::max(1.0, top), 20000)
        .estimate.value;
}

std::vector<double> caputo_l1_series(const TimeSeries& u, FracOrder order)
{
    u.validate();
    if (!u.is_uniform()) {
        throw ValidationError("caputo_l1_series: the L1 scheme needs a uniform grid");
    }
    const std::size_t n = u.times.size();
    const MemoryWeights w(order, n);
    const double scale = std::pow(u.step(), -order.value());
    std::vector<double> out(n, 0.0);
    for (std::size_t m = 1; m < n; ++m) {
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            sum += w.c[j] * (u.values[m - j] - u.values[m - j - 1]);
        }
        out[m] = sum * scale;
    }
    return out;
}

double marchaud_derivative(const TimeSeries& u, double t, FracOrder order)
{
    u.validate();
    if (!(t > 0.0) || t > u.horizon() * (1.0 + 1e-12)) {
        throw ValidationError("marchaud_derivative: need 0 < t within the series range");
    }
    const double s = order.value();
    const double e = 1.0 - s;
    const double ut = u.value(t);
    const double past = (ut - u.initial) * std::pow(t, -s);
    // sigma = w^{1/(1-s)}: s sigma^{-1-s} d sigma = s / (1-s) sigma^{-1} dw.
    auto f = [&](double w) {
        const double sigma = std::pow(w, 1.0 / e);
        if (sigma <= 0.0) {
            return 0.0;
        }
        return s / e * (ut - u.value(std::max(0.0, t - sigma))) / sigma;
    };
    const double top = std::pow(t, e);
    std::vector<double> bp{0.0};
    for (double frac : {1e-6, 1e-4, 1e-2, 0.1, 0.5, 0.9, 0.99}) {
        bp.push_back(frac * top);
    }
    if (!u.value_fn) {
        // Kinks of the interpolant.
        for (double tau : u.times) {
            if (tau < t) {
                bp.push_back(std::pow(t - tau, e));
            }
        }
    }
    bp.push_back(top);
    bp = quad::normalize_breakpoints(std::move(bp), 0.0, top);
    const double inner = quad::integrate_panels(f, bp, 1e-12 * std::max(1.0, std::abs(past)), 40000).estimate.value;
    return past + inner;
}

TimeSeries volterra_inverse(const TimeSeries& f, double u0, FracOrder order)
{
    f.validate();
    if (!f.is_uniform()) {
        throw ValidationError("volterra_inverse: f must be sampled on a uniform grid");
    }
    const double s = order.value();
    const double k = std::sin(kPi * s) / kPi;
    const std::size_t n = f.times.size();
    std::vector<double> u(n, u0);
    for (std::size_t m = 1; m < n; ++m) {
        const double tm = f.times[m];
        double total = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double a = tm - f.times[j + 1];
            const double b = tm - f.times[j];
            const double h = b - a;
            const double i0 = (std::pow(b, s) - std::pow(a, s)) / s;
            const double i1 = (std::pow(b, s + 1.0) - std::pow(a, s + 1.0)) / (s + 1.0);
            total += f.values[j] * i0 + (f.values[j + 1] - f.values[j]) * (b * i0 - i1) / h;
        }
        u[m] = u0 + k * total;
    }
    TimeSeries out = TimeSeries::sampled(f.times, std::move(u));
    out.initial = u0;
    return out;
}

LaplaceReport laplace_identity_residual(const TimeSeries& u, FracOrder order, std::span<const double> omegas,
                                        double growth_rate)
{
    if (!u.value_fn || !u.derivative_fn) {
        throw ValidationError("laplace_identity_residual: an analytic handle with derivative is required");
    }
    const double s = order.value();
    const double g1s = std::tgamma(1.0 - s);
    const double u0 = u.value_fn(0.0);
    LaplaceReport report;
    for (double w : omegas) {
        if (!(w > growth_rate)) {
            throw ValidationError("laplace_identity_residual: frequency must exceed the declared growth rate");
        }
        const double horizon = 40.0 / (w - growth_rate);
        std::vector<double> bp{0.0};
        for (double x = 1e-10 * horizon; x < horizon; x *= 10.0) {
            bp.push_back(x);
        }
        bp.push_back(horizon);
        // The Caputo derivative of a smooth u is evaluated from its analytic derivative.
        TimeSeries handle = u;
        handle.times = {0.0, horizon};
        handle.values = {u0, u.value_fn(horizon)};
        handle.initial = u0;
        auto lhs_integrand = [&](double t) {
            return t <= 0.0 ? 0.0 : std::exp(-w * t) * caputo_derivative(handle, t, order, CaputoScheme::direct_quadrature);
        };
        auto lu_integrand = [&](double t) { return std::exp(-w * t) * u.value_fn(t); };
        const double lhs = quad::integrate_panels(lhs_integrand, bp, 1e-12).estimate.value;
        const double lu = quad::integrate_panels(lu_integrand, bp, 1e-13).estimate.value;
        const double rhs = g1s * (std::pow(w, s) * lu - std::pow(w, s - 1.0) * u0);
        const double res = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12);
        report.omega.push_back(w);
        report.lhs.push_back(lhs);
        report.rhs.push_back(rhs);
        report.residual.push_back(std::abs(rhs) > 1e-12 ? res : std::abs(lhs - rhs));
        report.max_residual = std::max(report.max_residual, report.residual.back());
    }
    return report;
}

double memory_average(std::span<const double> levels, FracOrder s, double u0)
{
    if (levels.size() < 2) {
        throw ValidationError("memory_average: need at least two levels");
    }
    if (u0 != 0.0 || levels[0] != 0.0) {
        throw ValidationError("memory_average: the staircase must start from u(0) = u_1 = 0");
    }
    const std::size_t n = levels.size();
    const MemoryWeights w(s, n);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        total += w.c[k] * levels[n - 1 - k];
    }
    return total;
}

CrowdModel::CrowdModel(FracOrder s, TimeSeries v) : order(s), velocity(std::move(v)), c_phi(std::riemann_zeta(2.0 - s.value()))
{
    velocity.validate();
}

double CrowdModel::probability(std::size_t k) const
{
    if (k == 0) {
        return 0.0;
    }
    return std::pow(static_cast<double>(k), order.value() - 2.0) / c_phi;
}

double crowd_average(const CrowdModel& model, double t)
{
    if (!(t >= 0.0)) {
        throw ValidationError("crowd_average: t must be nonnegative");
    }
    if (t == 0.0) {
        return 0.0;
    }
    const double e = model.order.value() - 2.0;
    const double total = model.velocity.integral(0.0, t);
    double sum = 0.0;
    double mass = 0.0;
    for (std::size_t k = 1; static_cast<double>(k) < t; ++k) {
        const double phi = std::pow(static_cast<double>(k), e);
        sum += phi * model.velocity.integral(t - static_cast<double>(k), t);
        mass += phi;
    }
    sum += total * (model.c_phi - mass);
    return sum / model.c_phi;
}

std::vector<GridFunction> timefrac_heat_solve(const GridFunction& u0, FracOrder order, std::span<const double> t_grid)
{
    if (u0.domain().kind() != Domain::Kind::torus) {
        throw ValidationError("timefrac_heat_solve: torus grid required");
    }
    if (t_grid.size() < 2 || t_grid[0] != 0.0) {
        throw ValidationError("timefrac_heat_solve: time grid must start at 0 with at least two entries");
    }
    const double dt = t_grid[1] - t_grid[0];
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(dt > 0.0) || std::abs((t_grid[i] - t_grid[i - 1]) - dt) > 1e-9 * dt) {
            throw ValidationError("timefrac_heat_solve: time grid must be uniform");
        }
    }
    const double s = order.value();
    const std::size_t steps = t_grid.size() - 1;
    const MemoryWeights w(order, steps);
    const double a = std::pow(dt, -s) / std::tgamma(1.0 - s);

    const TorusSpectrum spec0 = torus_analyze(u0);
    const std::size_t modes = spec0.modes.size();
    // history[n][k]
    std::vector<std::vector<std::complex<double>>> history(steps + 1, std::vector<std::complex<double>>(modes));
    history[0] = spec0.modes;
    for (std::size_t k = 0; k < modes; ++k) {
        const double wk = spec0.wavenumber(k);
        const double lambda = wk * wk;
        const double denom = a * w.c[0] + lambda;
        for (std::size_t n = 1; n <= steps; ++n) {
            std::complex<double> memory = 0.0;
            for (std::size_t j = 1; j < n; ++j) {
                memory += w.c[j] * (history[n - j][k] - history[n - j - 1][k]);
            }
            history[n][k] = (a * w.c[0] * history[n - 1][k] - a * memory) / denom;
        }
    }
    std::vector<GridFunction> out;
    out.reserve(steps + 1);
    out.push_back(u0);
    TorusSpectrum spec = spec0;
    for (std::size_t n = 1; n <= steps; ++n) {
        spec.modes = history[n];
        out.push_back(torus_synthesize(spec, u0.domain()));
    }
    return out;
}

double msd_of_density(const GridFunction& rho, double center)
{
    const double mass = rho.integral();
    if (!(mass > 0.0)) {
        throw ValidationError("msd_of_density: density has nonpositive mass");
    }
    const bool torus = rho.domain().kind() == Domain::Kind::torus;
    const double period = rho.domain().period();
    const double h = rho.spacing();
    double total = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        double d = rho.node(i) - center;
        if (torus) {
            d -= period * std::round(d / period);
        }
        double wgt = h;
        if (!torus && (i == 0 || i + 1 == rho.size())) {
            wgt *= 0.5;
        }
        total += wgt * rho[i] * d * d;
    }
    return total / mass;
}

} // namespace fraclab
