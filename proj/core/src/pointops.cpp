#include "fraclab/pointops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "fraclab/parallel.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {

constexpr double kPi = std::numbers::pi;

// numerator(y) = c0 u(x) + sum coef * u(x + a y)
struct Numerator
{
    double c0 = 0.0;
    std::vector<std::pair<double, double>> terms;
};

Numerator second_difference_numerator()
{
    return Numerator{2.0, {{1.0, -1.0}, {-1.0, -1.0}}};
}

Numerator one_sided_numerator(double side)
{
    return Numerator{1.0, {{side, -1.0}}};
}

Numerator fourth_difference_numerator()
{
    return Numerator{6.0, {{2.0, 1.0}, {-2.0, 1.0}, {1.0, -4.0}, {-1.0, -4.0}}};
}

enum class TailKind { support, periodic, growth, bounded };

TailKind classify(const FunctionHandle& u)
{
    if (u.period) {
        return TailKind::periodic;
    }
    if (u.support) {
        return TailKind::support;
    }
    if (u.growth) {
        return TailKind::growth;
    }
    if (u.sup_bound) {
        return TailKind::bounded;
    }
    throw ValidationError("summability cannot be certified: declare a support window, a period, a sup bound or the "
                          "growth at infinity");
}

struct Features
{
    std::vector<double> plain;
    std::vector<double> singular;
    // Distance from x to the nearest singular point, in y units (inf if none).
    double nearest_singular = std::numeric_limits<double>::infinity();
};

std::vector<double> singular_points(const FunctionHandle& u, const QuadratureSpec& q)
{
    std::vector<double> pts = u.singular_points;
    pts.insert(pts.end(), q.singular_endpoints.begin(), q.singular_endpoints.end());
    return pts;
}

void check_away_from_singular(const std::vector<double>& sing, double x, std::optional<double> period)
{
    for (double p : sing) {
        double d = std::abs(p - x);
        if (period) {
            d = std::fmod(d, *period);
            d = std::min(d, *period - d);
        }
        if (d <= 1e-12 * std::max(1.0, std::abs(x))) {
            throw ValidationError("evaluation point coincides with a declared singular point");
        }
    }
}

Features collect_features(const FunctionHandle& u, double x, const Numerator& num, const QuadratureSpec& q)
{
    Features f;
    const auto sing = singular_points(u, q);
    check_away_from_singular(sing, x, u.period);
    auto add = [&](double p, bool singular, double a) {
        auto push = [&](double y) {
            if (!(y > 0.0) || !std::isfinite(y)) {
                return;
            }
            (singular ? f.singular : f.plain).push_back(y);
            if (singular) {
                f.nearest_singular = std::min(f.nearest_singular, y);
            }
        };
        if (u.period) {
            const double period = *u.period;
            for (int j = -4; j <= 4; ++j) {
                const double y = (p + j * period - x) / a;
                if (y <= period) {
                    push(y);
                }
            }
        } else {
            push((p - x) / a);
        }
    };
    for (const auto& [a, coef] : num.terms) {
        for (double p : sing) {
            add(p, true, a);
        }
        if (u.support) {
            add(u.support->lo, false, a);
            add(u.support->hi, false, a);
        }
    }
    return f;
}

struct Accumulator
{
    double value = 0.0;
    double error = 0.0;

    void add(Estimate e)
    {
        value += e.value;
        error += e.error;
    }
    void add(const quad::IntegrationResult& r) { add(r.estimate); }
    Estimate estimate() const { return {value, error}; }
};

bool near_any(double y, const std::vector<double>& pts)
{
    for (double p : pts) {
        if (std::abs(y - p) <= 1e-13 * std::max(1.0, std::abs(p))) {
            return true;
        }
    }
    return false;
}

// Integral of f over [lo, hi].  Segments ending at a singular feature are mapped so that
// inverse-square-root endpoint singularities become smooth; other segments get geometric panels.
Estimate integrate_segments(const quad::Integrand& f, double lo, double hi, const Features& feat, int per_decade,
                            double tol, std::size_t budget)
{
    if (!(hi > lo)) {
        return {};
    }
    std::vector<double> sing;
    for (double d : feat.singular) {
        if (d >= lo * (1.0 - 1e-13) && d <= hi * (1.0 + 1e-13)) {
            sing.push_back(d);
        }
    }
    std::vector<double> pts;
    for (double d : feat.plain) {
        pts.push_back(d);
    }
    for (double d : sing) {
        pts.push_back(d);
        pts.push_back(0.5 * d);
        pts.push_back(1.5 * d);
    }
    pts = quad::normalize_breakpoints(std::move(pts), lo, hi);

    const double seg_tol = tol / static_cast<double>(pts.size() - 1);
    Accumulator acc;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        const double len = b - a;
        const bool sa = near_any(a, sing);
        const bool sb = near_any(b, sing);
        if (sa && sb) {
            auto g = [&](double t) { return f(a + len * t * t * (3.0 - 2.0 * t)) * 6.0 * len * t * (1.0 - t); };
            acc.add(quad::integrate_panels(g, std::vector<double>{0.0, 0.5, 1.0}, seg_tol, budget));
        } else if (sa) {
            auto g = [&](double t) { return f(a + len * t * t) * 2.0 * len * t; };
            acc.add(quad::integrate_panels(g, std::vector<double>{0.0, 1.0}, seg_tol, budget));
        } else if (sb) {
            auto g = [&](double t) { return f(b - len * t * t) * 2.0 * len * t; };
            acc.add(quad::integrate_panels(g, std::vector<double>{0.0, 1.0}, seg_tol, budget));
        } else if (a > 0.0 && b > 2.0 * a) {
            const auto bp = quad::geometric_points(a, b, per_decade);
            acc.add(quad::integrate_panels(f, bp, seg_tol, budget));
        } else {
            acc.add(quad::integrate_panels(f, std::vector<double>{a, b}, seg_tol, budget));
        }
    }
    return acc.estimate();
}

// Integral over (0, r1) of g(r) r^{-sigma} where g(r) ~ r^k near 0, through w = r^{k - sigma + 1}.
Estimate integrate_inner(const std::function<double(double)>& g, double k, double sigma, double r1, double rmin,
                         double tol, std::size_t budget)
{
    const double beta = k - sigma + 1.0;
    const double top = std::pow(r1, beta);
    // Below rmin cancellation dominates; continue g / r^k as an even quadratic.
    const double phi_min = g(rmin) / std::pow(rmin, k);
    const double curvature = (g(2.0 * rmin) / std::pow(2.0 * rmin, k) - phi_min) / (3.0 * rmin * rmin);
    auto phi = [&](double w) {
        const double r = std::pow(w, 1.0 / beta);
        if (r < rmin) {
            return phi_min + curvature * (r * r - rmin * rmin);
        }
        return g(r) / std::pow(r, k);
    };
    const auto r = quad::integrate_panels(phi, std::vector<double>{0.0, 0.5 * top, top}, tol * beta, budget);
    return {r.estimate.value / beta, r.estimate.error / beta};
}

// Sum over m >= 1 of (t + m P)^{-sigma}, with an Euler-Maclaurin remainder after 16 terms.
double lattice_remainder(double t, double period, double sigma)
{
    constexpr int m_max = 16;
    double sum = 0.0;
    for (int m = 1; m < m_max; ++m) {
        sum += std::pow(t + m * period, -sigma);
    }
    const double a = t + m_max * period;
    sum += std::pow(a, 1.0 - sigma) / (period * (sigma - 1.0));
    sum += 0.5 * std::pow(a, -sigma);
    sum += sigma * period * std::pow(a, -sigma - 1.0) / 12.0;
    sum -= sigma * (sigma + 1.0) * (sigma + 2.0) * period * period * period * std::pow(a, -sigma - 3.0) / 720.0;
    return sum;
}

struct TailPlan
{
    double radius = 0.0;
    Estimate far;
};

double sum_abs_coef(const Numerator& num)
{
    double s = 0.0;
    for (const auto& [a, c] : num.terms) {
        s += std::abs(c);
    }
    return s;
}

// Chooses the truncation radius and models the integral over (R, inf) of the u(x + a y) terms
// against y^{-sigma}.  The c0 u(x) part is added by the caller, which knows the exact kernel.
TailPlan plan_tail(const FunctionHandle& u, double x, const Numerator& num, double sigma, TailKind kind,
                   double floor_radius, double tol, const QuadratureSpec& q)
{
    TailPlan plan;
    const double cap = 1e150;
    switch (kind) {
    case TailKind::support: {
        plan.radius = std::max({std::abs(x - u.support->lo), std::abs(x - u.support->hi), floor_radius,
                                q.outer_radius});
        return plan;
    }
    case TailKind::bounded: {
        const double m = *u.sup_bound;
        const double k = sum_abs_coef(num) * m / (sigma - 1.0);
        double r = q.outer_radius > 0.0 ? q.outer_radius : std::pow(k / tol, 1.0 / (sigma - 1.0));
        plan.radius = std::min(std::max(r, floor_radius), cap);
        plan.far = {0.0, k * std::pow(plan.radius, 1.0 - sigma)};
        return plan;
    }
    case TailKind::growth: {
        const PowerGrowth& g = *u.growth;
        const double p = g.exponent;
        if (!(p < sigma - 1.0)) {
            throw ValidationError("declared growth exponent " + std::to_string(p) +
                                  " violates the summability condition of the kernel");
        }
        double err_coef = 0.0;
        for (const auto& [a, c] : num.terms) {
            const double cg = a > 0.0 ? g.coeff_plus : g.coeff_minus;
            err_coef += std::abs(c) * std::abs(cg) * (std::abs(p) * std::pow(std::abs(a), p - 1.0) * (std::abs(x) + 1.0) + 1.0) /
                        (sigma - p);
        }
        double r = q.outer_radius > 0.0 ? q.outer_radius
                   : err_coef > 0.0   ? std::pow(err_coef / tol, 1.0 / (sigma - p))
                                      : floor_radius;
        plan.radius = std::min(std::max(r, floor_radius), cap);
        double value = 0.0;
        for (const auto& [a, c] : num.terms) {
            const double cg = a > 0.0 ? g.coeff_plus : g.coeff_minus;
            value += c * cg * std::pow(std::abs(a), p) * std::pow(plan.radius, p + 1.0 - sigma) / (sigma - 1.0 - p);
        }
        plan.far = {value, err_coef * std::pow(plan.radius, p - sigma)};
        return plan;
    }
    case TailKind::periodic:
        break;
    }
    return plan;
}

double inner_radius_for(const QuadratureSpec& q, const Features& f, double fallback)
{
    double r1 = q.inner_radius > 0.0 ? q.inner_radius : fallback;
    return std::min(r1, 0.5 * f.nearest_singular);
}

double max_feature(const Features& f)
{
    double m = 0.0;
    for (double d : f.plain) {
        m = std::max(m, d);
    }
    for (double d : f.singular) {
        m = std::max(m, d);
    }
    return m;
}

struct PowerIntegralSpec
{
    Numerator num;
    double sigma = 2.0;
    // Order of vanishing of the numerator at y = 0 (used when lo == 0).
    double k = 2.0;
    double rmin_fraction = 1e-3;
    double default_inner = 0.5;
};

// Integral over (lo, inf) of numerator(y) y^{-sigma}.  lo == 0 requires the numerator to vanish
// like y^k and uses the inner substitution.
Estimate power_kernel_integral(const FunctionHandle& u, double x, const PowerIntegralSpec& spec, double lo,
                               double tol, const QuadratureSpec& q)
{
    const TailKind kind = classify(u);
    const double ux = u(x);
    const Numerator& num = spec.num;
    auto g = [&](double y) {
        double v = num.c0 * ux;
        for (const auto& [a, c] : num.terms) {
            v += c * u(x + a * y);
        }
        return v;
    };
    auto integrand = [&](double y) { return g(y) * std::pow(y, -spec.sigma); };
    const Features feat = collect_features(u, x, num, q);

    Accumulator acc;
    double start = lo;
    if (lo == 0.0) {
        double r1 = inner_radius_for(q, feat, spec.default_inner);
        if (kind == TailKind::periodic) {
            r1 = std::min(r1, 0.25 * *u.period);
        }
        acc.add(integrate_inner(g, spec.k, spec.sigma, r1, spec.rmin_fraction * r1, 0.25 * tol, q.max_intervals));
        start = r1;
    }

    if (kind == TailKind::periodic) {
        const double period = *u.period;
        if (start >= period) {
            throw ValidationError("inner radius must be smaller than the period");
        }
        acc.add(integrate_segments(integrand, start, period, feat, q.panels_per_decade, 0.4 * tol, q.max_intervals));
        std::vector<double> lattice_pts;
        for (double d : feat.singular) {
            lattice_pts.push_back(d);
        }
        Features lattice_feat{feat.plain, lattice_pts, feat.nearest_singular};
        auto lattice = [&](double t) { return g(t) * lattice_remainder(t, period, spec.sigma); };
        acc.add(integrate_segments(lattice, 0.0, period, lattice_feat, q.panels_per_decade, 0.25 * tol,
                                   q.max_intervals));
        return acc.estimate();
    }

    const double floor_radius = std::max({4.0 * start, 2.0 * max_feature(feat), 16.0 * (1.0 + std::abs(x))});
    const TailPlan tail = plan_tail(u, x, num, spec.sigma, kind, kind == TailKind::support ? 2.0 * start : floor_radius,
                                    0.1 * tol, q);
    acc.add(integrate_segments(integrand, start, tail.radius, feat, q.panels_per_decade, 0.4 * tol, q.max_intervals));
    acc.add(Estimate{num.c0 * ux * std::pow(tail.radius, 1.0 - spec.sigma) / (spec.sigma - 1.0), 0.0});
    acc.add(tail.far);
    return acc.estimate();
}

void finish(Estimate& e, double abs_tol, const char* what)
{
    if (!std::isfinite(e.value)) {
        throw ToleranceError(std::string(what) + ": non-finite result", e, abs_tol);
    }
    if (e.error > abs_tol) {
        throw ToleranceError(std::string(what) + ": requested tolerance not reached within the panel budget", e,
                             abs_tol);
    }
}

void check_point(double x)
{
    if (!std::isfinite(x)) {
        throw ValidationError("evaluation point must be finite");
    }
}

} // namespace

Estimate fraclap(const FunctionHandle& u, double x, FracOrder order, const QuadratureSpec& q, FracLapMethod method)
{
    u.validate();
    q.validate();
    check_point(x);
    const double s = order.value();
    const double c = normalization_constant(1, order);
    const double tol = q.abs_tol / c;
    const double sigma = 1.0 + 2.0 * s;

    Estimate raw;
    if (method == FracLapMethod::second_difference) {
        PowerIntegralSpec spec{second_difference_numerator(), sigma, 2.0};
        raw = power_kernel_integral(u, x, spec, 0.0, tol, q);
    } else {
        Features feat = collect_features(u, x, second_difference_numerator(), q);
        double eps = q.inner_radius > 0.0 ? q.inner_radius : std::max(std::pow(tol, 1.0 / (2.0 - 2.0 * s)), 1e-3);
        eps = std::min({eps, 0.25 * feat.nearest_singular, 0.25});
        if (u.period) {
            eps = std::min(eps, 0.1 * *u.period);
        }
        Accumulator acc;
        for (double side : {1.0, -1.0}) {
            PowerIntegralSpec spec{one_sided_numerator(side), sigma, 1.0};
            acc.add(power_kernel_integral(u, x, spec, eps, 0.45 * tol, q));
        }
        // Inner ball: the second difference is -u'' y^2 - u'''' y^4 / 12 + ...
        const double h = eps;
        const double um2 = u(x - 2.0 * h);
        const double um1 = u(x - h);
        const double u0 = u(x);
        const double up1 = u(x + h);
        const double up2 = u(x + 2.0 * h);
        const double d2 = (-up2 + 16.0 * up1 - 30.0 * u0 + 16.0 * um1 - um2) / (12.0 * h * h);
        const double d4 = (up2 - 4.0 * up1 + 6.0 * u0 - 4.0 * um1 + um2) / (h * h * h * h);
        const double inner = -d2 * std::pow(eps, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) -
                             d4 * std::pow(eps, 4.0 - 2.0 * s) / (12.0 * (4.0 - 2.0 * s));
        acc.add(Estimate{inner, 0.0});
        raw = acc.estimate();
    }
    Estimate out{c * raw.value, c * raw.error};
    finish(out, q.abs_tol, "fraclap");
    return out;
}

std::vector<Estimate> fraclap_batch(const FunctionHandle& u, std::span<const double> xs, FracOrder s,
                                    const QuadratureSpec& q, FracLapMethod method, unsigned threads)
{
    std::vector<Estimate> out(xs.size());
    parallel_for(xs.size(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = fraclap(u, xs[i], s, q, method);
        }
    });
    return out;
}

Estimate regional_fraclap(const FunctionHandle& u, double x, FracOrder order, const Domain& omega,
                          const QuadratureSpec& q)
{
    if (omega.kind() == Domain::Kind::full_line) {
        return fraclap(u, x, order, q);
    }
    if (omega.kind() != Domain::Kind::interval) {
        throw ValidationError("regional_fraclap: domain must be an interval or the full line");
    }
    if (!omega.contains(x)) {
        throw ValidationError("regional_fraclap: x lies outside the domain");
    }
    if (!u.eval) {
        throw ValidationError("function handle has no evaluator");
    }
    q.validate();
    const double s = order.value();
    const double c = normalization_constant(1, order);
    const double tol = q.abs_tol / c;
    const double sigma = 1.0 + 2.0 * s;
    const double left = x - omega.lo();
    const double right = omega.hi() - x;
    const double d = std::min(left, right);
    const double far = std::max(left, right);
    const double far_side = right >= left ? 1.0 : -1.0;

    const double ux = u(x);
    auto g2 = [&](double y) { return 2.0 * ux - u(x + y) - u(x - y); };
    auto g1 = [&](double y) { return ux - u(x + far_side * y); };

    Features feat = collect_features(u, x, second_difference_numerator(), q);
    // Boundary points act like endpoints of the integration range.
    feat.plain.push_back(d);
    double r1 = std::min(inner_radius_for(q, feat, 0.5), 0.5 * d);

    Accumulator acc;
    acc.add(integrate_inner(g2, 2.0, sigma, r1, 1e-3 * r1, 0.25 * tol, q.max_intervals));
    acc.add(integrate_segments([&](double y) { return g2(y) * std::pow(y, -sigma); }, r1, d, feat, q.panels_per_decade,
                               0.35 * tol, q.max_intervals));
    if (far > d) {
        Features side = collect_features(u, x, one_sided_numerator(far_side), q);
        side.plain.push_back(d);
        acc.add(integrate_segments([&](double y) { return g1(y) * std::pow(y, -sigma); }, d, far, side,
                                   q.panels_per_decade, 0.35 * tol, q.max_intervals));
    }
    Estimate out{c * acc.value, c * acc.error};
    finish(out, q.abs_tol, "regional_fraclap");
    return out;
}

Estimate extension_halflap(const FunctionHandle& u, double x, const QuadratureSpec& q, std::span<const double> heights)
{
    u.validate();
    q.validate();
    check_point(x);
    std::vector<double> hs(heights.begin(), heights.end());
    if (hs.empty()) {
        hs = {0.04, 0.02, 0.01};
    }
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(hs[i] > 0.0) || (i > 0 && !(hs[i] < hs[i - 1]))) {
            throw ValidationError("extension_halflap: heights must be positive and strictly decreasing");
        }
    }
    const TailKind kind = classify(u);
    if (kind == TailKind::periodic) {
        throw ValidationError("extension_halflap: periodic handles are not supported");
    }
    const Numerator num = second_difference_numerator();
    const Features base = collect_features(u, x, num, q);
    const double ux = u(x);
    auto g = [&](double t) { return 2.0 * ux - u(x + t) - u(x - t); };
    const double tol = q.abs_tol * kPi / 10.0;

    std::vector<double> quotients;
    double quad_error = 0.0;
    for (double h : hs) {
        Features feat = base;
        for (double f : {0.25, 1.0, 4.0}) {
            feat.plain.push_back(f * h);
        }
        auto integrand = [&](double t) { return g(t) / (t * t + h * h); };
        const double floor_radius = std::max({16.0 * h, 2.0 * max_feature(feat), 16.0 * (1.0 + std::abs(x))});
        const TailPlan tail = plan_tail(u, x, num, 2.0, kind, floor_radius, 0.1 * tol, q);
        Accumulator acc;
        acc.add(integrate_segments(integrand, 0.0, tail.radius, feat, q.panels_per_decade, 0.8 * tol, q.max_intervals));
        acc.add(Estimate{2.0 * ux * (0.5 * kPi - std::atan(tail.radius / h)) / h, 0.0});
        acc.add(tail.far);
        quotients.push_back(acc.value / kPi);
        quad_error = std::max(quad_error, acc.error / kPi);
    }

    // Neville extrapolation to height 0.
    auto extrapolate = [&](std::size_t first) {
        std::vector<double> p(quotients.begin() + static_cast<std::ptrdiff_t>(first), quotients.end());
        std::vector<double> h(hs.begin() + static_cast<std::ptrdiff_t>(first), hs.end());
        for (std::size_t m = 1; m < p.size(); ++m) {
            for (std::size_t i = 0; i + m < p.size(); ++i) {
                p[i] = (h[i] * p[i + 1] - h[i + m] * p[i]) / (h[i] - h[i + m]);
            }
        }
        return p[0];
    };
    const double value = extrapolate(0);
    double indicator = hs.size() > 1 ? std::abs(value - extrapolate(1)) : std::abs(quotients[0]);
    double amplification = 1.0;
    for (std::size_t i = 1; i < hs.size(); ++i) {
        amplification *= (hs[0] + hs[i]) / (hs[0] - hs[i]);
    }
    Estimate out{value, indicator + amplification * quad_error};
    if (!std::isfinite(value) || indicator > 1e-2 * std::max(1.0, std::abs(value))) {
        throw ToleranceError("extension_halflap: extrapolation did not converge", out, 1e-2);
    }
    return out;
}

Estimate nonlocal_classical_lap(const FunctionHandle& u, double x, const QuadratureSpec& q)
{
    u.validate();
    q.validate();
    check_point(x);
    const double tol = q.abs_tol / 2.0;
    PowerIntegralSpec spec{fourth_difference_numerator(), 3.0, 4.0, 2e-2, 0.5};
    Estimate raw = power_kernel_integral(u, x, spec, 0.0, tol, q);
    Estimate out{2.0 * raw.value, 2.0 * raw.error};
    finish(out, q.abs_tol, "nonlocal_classical_lap");
    return out;
}

std::vector<DecaySample> decay_profile(const FunctionHandle& u, FracOrder s, std::span<const double> radii,
                                       const QuadratureSpec& q)
{
    if (u.smoothness != Smoothness::schwartz) {
        throw ValidationError("decay_profile: the function must be declared schwartz");
    }
    u.validate();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
            throw ValidationError("decay_profile: radii must be positive and increasing");
        }
    }
    std::vector<DecaySample> out;
    for (double r : radii) {
        const Estimate v = fraclap(u, r, s, q);
        out.push_back({r, std::pow(r, 1.0 + 2.0 * s.value()) * std::abs(v.value), v.value});
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Master operators

namespace {

double apply_norm(const Mat2& m, double w0, double w1, int n)
{
    if (n == 1) {
        return std::abs(m[0][0] * w0);
    }
    const double a = m[0][0] * w0 + m[0][1] * w1;
    const double b = m[1][0] * w0 + m[1][1] * w1;
    return std::hypot(a, b);
}

struct Direction
{
    double w0;
    double w1;
    double weight;
};

std::vector<Direction> sphere_rule(int n, int nodes)
{
    std::vector<Direction> dirs;
    if (n == 1) {
        dirs.push_back({1.0, 0.0, 1.0});
        dirs.push_back({-1.0, 0.0, 1.0});
        return dirs;
    }
    const double dtheta = 2.0 * kPi / nodes;
    for (int k = 0; k < nodes; ++k) {
        const double theta = dtheta * (k + 0.5);
        dirs.push_back({std::cos(theta), std::sin(theta), dtheta});
    }
    return dirs;
}

double max_entry_diff(const Mat2& a, const Mat2& b, int n)
{
    double d = 0.0;
    const int m = n == 1 ? 1 : 2;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            d = std::max(d, std::abs(a[i][j] - b[i][j]));
        }
    }
    return d;
}

double max_entry(const Mat2& a)
{
    double d = 0.0;
    for (const auto& row : a) {
        for (double v : row) {
            d = std::max(d, std::abs(v));
        }
    }
    return d;
}

} // namespace

MasterKernel MasterKernel::constant(Mat2 m, int dimension)
{
    MasterKernel k;
    k.dimension = dimension;
    k.form = Form::nondivergence;
    k.matrix = [m](Point2, Point2) { return m; };
    if (dimension == 1) {
        k.min_eig = k.max_eig = std::abs(m[0][0]);
    } else {
        // Singular values from the eigenvalues of M^T M.
        const double p = m[0][0] * m[0][0] + m[1][0] * m[1][0];
        const double r = m[0][1] * m[0][1] + m[1][1] * m[1][1];
        const double qv = m[0][0] * m[0][1] + m[1][0] * m[1][1];
        const double mid = 0.5 * (p + r);
        const double rad = std::sqrt(std::max(0.0, 0.25 * (p - r) * (p - r) + qv * qv));
        k.min_eig = std::sqrt(std::max(0.0, mid - rad));
        k.max_eig = std::sqrt(mid + rad);
    }
    return k;
}

void MasterKernel::validate() const
{
    if (dimension != 1 && dimension != 2) {
        throw ValidationError("master kernel: dimension must be 1 or 2");
    }
    if (!matrix) {
        throw ValidationError("master kernel: matrix field not set");
    }
    if (!(min_eig > 0.0) || !(max_eig >= min_eig) || !std::isfinite(max_eig)) {
        throw ValidationError("master kernel: need 0 < min_eig <= max_eig");
    }
    if (dimension == 2 && (angular_nodes < 8 || angular_nodes % 2 != 0)) {
        throw ValidationError("master kernel: angular_nodes must be even and at least 8");
    }
    const Point2 xs[] = {{0.0, 0.0}, {0.3, -0.7}, {-1.1, 0.4}};
    const Point2 ys[] = {{0.5, 0.2}, {-0.3, 0.9}, {1.5, -1.2}};
    for (Point2 x : xs) {
        for (Point2 y : ys) {
            if (dimension == 1) {
                x[1] = 0.0;
                y[1] = 0.0;
            }
            const Point2 neg{-y[0], -y[1]};
            Mat2 lhs;
            if (form == Form::divergence) {
                lhs = matrix(Point2{x[0] - y[0], x[1] - y[1]}, y);
            } else {
                lhs = matrix(x, y);
            }
            const Mat2 rhs = matrix(x, neg);
            if (max_entry_diff(lhs, rhs, dimension) > 1e-12 * std::max(1.0, max_entry(rhs))) {
                throw ValidationError("master kernel: declared symmetry identity fails at a sampled point");
            }
        }
    }
}

double CoefficientMatrix::apply(std::array<double, 2> gradient, Mat2 hessian) const
{
    double v = 0.0;
    const int n = dimension;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            v -= a[i][j] * hessian[i][j];
        }
        v -= b[i] * gradient[i];
    }
    return v;
}

Estimate master_operator(const FunctionHandle2& u, Point2 x, FracOrder order, const MasterKernel& k,
                         const QuadratureSpec& q)
{
    k.validate();
    q.validate();
    if (!u.eval) {
        throw ValidationError("function handle has no evaluator");
    }
    if (!u.support_radius || !(*u.support_radius > 0.0)) {
        throw ValidationError("master_operator: the function must declare a support radius");
    }
    const int n = k.dimension;
    if (n == 1) {
        x[1] = 0.0;
    }
    const double s = order.value();
    const double power = n + 2.0 * s;
    const double sigma = 1.0 + 2.0 * s;
    const auto dirs = sphere_rule(n, k.angular_nodes);
    const double ux = u(x);

    auto kernel_weight = [&](const Direction& d, double r) {
        const Point2 y{r * d.w0, r * d.w1};
        const Mat2 m = k.form == MasterKernel::Form::divergence ? k.matrix(Point2{x[0] - y[0], x[1] - y[1]}, y)
                                                                : k.matrix(x, y);
        const double norm = apply_norm(m, d.w0, d.w1, n);
        if (!std::isfinite(norm) || norm < k.min_eig * (1.0 - 1e-9) || norm > k.max_eig * (1.0 + 1e-9)) {
            throw ValidationError("master_operator: degenerate M detected at a quadrature node");
        }
        return d.weight * std::pow(norm, -power);
    };
    // Angular sum of (u(x) - u(x - r w)) / |M w|^{n+2s}; symmetric in w so the first order cancels.
    auto g = [&](double r) {
        double v = 0.0;
        for (const Direction& d : dirs) {
            v += (ux - u(Point2{x[0] - r * d.w0, x[1] - r * d.w1})) * kernel_weight(d, r);
        }
        return v;
    };
    auto far_g = [&](double r) {
        double v = 0.0;
        for (const Direction& d : dirs) {
            v += ux * kernel_weight(d, r);
        }
        return v;
    };

    const double rho = *u.support_radius;
    const double dist = std::hypot(x[0] - u.support_center[0], n == 1 ? 0.0 : x[1] - u.support_center[1]);
    const double tol = q.abs_tol / (1.0 - s);
    const double r1 = q.inner_radius > 0.0 ? q.inner_radius : 0.25 * std::min(1.0, rho);
    const double support_edge = std::max(dist + rho, 2.0 * r1);

    Accumulator acc;
    acc.add(integrate_inner(g, 2.0, sigma, r1, 1e-3 * r1, 0.25 * tol, q.max_intervals));
    Features feat;
    feat.plain = {support_edge};
    if (std::abs(dist - rho) > r1) {
        feat.plain.push_back(std::abs(dist - rho));
    }
    acc.add(integrate_segments([&](double r) { return g(r) * std::pow(r, -sigma); }, r1, support_edge, feat,
                               q.panels_per_decade, 0.35 * tol, q.max_intervals));
    const double far_edge = 1e3 * support_edge;
    acc.add(integrate_segments([&](double r) { return far_g(r) * std::pow(r, -sigma); }, support_edge, far_edge,
                               Features{}, q.panels_per_decade, 0.25 * tol, q.max_intervals));
    const double tail_scale = std::pow(far_edge, -2.0 * s) / (2.0 * s);
    const double g_far = far_g(far_edge);
    acc.add(Estimate{g_far * tail_scale, std::abs(g_far - far_g(0.1 * far_edge)) * tail_scale});

    Estimate out{(1.0 - s) * acc.value, (1.0 - s) * acc.error};
    finish(out, q.abs_tol, "master_operator");
    return out;
}

CoefficientMatrix classical_limit_coefficients(const MasterKernel& k, Point2 x)
{
    k.validate();
    const int n = k.dimension;
    if (n == 1) {
        x[1] = 0.0;
    }
    auto coefficients_at = [&](Point2 p) {
        Mat2 a{};
        const Mat2 m = k.matrix(p, Point2{0.0, 0.0});
        for (const Direction& d : sphere_rule(n, 1024)) {
            const double w = d.weight * std::pow(apply_norm(m, d.w0, d.w1, n), -(n + 2.0)) / 4.0;
            const double om[2] = {d.w0, d.w1};
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    a[i][j] += w * om[i] * om[j];
                }
            }
        }
        if (n == 2) {
            const double sym = 0.5 * (a[0][1] + a[1][0]);
            a[0][1] = a[1][0] = sym;
        }
        return a;
    };
    CoefficientMatrix out;
    out.dimension = n;
    out.a = coefficients_at(x);
    if (k.form == MasterKernel::Form::divergence) {
        const double h = 1e-4;
        for (int j = 0; j < n; ++j) {
            double b = 0.0;
            for (int i = 0; i < n; ++i) {
                Point2 xp = x;
                Point2 xm = x;
                xp[i] += h;
                xm[i] -= h;
                b += (coefficients_at(xp)[i][j] - coefficients_at(xm)[i][j]) / (2.0 * h);
            }
            out.b[j] = b;
        }
    }
    return out;
}

} // namespace fraclab
