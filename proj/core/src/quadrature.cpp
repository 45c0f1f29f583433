#include "fraclab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fraclab::quad {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss10 = boost::math::quadrature::gauss<double, 10>;
using Gauss20 = boost::math::quadrature::gauss<double, 20>;

struct Panel
{
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod_panel(const Integrand& f, double a, double b)
{
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss10::weights();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(center);
    double kronrod = wk[0] * f0;
    double gauss = 0.0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double dx = half * xk[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += wk[i] * pair;
        // Gauss nodes coincide with the odd Kronrod nodes.
        if (i % 2 == 1) {
            gauss += wg[i / 2] * pair;
        }
    }
    kronrod *= half;
    gauss *= half;

    double error = std::abs(kronrod - gauss);
    if (!std::isfinite(kronrod)) {
        error = std::numeric_limits<double>::infinity();
    }
    return Panel{a, b, kronrod, error};
}

} // namespace

IntegrationResult integrate_panels(const Integrand& f, std::span<const double> breakpoints, double abs_tol,
                                   std::size_t max_intervals)
{
    IntegrationResult result;
    if (breakpoints.size() < 2) {
        result.converged = true;
        return result;
    }

    std::priority_queue<Panel> queue;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) {
            continue;
        }
        Panel p = kronrod_panel(f, breakpoints[i], breakpoints[i + 1]);
        total += p.value;
        total_error += p.error;
        queue.push(p);
    }

    // Panels narrower than this cannot be split meaningfully any more.
    auto too_narrow = [](const Panel& p) {
        return (p.b - p.a) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(p.a), std::abs(p.b));
    };

    std::vector<Panel> frozen;
    while (total_error > abs_tol && !queue.empty() && queue.size() + frozen.size() < max_intervals) {
        Panel worst = queue.top();
        queue.pop();
        if (too_narrow(worst)) {
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = kronrod_panel(f, worst.a, mid);
        Panel right = kronrod_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);

        // Re-sum periodically to keep cancellation drift out of the running totals.
        if ((queue.size() & 1023u) == 0) {
            total = 0.0;
            total_error = 0.0;
            auto copy = queue;
            while (!copy.empty()) {
                total += copy.top().value;
                total_error += copy.top().error;
                copy.pop();
            }
            for (const Panel& p : frozen) {
                total += p.value;
                total_error += p.error;
            }
        }
    }

    result.estimate = Estimate{total, total_error};
    result.converged = total_error <= abs_tol;
    result.intervals = queue.size() + frozen.size();
    return result;
}

Estimate integrate(const Integrand& f, std::span<const double> breakpoints, double abs_tol, std::size_t max_intervals)
{
    IntegrationResult r = integrate_panels(f, breakpoints, abs_tol, max_intervals);
    if (!r.converged) {
        throw ToleranceError("adaptive quadrature did not reach the requested tolerance", r.estimate, abs_tol);
    }
    return r.estimate;
}

Estimate integrate(const Integrand& f, double a, double b, double abs_tol, std::size_t max_intervals)
{
    const std::array<double, 2> bp{a, b};
    return integrate(f, bp, abs_tol, max_intervals);
}

double gauss_legendre(const Integrand& f, double a, double b)
{
    const auto& x = Gauss20::abscissa();
    const auto& w = Gauss20::weights();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += w[i] * (f(center - half * x[i]) + f(center + half * x[i]));
    }
    return sum * half;
}

std::vector<double> geometric_points(double from, double to, int per_decade)
{
    std::vector<double> pts;
    if (!(from > 0.0) || !(to > from)) {
        return pts;
    }
    const double per = std::max(per_decade, 1);
    const auto n = static_cast<int>(std::ceil(std::log10(to / from) * per - 1e-9));
    for (int k = 0; k < n; ++k) {
        pts.push_back(from * std::pow(10.0, k / per));
    }
    pts.push_back(to);
    return pts;
}

void add_graded_points(std::vector<double>& points, double point, double span, double lo, double hi, int levels,
                       double ratio)
{
    if (point >= lo && point <= hi) {
        points.push_back(point);
    }
    double d = span;
    for (int k = 0; k < levels; ++k) {
        d *= ratio;
        if (point - d > lo && point - d < hi) {
            points.push_back(point - d);
        }
        if (point + d > lo && point + d < hi) {
            points.push_back(point + d);
        }
    }
}

std::vector<double> normalize_breakpoints(std::vector<double> points, double lo, double hi)
{
    points.push_back(lo);
    points.push_back(hi);
    std::erase_if(points, [&](double x) { return !(x >= lo && x <= hi) || !std::isfinite(x); });
    std::sort(points.begin(), points.end());
    std::vector<double> out;
    out.reserve(points.size());
    for (double x : points) {
        if (out.empty() || x - out.back() > 1e-14 * std::abs(x)) {
            out.push_back(x);
        }
    }
    if (out.size() == 1) {
        out.push_back(hi);
    }
    return out;
}

Estimate richardson(std::span<const double> values)
{
    if (values.empty()) {
        return {};
    }
    std::vector<double> row(values.begin(), values.end());
    double previous_diagonal = row.back();
    double indicator = std::numeric_limits<double>::infinity();
    // Column k eliminates the h^k term: (2^k T_{i+1} - T_i) / (2^k - 1).
    for (std::size_t k = 1; k < values.size(); ++k) {
        const double factor = std::ldexp(1.0, static_cast<int>(k));
        std::vector<double> next(row.size() - 1);
        for (std::size_t i = 0; i + 1 < row.size(); ++i) {
            next[i] = (factor * row[i + 1] - row[i]) / (factor - 1.0);
        }
        indicator = std::abs(next.back() - previous_diagonal);
        previous_diagonal = next.back();
        row = std::move(next);
    }
    return Estimate{row.back(), indicator};
}

} // namespace fraclab::quad
