#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab::quad {

using Integrand = std::function<double(double)>;

struct IntegrationResult
{
    Estimate estimate;
    bool converged = false;
    std::size_t intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (10/21) integration over the panels delimited by
/// `breakpoints` (sorted, at least two entries).  The interval with the largest error
/// estimate is bisected until the summed error drops below abs_tol or the interval
/// budget is spent.
IntegrationResult integrate_panels(const Integrand& f, std::span<const double> breakpoints, double abs_tol,
                                   std::size_t max_intervals = 40000);

/// As integrate_panels, but throws ToleranceError when the tolerance is not met.
Estimate integrate(const Integrand& f, std::span<const double> breakpoints, double abs_tol,
                   std::size_t max_intervals = 40000);

Estimate integrate(const Integrand& f, double a, double b, double abs_tol, std::size_t max_intervals = 40000);

/// Fixed-order Gauss-Legendre rule (20 points) on [a, b].
double gauss_legendre(const Integrand& f, double a, double b);

/// Geometric sequence from `from` to `to` (both included, 0 < from < to) with the given
/// number of points per decade.
std::vector<double> geometric_points(double from, double to, int per_decade);

/// Points point +/- span * ratio^k (k = 1..levels), clipped to [lo, hi].  Used to grade panels
/// toward a singular point.
void add_graded_points(std::vector<double>& points, double point, double span, double lo, double hi,
                       int levels = 24, double ratio = 0.5);

/// Sorts, clips to [lo, hi] and removes near-duplicates (relative spacing below 1e-14).
std::vector<double> normalize_breakpoints(std::vector<double> points, double lo, double hi);

/// Richardson extrapolation of values computed at steps h, h/2, h/4, ... assuming an error
/// expansion c1 h + c2 h^2 + ...; returns the fully extrapolated value and the difference
/// between the last two tableau diagonals as an error indicator.
Estimate richardson(std::span<const double> values);

} // namespace fraclab::quad
