#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab {

using Point2 = std::array<double, 2>;

/// Fractional exponent s, strictly inside (0, 1).
class FracOrder
{
public:
    explicit FracOrder(double s);

    double value() const noexcept { return s_; }

    friend bool operator==(FracOrder, FracOrder) = default;

private:
    double s_;
};

struct Interval
{
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    double length() const noexcept { return hi - lo; }
};

/// Spatial domain of a grid or of a restricted operator.
///
/// Interval grids are closed ([a, b] with N nodes, spacing (b - a)/(N - 1)); torus grids are
/// closed-open ([origin, origin + period) with N nodes, spacing period/N).
class Domain
{
public:
    enum class Kind { full_line, interval, torus };

    static Domain full_line(int dimension = 1);
    static Domain interval(double a, double b);
    static Domain torus(double period, double origin = 0.0);

    Kind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return dimension_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double period() const noexcept { return hi_ - lo_; }

    /// Open-interior membership (the whole line for full_line, everything for torus).
    bool contains(double x) const noexcept;

private:
    Domain(Kind kind, int dimension, double lo, double hi) : kind_(kind), dimension_(dimension), lo_(lo), hi_(hi) {}

    Kind kind_;
    int dimension_;
    double lo_;
    double hi_;
};

/// Uniformly sampled real function on an interval or a torus.
class GridFunction
{
public:
    GridFunction(Domain domain, std::vector<double> values);

    static GridFunction sample(const Domain& domain, std::size_t n, const std::function<double(double)>& f);

    const Domain& domain() const noexcept { return domain_; }
    std::size_t size() const noexcept { return values_.size(); }
    double spacing() const noexcept { return spacing_; }
    double node(std::size_t i) const noexcept { return domain_.lo() + static_cast<double>(i) * spacing_; }
    std::vector<double> nodes() const;
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Same grid, new samples.
    GridFunction with_values(std::vector<double> values) const;

    /// Piecewise-linear interpolation; torus grids wrap, interval grids reject points outside [a, b].
    double interpolate(double x) const;

    /// Trapezoid integral (rectangle rule on the torus, which is the periodic trapezoid rule).
    double integral() const;

private:
    Domain domain_;
    std::vector<double> values_;
    double spacing_;
};

enum class Smoothness { c2_local, schwartz, bounded, singular_integrable };

/// Asymptotic growth u(y) ~ coeff_{+/-} |y|^exponent as y -> +/- infinity.
struct PowerGrowth
{
    double exponent = 0.0;
    double coeff_plus = 0.0;
    double coeff_minus = 0.0;
};

/// Pointwise-evaluable function on the line with the information quadrature needs about it.
struct FunctionHandle
{
    std::function<double(double)> eval;
    Smoothness smoothness = Smoothness::c2_local;
    /// u vanishes (to double precision) outside this interval.
    std::optional<Interval> support;
    /// Points where u or its derivatives are singular; quadrature grades toward them.
    std::vector<double> singular_points;
    /// Set for periodic functions; the singular integral is then lattice-summed.
    std::optional<double> period;
    /// Global bound on |u|, used to certify truncated tails of bounded functions.
    std::optional<double> sup_bound;
    /// Polynomial growth at infinity for unbounded functions.
    std::optional<PowerGrowth> growth;

    double operator()(double x) const { return eval(x); }

    /// Checks the handle's internal consistency (e.g. schwartz functions declare a support window).
    void validate() const;
};

/// Pointwise-evaluable function on the plane.
struct FunctionHandle2
{
    std::function<double(Point2)> eval;
    /// u vanishes outside the disc of this radius around support_center.
    std::optional<double> support_radius;
    Point2 support_center{0.0, 0.0};

    double operator()(Point2 x) const { return eval(x); }
};

/// Controls the singular-integral evaluators.  Zero radii mean "choose from abs_tol".
struct QuadratureSpec
{
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    int panels_per_decade = 8;
    double abs_tol = 1e-9;
    std::vector<double> singular_endpoints;
    std::size_t max_intervals = 40000;

    void validate() const;
};

/// C(n, s) = 4^s s Gamma(n/2 + s) / (pi^{n/2} Gamma(1 - s)), the constant for which the
/// singular integral has Fourier symbol |xi|^{2s}.  Supported for n in {1, 2}.
double normalization_constant(int n, FracOrder s);

/// u(x) minus the average of u over (x - r, x + r).
double mean_value_deficit(const FunctionHandle& u, double x, double r);

/// u(x) minus the average of u over the disc B_r(x).
double mean_value_deficit(const FunctionHandle2& u, Point2 x, double r);

} // namespace fraclab
