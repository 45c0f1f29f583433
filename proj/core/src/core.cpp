#include "fraclab/core.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fraclab/quadrature.hpp"

namespace fraclab {

FracOrder::FracOrder(double s) : s_(s)
{
    if (!(s > 0.0 && s < 1.0)) {
        throw ValidationError("fractional order must lie strictly inside (0, 1), got " + std::to_string(s));
    }
}

Domain Domain::full_line(int dimension)
{
    if (dimension != 1 && dimension != 2) {
        throw ValidationError("only dimensions 1 and 2 are supported");
    }
    return Domain(Kind::full_line, dimension, -std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity());
}

Domain Domain::interval(double a, double b)
{
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ValidationError("interval domain needs finite a < b");
    }
    return Domain(Kind::interval, 1, a, b);
}

Domain Domain::torus(double period, double origin)
{
    if (!(period > 0.0) || !std::isfinite(period) || !std::isfinite(origin)) {
        throw ValidationError("torus period must be positive and finite");
    }
    return Domain(Kind::torus, 1, origin, origin + period);
}

bool Domain::contains(double x) const noexcept
{
    switch (kind_) {
    case Kind::full_line:
    case Kind::torus:
        return std::isfinite(x);
    case Kind::interval:
        return lo_ < x && x < hi_;
    }
    return false;
}

GridFunction::GridFunction(Domain domain, std::vector<double> values) : domain_(domain), values_(std::move(values))
{
    if (domain_.kind() == Domain::Kind::full_line) {
        throw ValidationError("grid functions live on an interval or a torus");
    }
    if (values_.size() < 2) {
        throw ValidationError("grid functions need at least two nodes");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw ValidationError("grid function values must be finite");
        }
    }
    const double n = static_cast<double>(values_.size());
    spacing_ = domain_.kind() == Domain::Kind::torus ? domain_.period() / n : (domain_.hi() - domain_.lo()) / (n - 1.0);
}

GridFunction GridFunction::sample(const Domain& domain, std::size_t n, const std::function<double(double)>& f)
{
    if (n < 2) {
        throw ValidationError("grid functions need at least two nodes");
    }
    const double h = domain.kind() == Domain::Kind::torus ? domain.period() / static_cast<double>(n)
                                                          : (domain.hi() - domain.lo()) / static_cast<double>(n - 1);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = f(domain.lo() + static_cast<double>(i) * h);
    }
    return GridFunction(domain, std::move(values));
}

std::vector<double> GridFunction::nodes() const
{
    std::vector<double> x(size());
    for (std::size_t i = 0; i < size(); ++i) {
        x[i] = node(i);
    }
    return x;
}

GridFunction GridFunction::with_values(std::vector<double> values) const
{
    if (values.size() != values_.size()) {
        throw ValidationError("with_values: size mismatch");
    }
    return GridFunction(domain_, std::move(values));
}

double GridFunction::interpolate(double x) const
{
    const std::size_t n = size();
    if (domain_.kind() == Domain::Kind::torus) {
        const double period = domain_.period();
        double t = std::fmod(x - domain_.lo(), period);
        if (t < 0.0) {
            t += period;
        }
        const double pos = t / spacing_;
        auto i = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(i);
        i %= n;
        return (1.0 - frac) * values_[i] + frac * values_[(i + 1) % n];
    }
    const double tol = 1e-12 * (domain_.hi() - domain_.lo());
    if (x < domain_.lo() - tol || x > domain_.hi() + tol) {
        throw ValidationError("interpolate: point outside the interval grid");
    }
    const double pos = std::clamp((x - domain_.lo()) / spacing_, 0.0, static_cast<double>(n - 1));
    auto i = std::min(static_cast<std::size_t>(std::floor(pos)), n - 2);
    const double frac = pos - static_cast<double>(i);
    return (1.0 - frac) * values_[i] + frac * values_[i + 1];
}

double GridFunction::integral() const
{
    double sum = 0.0;
    for (double v : values_) {
        sum += v;
    }
    if (domain_.kind() == Domain::Kind::interval) {
        sum -= 0.5 * (values_.front() + values_.back());
    }
    return sum * spacing_;
}

void FunctionHandle::validate() const
{
    if (!eval) {
        throw ValidationError("function handle has no evaluator");
    }
    if (smoothness == Smoothness::schwartz && !support) {
        throw ValidationError("schwartz-class handles must declare an effective support window");
    }
    if (support && !(support->lo < support->hi)) {
        throw ValidationError("support window must satisfy lo < hi");
    }
    if (period && !(*period > 0.0)) {
        throw ValidationError("period must be positive");
    }
}

void QuadratureSpec::validate() const
{
    if (!(abs_tol > 0.0)) {
        throw ValidationError("quadrature abs_tol must be positive");
    }
    if (inner_radius < 0.0 || outer_radius < 0.0) {
        throw ValidationError("quadrature radii must be nonnegative (0 selects automatically)");
    }
    if (inner_radius > 0.0 && outer_radius > 0.0 && !(inner_radius < outer_radius)) {
        throw ValidationError("quadrature needs inner_radius < outer_radius");
    }
    if (panels_per_decade < 4) {
        throw ValidationError("quadrature needs at least 4 panels per decade");
    }
    if (max_intervals < 16) {
        throw ValidationError("quadrature interval budget too small");
    }
}

double normalization_constant(int n, FracOrder order)
{
    if (n != 1 && n != 2) {
        throw ValidationError("normalization_constant: unsupported dimension " + std::to_string(n));
    }
    const double s = order.value();
    const double half_n = 0.5 * n;
    return std::pow(4.0, s) * s * std::tgamma(half_n + s) / (std::pow(std::numbers::pi, half_n) * std::tgamma(1.0 - s));
}

double mean_value_deficit(const FunctionHandle& u, double x, double r)
{
    if (!(r > 0.0)) {
        throw ValidationError("mean_value_deficit: radius must be positive");
    }
    const double center = u(x);
    // Average of u(x + y) - u(x) keeps the subtraction where the numbers are small.
    const double avg = quad::gauss_legendre([&](double y) { return u(x + y) - center; }, -r, r) / (2.0 * r);
    return -avg;
}

double mean_value_deficit(const FunctionHandle2& u, Point2 x, double r)
{
    if (!(r > 0.0)) {
        throw ValidationError("mean_value_deficit: radius must be positive");
    }
    const double center = u(x);
    constexpr int angles = 64;
    double total = 0.0;
    for (int k = 0; k < angles; ++k) {
        const double theta = 2.0 * std::numbers::pi * (k + 0.5) / angles;
        const double c = std::cos(theta);
        const double sn = std::sin(theta);
        total += quad::gauss_legendre(
            [&](double rho) { return rho * (u(Point2{x[0] + rho * c, x[1] + rho * sn}) - center); }, 0.0, r);
    }
    const double avg = total * (2.0 * std::numbers::pi / angles) / (std::numbers::pi * r * r);
    return -avg;
}

} // namespace fraclab
