#pragma once

#include <span>

namespace fraclab {

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit
{
    double slope = 0.0;
    double intercept = 0.0;
    /// Standard error of the slope (0 for exactly two points).
    double slope_stderr = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// y = constant * x^exponent fitted in log-log coordinates; all inputs must be positive.
struct PowerLawFit
{
    double exponent = 0.0;
    double constant = 0.0;
    /// Half-width of an approximate 95% interval on the exponent.
    double half_width = 0.0;
};

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);

/// Coefficient of variation: sample standard deviation over |mean|.
double coefficient_of_variation(std::span<const double> v);

} // namespace fraclab
