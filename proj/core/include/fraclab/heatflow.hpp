#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fraclab/core.hpp"

namespace fraclab {

/// Samples of the unit-time heat kernel on the line.  order is the fractional s, or 1 for the
/// Gaussian control kernel of u_t = u_xx.
struct HeatKernelTable
{
    double order = 0.5;
    std::vector<double> x;
    std::vector<double> values;
    /// Trapezoid integral over the table plus the algebraic tail beyond its ends.
    double mass = 0.0;
};

/// G_s(x) = (1/pi) * integral over (0, Xi) of exp(-xi^{2s}) cos(x xi), with exp(-Xi^{2s}) < 1e-12.
HeatKernelTable heat_kernel_fourier(FracOrder s, std::span<const double> x_grid, unsigned threads = 1);

/// Single kernel value; same quadrature as the table.
double heat_kernel_value(FracOrder s, double x);

/// exp(-x^2 / (4 t)) / sqrt(4 pi t): kernel of u_t = u_xx at time t.
HeatKernelTable gaussian_kernel_table(double t, std::span<const double> x_grid);

struct TailFit
{
    double exponent = 0.0;
    /// Limit estimate of |x|^{1+2s} G_s(x) (the product at the largest radius).
    double constant = 0.0;
    std::vector<double> products;
};

/// Log-log fit of the table over the given radii (|x| >= 5), by interpolation of the table when a
/// radius is not a table node.
TailFit kernel_tail_fit(const HeatKernelTable& table, std::span<const double> radii);

/// Leading tail coefficient: |x|^{1+2s} G_s(x) -> Gamma(1 + 2s) sin(pi s) / pi.
double kernel_tail_constant(FracOrder s);

/// Sup-norm relative deviation, over the bulk |x| <= 5 t^{1/(2s)} of x_grid, between the
/// spectral evolution of a point mass and t^{-1/(2s)} G_s(x t^{-1/(2s)}).
double kernel_scaling_check(FracOrder s, double t, std::span<const double> x_grid);

struct TruncatedMoment
{
    double radius = 0.0;
    double moment = 0.0;
};

/// Integral of x^2 G over |x| < R from the table (trapezoid; the table must cover every R).
std::vector<TruncatedMoment> truncated_msd(const HeatKernelTable& table, std::span<const double> radii);

struct DiffusionReport
{
    std::vector<double> times;
    std::vector<double> msd;
    double exponent = 0.0;
    double constant = 0.0;
    double half_width = 0.0;
};

/// Power-law fit msd ~ constant * t^exponent; requires positive data over at least one decade.
DiffusionReport fit_diffusion(std::span<const double> times, std::span<const double> msd);

struct RegionalHeatOptions
{
    /// Evolves u_t = -time_scale * (-Delta)^s_Omega u.
    double time_scale = 1.0;
    /// 0 selects 0.4 / max|diag|.
    double dt = 0.0;
    unsigned threads = 1;
};

struct RegionalHeatResult
{
    GridFunction solution;
    double dt = 0.0;
    std::size_t steps = 0;
    /// True when a requested dt exceeded the stability bound and was reduced.
    bool dt_reduced = false;
};

/// Generator of the censored process on the closed interval grid: (A u)_i = sum_j K_ij m_j (u_j - u_i)
/// with K symmetric and m the trapezoid weights, so rows annihilate constants and mass is conserved.
std::vector<double> regional_generator(const Domain& omega, std::size_t nodes, FracOrder s, unsigned threads = 1);

/// Method of lines with RK4 for u_t = -c (-Delta)^s_Omega u.
RegionalHeatResult regional_heat_solve(const GridFunction& u0, FracOrder s, double t,
                                       const RegionalHeatOptions& options = {});

} // namespace fraclab
