#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fraclab/core.hpp"

namespace fraclab {

/// Samples u(t_i) on an increasing grid starting at t = 0, optionally backed by an analytic
/// handle (value and derivative) that evaluators prefer when present.
struct TimeSeries
{
    std::vector<double> times;
    std::vector<double> values;
    double initial = 0.0;
    std::function<double(double)> value_fn;
    std::function<double(double)> derivative_fn;

    static TimeSeries sampled(std::vector<double> times, std::vector<double> values);
    static TimeSeries uniform(double horizon, std::size_t steps, const std::function<double(double)>& f);
    static TimeSeries analytic(std::function<double(double)> f, std::function<double(double)> df, double horizon,
                               std::size_t steps);

    void validate() const;
    bool is_uniform() const;
    double step() const;
    double horizon() const { return times.back(); }

    /// Analytic value when available, otherwise piecewise-linear interpolation.
    double value(double t) const;
    double integral(double a, double b) const;
};

/// c_j = ((j + 1)^{1-s} - j^{1-s}) / (1 - s), j = 0 .. horizon - 1.
struct MemoryWeights
{
    MemoryWeights(FracOrder s, std::size_t horizon);

    FracOrder order;
    std::vector<double> c;

    static double weight(FracOrder s, std::size_t j);
};

enum class CaputoScheme { direct_quadrature, l1 };

/// Unnormalized Caputo derivative: integral over (0, t) of u'(tau) (t - tau)^{-s}.
/// direct_quadrature uses the analytic derivative (or a finite difference of the analytic value,
/// or exact product integration of the piecewise-linear samples); l1 needs a uniform grid and t
/// on a grid node.  Returns 0 at t = 0.
double caputo_derivative(const TimeSeries& u, double t, FracOrder s, CaputoScheme scheme = CaputoScheme::l1);

/// L1 derivative at every grid node (entry 0 is 0).
std::vector<double> caputo_l1_series(const TimeSeries& u, FracOrder s);

/// s * integral over (-inf, t) of (u(t) - u(tau)) (t - tau)^{-1-s}, with u extended by u(0) for
/// tau <= 0.  Coincides with the unnormalized Caputo derivative.
double marchaud_derivative(const TimeSeries& u, double t, FracOrder s);

/// Solves caputo(u) = f, u(0) = u0: u(t) = u0 + sin(pi s)/pi * integral of f(tau) (t - tau)^{s-1},
/// by exact product integration of the piecewise-linear f.
TimeSeries volterra_inverse(const TimeSeries& f, double u0, FracOrder s);

struct LaplaceReport
{
    std::vector<double> omega;
    /// Laplace transform of the Caputo derivative, by double quadrature.
    std::vector<double> lhs;
    /// Gamma(1 - s) (omega^s L[u] - omega^{s-1} u(0)).
    std::vector<double> rhs;
    std::vector<double> residual;
    double max_residual = 0.0;
};

/// Requires an analytic handle with derivative; |u(t)| <= A e^{growth_rate t} must hold and every
/// omega must exceed growth_rate.  Residuals are relative to max(|rhs|, 1e-12), absolute below.
LaplaceReport laplace_identity_residual(const TimeSeries& u, FracOrder s, std::span<const double> omegas,
                                        double growth_rate = 0.0);

/// Weighted memory sum sum_{k=0}^{N-2} c_k u_{N-k} for a staircase with levels u_1 .. u_N on unit
/// intervals; requires u(0) = u_1 = 0.
double memory_average(std::span<const double> levels, FracOrder s, double u0 = 0.0);

/// Population moving with velocity f for a random lifetime k >= 1 with probability
/// p_k = k^{s-2} / C_phi.
struct CrowdModel
{
    CrowdModel(FracOrder s, TimeSeries velocity);

    FracOrder order;
    TimeSeries velocity;
    /// C_phi = zeta(2 - s).
    double c_phi;

    double probability(std::size_t k) const;
};

/// Average position (1/C_phi) sum_k phi(k) * integral of f over ((t - k)_+, t).  Lifetimes k >= t
/// all contribute the full integral and are summed in closed form.
double crowd_average(const CrowdModel& model, double t);

/// Solves the normalized time-fractional heat equation D^s u = u_xx on the torus (the Caputo
/// derivative divided by Gamma(1 - s)), L1 in time, exact per-mode in space.  Returns the
/// solution at every time of the uniform grid (first entry is u0).
std::vector<GridFunction> timefrac_heat_solve(const GridFunction& u0, FracOrder s, std::span<const double> t_grid);

/// Second moment about center (minimal-image distance on the torus); renormalizes the mass.
double msd_of_density(const GridFunction& rho, double center);

} // namespace fraclab
