#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fraclab/core.hpp"

namespace fraclab {

enum class BasisKind { dirichlet_sine, neumann_cosine, torus_exponential };

/// Eigenpairs of -Laplacian: sqrt(2) sin(k pi x) on (0, 1) for Dirichlet (k >= 1), 1 and
/// sqrt(2) cos(j pi x) for Neumann (j >= 0), exp(2 pi i k x / period) on the torus.
struct SpectralBasis
{
    BasisKind kind = BasisKind::dirichlet_sine;
    double period = 1.0;

    double eigenvalue(std::size_t k) const;
    double eigenfunction(std::size_t k, double x) const;
};

/// Coefficients in a real basis.  Entry i holds mode i + 1 for Dirichlet and mode i for Neumann.
struct SpectralCoefficients
{
    SpectralBasis basis;
    std::vector<double> coeffs;

    std::size_t mode(std::size_t i) const { return basis.kind == BasisKind::dirichlet_sine ? i + 1 : i; }
};

/// Discrete projection of samples on the closed grid of [0, 1] onto the Dirichlet or Neumann
/// basis.  Pure modes are recovered exactly.
SpectralCoefficients analyze(const GridFunction& u, BasisKind kind);

/// Inverse of analyze on the same grid.
GridFunction synthesize(const SpectralCoefficients& c, const Domain& domain, std::size_t nodes);

SpectralCoefficients dirichlet_spectral_fraclap(const SpectralCoefficients& c, FracOrder s);
SpectralCoefficients neumann_spectral_fraclap(const SpectralCoefficients& c, FracOrder s);

/// Torus Fourier modes (r2c layout: k = 0 .. N/2), unnormalized.
struct TorusSpectrum
{
    std::vector<std::complex<double>> modes;
    std::size_t nodes = 0;
    double period = 1.0;

    double wavenumber(std::size_t k) const;
};

TorusSpectrum torus_analyze(const GridFunction& u);
GridFunction torus_synthesize(const TorusSpectrum& spectrum, const Domain& domain);

/// Multiplies every mode by |2 pi k / period|^{2 sigma}; sigma in (0, 1] (sigma = 1 is -Laplacian).
GridFunction torus_laplacian_power(const GridFunction& u, double sigma);

/// (-Delta)^s on the torus; the grid size must be a power of two.
GridFunction torus_fraclap(const GridFunction& u, FracOrder s);

/// (-Delta)^{s'} (-Delta)^s u; requires s + s' <= 1.
GridFunction semigroup_compose(const GridFunction& u, FracOrder s, FracOrder s_prime);

/// Exact per-mode exponential integrator for u_t = -(-Delta)^s u.
GridFunction spectral_heat_evolve(const GridFunction& u0, FracOrder s, double t);

/// Same with a real exponent sigma in (0, 1]; sigma = 1 is the classical heat equation.
GridFunction torus_heat_evolve(const GridFunction& u0, double sigma, double t);

} // namespace fraclab
