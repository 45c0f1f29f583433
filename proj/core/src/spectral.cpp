#include "fraclab/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace fraclab {

namespace {

constexpr double kPi = std::numbers::pi;

// The FFTW planner is not thread safe; execution with the new-array interface is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

class Plan
{
public:
    explicit Plan(fftw_plan p) : plan_(p)
    {
        if (!plan_) {
            throw std::runtime_error("FFTW failed to create a plan");
        }
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    fftw_plan get() const { return plan_; }

private:
    fftw_plan plan_;
};

// In-place real-to-real transform of the given kind (RODFT00 or REDFT00).
void r2r(std::vector<double>& data, fftw_r2r_kind kind)
{
    const int n = static_cast<int>(data.size());
    std::vector<double> out(data.size());
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_r2r_1d(n, data.data(), out.data(), kind, FFTW_ESTIMATE);
    }
    Plan plan(raw);
    fftw_execute(plan.get());
    data.swap(out);
}

bool is_power_of_two(std::size_t n)
{
    return n >= 2 && (n & (n - 1)) == 0;
}

void require_torus(const GridFunction& u, const char* what)
{
    if (u.domain().kind() != Domain::Kind::torus) {
        throw ValidationError(std::string(what) + ": torus grid required");
    }
}

void require_unit_interval(const Domain& d)
{
    if (d.kind() != Domain::Kind::interval || d.lo() != 0.0 || d.hi() != 1.0) {
        throw ValidationError("spectral interval operators are defined on the interval (0, 1)");
    }
}

SpectralCoefficients scale_modes(const SpectralCoefficients& c, FracOrder s, BasisKind expected)
{
    if (c.basis.kind != expected) {
        throw ValidationError("spectral operator applied to coefficients of the wrong basis");
    }
    SpectralCoefficients out = c;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
        const double lambda = c.basis.eigenvalue(c.mode(i));
        out.coeffs[i] = lambda == 0.0 ? 0.0 : out.coeffs[i] * std::pow(lambda, s.value());
    }
    return out;
}

template <typename Multiplier>
GridFunction apply_multiplier(const GridFunction& u, Multiplier&& mult)
{
    TorusSpectrum spec = torus_analyze(u);
    for (std::size_t k = 0; k < spec.modes.size(); ++k) {
        spec.modes[k] *= mult(spec.wavenumber(k));
    }
    return torus_synthesize(spec, u.domain());
}

} // namespace

double SpectralBasis::eigenvalue(std::size_t k) const
{
    switch (kind) {
    case BasisKind::dirichlet_sine:
    case BasisKind::neumann_cosine:
        return (k * kPi) * (k * kPi);
    case BasisKind::torus_exponential: {
        const double w = 2.0 * kPi * static_cast<double>(k) / period;
        return w * w;
    }
    }
    return 0.0;
}

double SpectralBasis::eigenfunction(std::size_t k, double x) const
{
    switch (kind) {
    case BasisKind::dirichlet_sine:
        return std::numbers::sqrt2 * std::sin(k * kPi * x);
    case BasisKind::neumann_cosine:
        return k == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(k * kPi * x);
    case BasisKind::torus_exponential:
        return std::cos(2.0 * kPi * static_cast<double>(k) * x / period);
    }
    return 0.0;
}

SpectralCoefficients analyze(const GridFunction& u, BasisKind kind)
{
    require_unit_interval(u.domain());
    const std::size_t m = u.size() - 1;
    SpectralCoefficients c;
    c.basis.kind = kind;
    if (kind == BasisKind::dirichlet_sine) {
        if (m < 2) {
            throw ValidationError("analyze: need at least one interior node");
        }
        std::vector<double> data(u.values().begin() + 1, u.values().end() - 1);
        r2r(data, FFTW_RODFT00);
        for (double& v : data) {
            v /= std::numbers::sqrt2 * static_cast<double>(m);
        }
        c.coeffs = std::move(data);
    } else if (kind == BasisKind::neumann_cosine) {
        std::vector<double> data(u.values().begin(), u.values().end());
        r2r(data, FFTW_REDFT00);
        const double md = static_cast<double>(m);
        data[0] /= 2.0 * md;
        for (std::size_t k = 1; k < m; ++k) {
            data[k] *= std::numbers::sqrt2 / (2.0 * md);
        }
        data[m] *= std::numbers::sqrt2 / (4.0 * md);
        c.coeffs = std::move(data);
    } else {
        throw ValidationError("analyze: use torus_analyze for torus grids");
    }
    return c;
}

GridFunction synthesize(const SpectralCoefficients& c, const Domain& domain, std::size_t nodes)
{
    require_unit_interval(domain);
    const std::size_t m = nodes - 1;
    if (c.basis.kind == BasisKind::dirichlet_sine) {
        if (c.coeffs.size() != m - 1) {
            throw ValidationError("synthesize: coefficient count does not match the grid");
        }
        std::vector<double> data = c.coeffs;
        r2r(data, FFTW_RODFT00);
        std::vector<double> values(nodes, 0.0);
        for (std::size_t j = 0; j + 1 < m; ++j) {
            values[j + 1] = data[j] / std::numbers::sqrt2;
        }
        return GridFunction(domain, std::move(values));
    }
    if (c.basis.kind == BasisKind::neumann_cosine) {
        if (c.coeffs.size() != nodes) {
            throw ValidationError("synthesize: coefficient count does not match the grid");
        }
        std::vector<double> data = c.coeffs;
        for (std::size_t k = 1; k < m; ++k) {
            data[k] *= std::numbers::sqrt2 / 2.0;
        }
        data[m] *= std::numbers::sqrt2;
        r2r(data, FFTW_REDFT00);
        return GridFunction(domain, std::move(data));
    }
    throw ValidationError("synthesize: use torus_synthesize for torus spectra");
}

SpectralCoefficients dirichlet_spectral_fraclap(const SpectralCoefficients& c, FracOrder s)
{
    return scale_modes(c, s, BasisKind::dirichlet_sine);
}

SpectralCoefficients neumann_spectral_fraclap(const SpectralCoefficients& c, FracOrder s)
{
    return scale_modes(c, s, BasisKind::neumann_cosine);
}

double TorusSpectrum::wavenumber(std::size_t k) const
{
    return 2.0 * kPi * static_cast<double>(k) / period;
}

TorusSpectrum torus_analyze(const GridFunction& u)
{
    require_torus(u, "torus_analyze");
    const std::size_t n = u.size();
    TorusSpectrum spec;
    spec.nodes = n;
    spec.period = u.domain().period();
    spec.modes.resize(n / 2 + 1);
    std::vector<double> in(u.values().begin(), u.values().end());
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(spec.modes.data()),
                                   FFTW_ESTIMATE);
    }
    Plan plan(raw);
    fftw_execute(plan.get());
    return spec;
}

GridFunction torus_synthesize(const TorusSpectrum& spectrum, const Domain& domain)
{
    const std::size_t n = spectrum.nodes;
    std::vector<std::complex<double>> modes = spectrum.modes;
    std::vector<double> out(n);
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(modes.data()), out.data(),
                                   FFTW_ESTIMATE);
    }
    Plan plan(raw);
    fftw_execute(plan.get());
    for (double& v : out) {
        v /= static_cast<double>(n);
    }
    return GridFunction(domain, std::move(out));
}

GridFunction torus_laplacian_power(const GridFunction& u, double sigma)
{
    require_torus(u, "torus_laplacian_power");
    if (!(sigma > 0.0 && sigma <= 1.0)) {
        throw ValidationError("torus_laplacian_power: exponent must lie in (0, 1]");
    }
    return apply_multiplier(u, [sigma](double w) { return w == 0.0 ? 0.0 : std::pow(w, 2.0 * sigma); });
}

GridFunction torus_fraclap(const GridFunction& u, FracOrder s)
{
    require_torus(u, "torus_fraclap");
    if (!is_power_of_two(u.size())) {
        throw ValidationError("torus_fraclap: grid size must be a power of two");
    }
    return torus_laplacian_power(u, s.value());
}

GridFunction semigroup_compose(const GridFunction& u, FracOrder s, FracOrder s_prime)
{
    if (s.value() + s_prime.value() > 1.0 + 1e-15) {
        throw ValidationError("semigroup_compose: requires s + s' <= 1");
    }
    return torus_fraclap(torus_fraclap(u, s), s_prime);
}

GridFunction spectral_heat_evolve(const GridFunction& u0, FracOrder s, double t)
{
    return torus_heat_evolve(u0, s.value(), t);
}

GridFunction torus_heat_evolve(const GridFunction& u0, double sigma, double t)
{
    require_torus(u0, "spectral_heat_evolve");
    if (!(t >= 0.0)) {
        throw ValidationError("spectral_heat_evolve: time must be nonnegative");
    }
    if (!(sigma > 0.0 && sigma <= 1.0)) {
        throw ValidationError("spectral_heat_evolve: exponent must lie in (0, 1]");
    }
    if (t == 0.0) {
        return u0;
    }
    return apply_multiplier(u0, [sigma, t](double w) { return std::exp(-std::pow(w, 2.0 * sigma) * t); });
}

} // namespace fraclab
