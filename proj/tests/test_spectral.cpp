#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fraclab/pointops.hpp"
#include "fraclab/spectral.hpp"

using namespace fraclab;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

GridFunction torus_sample(std::size_t n, const std::function<double(double)>& f)
{
    return GridFunction::sample(Domain::torus(1.0), n, f);
}

double max_abs_diff(const GridFunction& a, const std::function<double(double)>& f)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - f(a.node(i))));
    }
    return m;
}

} // namespace

TEST_SUITE("spectral")
{
    TEST_CASE("torus eigenmode and zero mode")
    {
        for (double s : {0.25, 0.5, 0.75}) {
            auto c = torus_sample(64, [](double x) { return std::cos(2 * pi * x); });
            auto r = torus_fraclap(c, FracOrder(s));
            const double lam = std::pow(2 * pi, 2 * s);
            CHECK(max_abs_diff(r, [&](double x) { return lam * std::cos(2 * pi * x); }) < 1e-12 * lam);
        }
        auto one = torus_sample(32, [](double) { return 1.0; });
        auto z = torus_fraclap(one, FracOrder(0.3));
        CHECK(max_abs_diff(z, [](double) { return 0.0; }) < 1e-14);

        auto odd = torus_sample(30, [](double x) { return std::cos(2 * pi * x); });
        CHECK_THROWS_AS(torus_fraclap(odd, FracOrder(0.5)), ValidationError);
    }

    TEST_CASE("semigroup composition")
    {
        auto u = torus_sample(64, [](double x) {
            return std::cos(2 * pi * x) + 0.5 * std::sin(6 * pi * x) + 0.25 * std::cos(10 * pi * x);
        });
        auto half = semigroup_compose(u, FracOrder(0.5), FracOrder(0.5));
        auto lap = torus_laplacian_power(u, 1.0);
        auto A = torus_analyze(half);
        auto B = torus_analyze(lap);
        for (std::size_t k = 0; k < A.modes.size(); ++k) {
            if (std::abs(B.modes[k]) > 1e-8) {
                CHECK(std::abs(A.modes[k] - B.modes[k]) / std::abs(B.modes[k]) < 1e-12);
            }
        }

        auto ab = torus_analyze(semigroup_compose(u, FracOrder(0.3), FracOrder(0.4)));
        auto ba = torus_analyze(semigroup_compose(u, FracOrder(0.4), FracOrder(0.3)));
        auto pw = torus_analyze(torus_laplacian_power(u, 0.7));
        for (std::size_t k = 0; k < ab.modes.size(); ++k) {
            CHECK(std::abs(ab.modes[k] - ba.modes[k]) <= 1e-12 * (1.0 + std::abs(ab.modes[k])));
            CHECK(std::abs(ab.modes[k] - pw.modes[k]) <= 1e-12 * (1.0 + std::abs(pw.modes[k])));
        }
        CHECK_THROWS_AS(semigroup_compose(u, FracOrder(0.6), FracOrder(0.6)), ValidationError);
    }

    TEST_CASE("torus multiplier agrees with the periodized singular integral")
    {
        auto bump = [](double x) { return std::exp(std::cos(2 * pi * x)); };
        FunctionHandle h{bump, Smoothness::bounded};
        h.period = 1.0;
        h.sup_bound = std::exp(1.0);
        auto g = torus_sample(64, bump);
        for (double s : {0.25, 0.5, 0.75}) {
            auto r = torus_fraclap(g, FracOrder(s));
            for (std::size_t i = 0; i < 64; i += 8) {
                const double v = fraclap(h, g.node(i), FracOrder(s)).value;
                CHECK(std::abs(v - r[i]) < 1e-3);
            }
        }
    }

    TEST_CASE("Dirichlet and Neumann bases")
    {
        auto d = GridFunction::sample(Domain::interval(0, 1), 65, [](double x) {
            return std::sqrt(2.0) * (std::sin(pi * x) + std::sin(2 * pi * x));
        });
        auto dc = analyze(d, BasisKind::dirichlet_sine);
        CHECK(dc.coeffs[0] == Approx(1.0).epsilon(1e-13));
        CHECK(dc.coeffs[1] == Approx(1.0).epsilon(1e-13));
        const double s = 0.4;
        auto df = dirichlet_spectral_fraclap(dc, FracOrder(s));
        CHECK(df.coeffs[0] == Approx(std::pow(pi, 2 * s)).epsilon(1e-12));
        CHECK(df.coeffs[1] == Approx(std::pow(2 * pi, 2 * s)).epsilon(1e-12));
        auto near_one = dirichlet_spectral_fraclap(dc, FracOrder(1.0 - 1e-9));
        CHECK(near_one.coeffs[1] == Approx(4 * pi * pi).epsilon(1e-7));

        auto back = synthesize(dc, Domain::interval(0, 1), 65);
        for (std::size_t i = 0; i < 65; ++i) {
            CHECK(std::abs(back[i] - d[i]) < 1e-13);
        }

        auto n = GridFunction::sample(Domain::interval(0, 1), 65, [](double x) {
            return 1.0 + std::sqrt(2.0) * std::cos(pi * x) + 0.3 * std::sqrt(2.0) * std::cos(4 * pi * x);
        });
        auto nc = analyze(n, BasisKind::neumann_cosine);
        CHECK(nc.coeffs[0] == Approx(1.0).epsilon(1e-13));
        CHECK(nc.coeffs[4] == Approx(0.3).epsilon(1e-12));
        auto nf = neumann_spectral_fraclap(nc, FracOrder(0.5));
        CHECK(nf.coeffs[0] == 0.0);
        CHECK(nf.coeffs[1] == Approx(pi).epsilon(1e-12));
        auto out = synthesize(nf, Domain::interval(0, 1), 65);
        CHECK(std::abs(out.integral()) < 1e-12);

        CHECK_THROWS_AS(neumann_spectral_fraclap(dc, FracOrder(0.5)), ValidationError);
    }

    TEST_CASE("eigenfunction fidelity up to a quarter of the grid")
    {
        const std::size_t n = 129;
        for (std::size_t k = 1; k <= 32; k += 7) {
            auto phi = GridFunction::sample(Domain::interval(0, 1), n, [&](double x) {
                return std::sqrt(2.0) * std::sin(k * pi * x);
            });
            auto c = dirichlet_spectral_fraclap(analyze(phi, BasisKind::dirichlet_sine), FracOrder(0.3));
            CHECK(c.coeffs[k - 1] == Approx(std::pow(k * pi, 0.6)).epsilon(1e-10));
        }
    }

    TEST_CASE("spectral heat evolution")
    {
        auto u = torus_sample(64, [](double x) { return std::cos(2 * pi * x) + 0.2; });
        auto same = spectral_heat_evolve(u, FracOrder(0.5), 0.0);
        CHECK(max_abs_diff(same, [&](double x) { return std::cos(2 * pi * x) + 0.2; }) == 0.0);

        const double s = 0.6;
        const double t = 0.05;
        auto e = spectral_heat_evolve(u, FracOrder(s), t);
        const double damp = std::exp(-std::pow(2 * pi, 2 * s) * t);
        CHECK(max_abs_diff(e, [&](double x) { return damp * std::cos(2 * pi * x) + 0.2; }) < 1e-13);

        auto h1 = spectral_heat_evolve(spectral_heat_evolve(u, FracOrder(s), t / 2), FracOrder(s), t / 2);
        auto A = torus_analyze(h1);
        auto B = torus_analyze(e);
        for (std::size_t k = 0; k < A.modes.size(); ++k) {
            CHECK(std::abs(A.modes[k] - B.modes[k]) <= 1e-12 * (1e-12 + std::abs(B.modes[k])) + 1e-14);
        }

        auto box = GridFunction::sample(Domain::torus(1.0), 256, [](double x) { return std::abs(x - 0.5) < 0.1 ? 1.0 : 0.0; });
        for (double sv : {0.25, 0.5, 0.75}) {
            auto ev = spectral_heat_evolve(box, FracOrder(sv), 1e-3);
            double mn = 1.0;
            for (double v : ev.values()) {
                mn = std::min(mn, v);
            }
            CHECK(mn > -1e-12);
            CHECK(ev.integral() == Approx(box.integral()).epsilon(1e-12));
        }
    }
}
