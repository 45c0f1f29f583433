#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fraclab/heatflow.hpp"
#include "fraclab/spectral.hpp"
#include "support/oracle_math.hpp"

using namespace fraclab;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> uniform_grid(double half, double step)
{
    std::vector<double> x;
    const int n = static_cast<int>(std::lround(half / step));
    for (int i = -n; i <= n; ++i) {
        x.push_back(i * step);
    }
    return x;
}

} // namespace

TEST_SUITE("heatflow")
{
    TEST_CASE("s = 1/2 kernel is the Cauchy density")
    {
        auto x = uniform_grid(20.0, 0.05);
        auto t = heat_kernel_fourier(FracOrder(0.5), x);
        double worst = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            worst = std::max(worst, std::abs(t.values[i] - 1.0 / (pi * (1.0 + x[i] * x[i]))));
        }
        CHECK(worst < 1e-6);
        CHECK(t.mass == Approx(1.0).epsilon(1e-3));
    }

    TEST_CASE("peak value and mass")
    {
        auto x = uniform_grid(20.0, 0.05);
        for (double s : {0.25, 0.5, 0.75}) {
            // G_s(0) = (1/pi) int exp(-xi^{2s}); xi = w^{1/(2s)}
            auto f = [s](double w) {
                if (w <= 0.0) {
                    return 0.0;
                }
                return std::exp(-w) * std::pow(w, 1.0 / (2.0 * s) - 1.0) / (2.0 * s);
            };
            const double g0 = oracle_math::simpson(f, 0.0, 60.0, 1e-12) / pi;
            CHECK(heat_kernel_value(FracOrder(s), 0.0) == Approx(g0).epsilon(1e-8));
            CHECK(g0 == Approx(std::tgamma(1.0 + 1.0 / (2.0 * s)) / pi).epsilon(1e-8));
            auto t = heat_kernel_fourier(FracOrder(s), x);
            CHECK(t.mass == Approx(1.0).epsilon(1e-3));
            for (std::size_t i = 0; i < x.size(); ++i) {
                CHECK(t.values[i] > 0.0);
                CHECK(t.values[i] == Approx(t.values[x.size() - 1 - i]).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("power-law tails")
    {
        std::vector<double> r{25, 50, 100, 200};
        auto half = heat_kernel_fourier(FracOrder(0.5), r);
        auto fh = kernel_tail_fit(half, r);
        CHECK(fh.exponent == Approx(-2.0).epsilon(0.05 / 2));
        CHECK(fh.constant == Approx(1.0 / pi).epsilon(1e-3));
        CHECK(kernel_tail_constant(FracOrder(0.5)) == Approx(1.0 / pi).epsilon(1e-14));

        auto t75 = heat_kernel_fourier(FracOrder(0.75), r);
        CHECK(kernel_tail_fit(t75, r).exponent == Approx(-2.5).epsilon(0.1 / 2.5));

        std::vector<double> r25{100, 200, 400, 800};
        auto t25 = heat_kernel_fourier(FracOrder(0.25), r25);
        CHECK(kernel_tail_fit(t25, r25).exponent == Approx(-1.5).epsilon(0.1 / 1.5));

        std::vector<double> near{10, 20, 40};
        auto tn = heat_kernel_fourier(FracOrder(0.25), near);
        auto fn = kernel_tail_fit(tn, near);
        CHECK(fn.products[0] < fn.products[1]);
        CHECK(fn.products[1] < fn.products[2]);
        CHECK(fn.products[2] - fn.products[1] < fn.products[1] - fn.products[0]);

        std::vector<double> inside{1, 2, 4};
        auto ti = heat_kernel_fourier(FracOrder(0.5), inside);
        CHECK_THROWS_AS(kernel_tail_fit(ti, inside), ValidationError);
    }

    TEST_CASE("scaling property")
    {
        std::vector<double> bulk;
        for (int i = -50; i <= 50; ++i) {
            bulk.push_back(0.1 * i);
        }
        CHECK(kernel_scaling_check(FracOrder(0.5), 1.0, bulk) < 1e-3);
        std::vector<double> wide;
        for (double x : bulk) {
            wide.push_back(4.0 * x);
        }
        CHECK(kernel_scaling_check(FracOrder(0.5), 4.0, wide) < 1e-3);
        CHECK(kernel_scaling_check(FracOrder(0.75), 1.0, bulk) < 1e-3);

        // peak height scales like t^{-1} at s = 1/2
        const double g0 = heat_kernel_value(FracOrder(0.5), 0.0);
        CHECK(g0 / 2.0 == Approx(0.5 / pi).epsilon(1e-10));
    }

    TEST_CASE("truncated second moments grow without bound")
    {
        auto x = uniform_grid(40.0, 0.01);
        std::vector<double> R{10, 20, 40};
        auto half = truncated_msd(heat_kernel_fourier(FracOrder(0.5), x), R);
        CHECK(half[1].moment / half[0].moment == Approx(2.0).epsilon(0.1));
        CHECK(half[2].moment / half[1].moment == Approx(2.0).epsilon(0.1));
        auto t75 = truncated_msd(heat_kernel_fourier(FracOrder(0.75), x), R);
        CHECK(std::abs(t75[2].moment / t75[1].moment - std::sqrt(2.0)) < 0.1);

        std::vector<double> Rg{5, 10, 20};
        auto g = truncated_msd(gaussian_kernel_table(0.5, x), Rg);
        CHECK(g[1].moment == Approx(1.0).epsilon(1e-9));
        CHECK(g[2].moment == Approx(1.0).epsilon(1e-9));

        std::vector<double> far{50};
        CHECK_THROWS_AS(truncated_msd(gaussian_kernel_table(0.5, x), far), ValidationError);
    }

    TEST_CASE("diffusion fit")
    {
        std::vector<double> t{0.1, 0.2, 0.5, 1.0};
        std::vector<double> m{0.2, 0.4, 1.0, 2.0};
        auto r = fit_diffusion(t, m);
        CHECK(r.exponent == Approx(1.0));
        CHECK(r.constant == Approx(2.0));
        std::vector<double> short_t{1.0, 2.0};
        CHECK_THROWS_AS(fit_diffusion(short_t, short_t), ValidationError);
    }

    TEST_CASE("regional heat solver")
    {
        auto dom = Domain::interval(-1.0, 1.0);
        auto flat = GridFunction::sample(dom, 65, [](double) { return 0.7; });
        auto fr = regional_heat_solve(flat, FracOrder(0.5), 0.1);
        for (double v : fr.solution.values()) {
            CHECK(v == Approx(0.7).epsilon(1e-12));
        }

        auto bump = GridFunction::sample(dom, 129, [](double x) { return std::exp(-50 * x * x); });
        for (double t : {0.1, 0.5}) {
            auto r = regional_heat_solve(bump, FracOrder(0.5), t);
            CHECK(r.solution.integral() == Approx(bump.integral()).epsilon(1e-6));
            double mx = 0.0, mn = 1.0;
            for (double v : r.solution.values()) {
                mx = std::max(mx, v);
                mn = std::min(mn, v);
            }
            CHECK(mx <= 1.0 + 1e-12);
            CHECK(mn >= -1e-12);
        }

        RegionalHeatOptions big;
        big.dt = 1.0;
        auto rr = regional_heat_solve(bump, FracOrder(0.5), 0.01, big);
        CHECK(rr.dt_reduced);
        CHECK(rr.dt < 1.0);

        auto gen = regional_generator(dom, 33, FracOrder(0.5));
        for (std::size_t i = 0; i < 33; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < 33; ++j) {
                row += gen[i * 33 + j];
                if (i != j) {
                    CHECK(gen[i * 33 + j] >= 0.0);
                }
            }
            CHECK(std::abs(row) < 1e-9 * std::abs(gen[i * 33 + i]));
        }

        CHECK_THROWS_AS(regional_heat_solve(GridFunction::sample(Domain::torus(1.0), 32, [](double) { return 1.0; }),
                                            FracOrder(0.5), 0.1),
                        ValidationError);
    }

    TEST_CASE("regional evolution matches free space in the bulk at short times")
    {
        const double sig = 0.05;
        const double t = 0.01;
        auto u0 = GridFunction::sample(Domain::interval(-1.0, 1.0), 513, [&](double x) {
            return std::exp(-x * x / (2 * sig * sig)) / (std::sqrt(2 * pi) * sig);
        });
        auto r = regional_heat_solve(u0, FracOrder(0.5), t);
        double worst = 0.0;
        for (std::size_t i = 0; i < u0.size(); ++i) {
            const double x = u0.node(i);
            if (std::abs(x) <= 0.3) {
                const double ref = oracle_math::cauchy_gauss_evolution(x, t, sig);
                worst = std::max(worst, std::abs(r.solution[i] - ref) / ref);
            }
        }
        CHECK(worst < 0.02);
    }
}
