#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fraclab/fitting.hpp"
#include "fraclab/oracles.hpp"
#include "fraclab/pointops.hpp"
#include "support/oracle_math.hpp"

using namespace fraclab;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

FunctionHandle gaussian()
{
    FunctionHandle g{[](double x) { return std::exp(-x * x); }, Smoothness::schwartz};
    g.support = Interval{-9.0, 9.0};
    return g;
}

FunctionHandle arctan_layer()
{
    FunctionHandle f{[](double x) { return 2.0 / pi * std::atan(x); }, Smoothness::bounded};
    f.sup_bound = 1.0;
    return f;
}

// (1 - x^2)^3 on (-1, 1): C^2, compact support
FunctionHandle poly_bump()
{
    FunctionHandle f{[](double x) {
        const double q = 1.0 - x * x;
        return q > 0.0 ? q * q * q : 0.0;
    }};
    f.support = Interval{-1.0, 1.0};
    f.singular_points = {-1.0, 1.0};
    return f;
}

// Gaussian multiplier oracle: (-Delta)^s e^{-x^2}(x) = (1/pi) int_0^inf xi^{2s} sqrt(pi) e^{-xi^2/4} cos(x xi)
double gaussian_image(double x, double s)
{
    auto f = [&](double xi) { return std::pow(xi, 2.0 * s) * std::sqrt(pi) * std::exp(-0.25 * xi * xi) * std::cos(x * xi); };
    // substitution xi = w^2 smooths the xi^{2s} cusp at the origin
    auto g = [&](double w) { return 2.0 * w * f(w * w); };
    return oracle_math::simpson(g, 0.0, std::sqrt(14.0), 1e-13) / pi;
}

} // namespace

TEST_SUITE("pointops")
{
    TEST_CASE("constants are s-harmonic")
    {
        FunctionHandle c{[](double) { return 5.0; }, Smoothness::bounded};
        c.sup_bound = 5.0;
        for (double s : {0.25, 0.5, 0.75}) {
            // the truncated tail of a bounded function is certified, not exact
            const auto e = fraclap(c, 0.3, FracOrder(s));
            CHECK(std::abs(e.value) <= e.error + 1e-14);
            CHECK(e.error <= QuadratureSpec{}.abs_tol);
        }
    }

    TEST_CASE("Gaussian matches the Fourier multiplier")
    {
        auto g = gaussian();
        for (double s : {0.25, 0.5, 0.75}) {
            for (double x : {0.0, 0.7, 2.0}) {
                const double ref = gaussian_image(x, s);
                CHECK(fraclap(g, x, FracOrder(s)).value == Approx(ref).epsilon(1e-7));
            }
        }
    }

    TEST_CASE("arctan layer reproduces its explicit image")
    {
        auto f = arctan_layer();
        const double v = fraclap(f, 1.0, FracOrder(0.5)).value;
        CHECK(v == Approx(1.0 / pi).epsilon(1e-9));
        for (double x : {0.0, 0.5, 3.0}) {
            const double image = 2.0 * x / (pi * (x * x + 1.0));
            CHECK(std::abs(fraclap(f, x, FracOrder(0.5)).value - image) < 1e-8);
        }
    }

    TEST_CASE("u_1/2 has a constant image equal to 1")
    {
        auto e = oracle("u_half");
        QuadratureSpec q;
        q.abs_tol = 1e-9;
        std::vector<double> vals;
        for (double x : {-0.5, 0.0, 0.5}) {
            vals.push_back(fraclap(e.function, x, FracOrder(0.5), q).value);
        }
        for (double v : vals) {
            CHECK(v == Approx(1.0).epsilon(1e-7));
        }
    }

    TEST_CASE("periodic cosine in one dimension")
    {
        FunctionHandle c{[](double x) { return std::cos(2.0 * pi * x); }, Smoothness::bounded};
        c.period = 1.0;
        c.sup_bound = 1.0;
        for (double s : {0.25, 0.5, 0.75}) {
            const double v = fraclap(c, 0.1, FracOrder(s)).value;
            CHECK(v == Approx(std::pow(2.0 * pi, 2.0 * s) * std::cos(0.2 * pi)).epsilon(1e-6));
        }
    }

    TEST_CASE("growth tail of the one-sided square root")
    {
        // (x_+)^{1/2} is 1/2-harmonic on (0, inf)
        auto e = oracle("halfspace_power");
        for (double x : {0.5, 1.0, 2.0}) {
            CHECK(std::abs(fraclap(e.function, x, FracOrder(0.5)).value) < 1e-6);
        }
    }

    TEST_CASE("methods agree on smooth oracles")
    {
        auto g = gaussian();
        auto b = poly_bump();
        QuadratureSpec q;
        q.abs_tol = 1e-9;
        for (double s : {0.25, 0.5, 0.75}) {
            for (double x : {-0.6, 0.0, 0.35}) {
                for (const auto* f : {&g, &b}) {
                    const double a = fraclap(*f, x, FracOrder(s), q, FracLapMethod::second_difference).value;
                    const double p = fraclap(*f, x, FracOrder(s), q, FracLapMethod::pv_split).value;
                    CHECK(std::abs(a - p) < 2e-8);
                }
            }
        }
    }

    TEST_CASE("summability is enforced")
    {
        FunctionHandle lin{[](double x) { return x; }};
        lin.growth = PowerGrowth{1.0, 1.0, -1.0};
        // growth exponent 1 >= 2s is not summable at s = 0.25
        CHECK_THROWS_AS(fraclap(lin, 0.0, FracOrder(0.25)), ValidationError);
        FunctionHandle bare{[](double x) { return x; }};
        CHECK_THROWS_AS(fraclap(bare, 0.0, FracOrder(0.5)), ValidationError);
    }

    TEST_CASE("batch evaluation is thread-count independent")
    {
        auto g = gaussian();
        std::vector<double> xs{-1.0, -0.3, 0.0, 0.4, 1.5};
        auto one = fraclap_batch(g, xs, FracOrder(0.4), {}, FracLapMethod::second_difference, 1);
        auto many = fraclap_batch(g, xs, FracOrder(0.4), {}, FracLapMethod::second_difference, 3);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            CHECK(one[i].value == many[i].value);
        }
    }

    TEST_CASE("regional operator")
    {
        FunctionHandle c{[](double) { return 2.0; }, Smoothness::bounded};
        c.sup_bound = 2.0;
        CHECK(std::abs(regional_fraclap(c, 0.0, FracOrder(0.5), Domain::interval(-1.0, 1.0)).value) < 1e-12);

        auto g = gaussian();
        CHECK(regional_fraclap(g, 0.5, FracOrder(0.5), Domain::full_line()).value ==
              Approx(fraclap(g, 0.5, FracOrder(0.5)).value).epsilon(1e-12));

        FunctionHandle p{[](double x) { return 1.0 - x * x; }};
        p.growth = PowerGrowth{2.0, -1.0, -1.0};
        CHECK(regional_fraclap(p, 0.0, FracOrder(0.5), Domain::interval(-1.0, 1.0)).value > 0.0);
    }

    TEST_CASE("extension method")
    {
        auto f = arctan_layer();
        CHECK(extension_halflap(f, 0.5).value == Approx(4.0 / (5.0 * pi)).epsilon(1e-5));

        auto u = oracle("u_half").function;
        const double direct = fraclap(u, 0.0, FracOrder(0.5)).value;
        CHECK(std::abs(extension_halflap(u, 0.0).value - direct) < 1e-3);
    }

    TEST_CASE("nonlocal representation of the Laplacian")
    {
        const double c = 8.0 * std::log(2.0);
        auto g = gaussian();
        for (double x : {0.0, 0.3}) {
            const double lap = (4.0 * x * x - 2.0) * std::exp(-x * x);
            CHECK(nonlocal_classical_lap(g, x).value / (-lap) == Approx(c).epsilon(1e-6));
        }
        auto b = poly_bump();
        const double x = 0.2;
        const double q = 1.0 - x * x;
        const double lap = 24.0 * x * x * q - 6.0 * q * q;
        const double r = nonlocal_classical_lap(b, x).value;
        CHECK(r > 0.0);
        CHECK(r / (-lap) == Approx(c).epsilon(1e-6));

        FunctionHandle aff{[](double x) { return 3.0 * x - 1.0; }};
        aff.growth = PowerGrowth{1.0, 3.0, -3.0};
        CHECK(std::abs(nonlocal_classical_lap(aff, 0.4).value) < 1e-9);
    }

    TEST_CASE("decay of the Gaussian image")
    {
        auto g = gaussian();
        std::vector<double> radii{8.0, 16.0, 32.0};
        auto prof = decay_profile(g, FracOrder(0.5), radii);
        // far from the support the image is -C(1, s) * int u / |x|^{1+2s}
        const double limit = normalization_constant(1, FracOrder(0.5)) * std::sqrt(pi);
        for (const auto& p : prof) {
            CHECK(p.product == Approx(limit).epsilon(0.1));
        }
        CHECK(std::abs(prof[2].product - limit) < std::abs(prof[0].product - limit));

        for (double s : {0.5, 0.75}) {
            std::vector<double> r{8.0, 11.313708498984761, 16.0, 22.627416997969522, 32.0};
            auto pr = decay_profile(g, FracOrder(s), r);
            std::vector<double> v;
            for (const auto& p : pr) {
                v.push_back(std::abs(p.value));
            }
            CHECK(fit_power_law(r, v).exponent == Approx(-(1.0 + 2.0 * s)).epsilon(0.05 / (1.0 + 2.0 * s)));
        }

        FunctionHandle odd{[](double x) { return x * std::exp(-x * x); }, Smoothness::schwartz};
        odd.support = Interval{-9.0, 9.0};
        auto po = decay_profile(odd, FracOrder(0.5), radii);
        CHECK(po[2].product < 0.1 * limit);
    }

    TEST_CASE("classical limit coefficients")
    {
        auto id = MasterKernel::constant(Mat2{{{1.0, 0.0}, {0.0, 1.0}}});
        auto ci = classical_limit_coefficients(id, {0.0, 0.0});
        CHECK(std::abs(ci.a[0][1]) < 1e-15);
        CHECK(ci.a[0][0] == Approx(ci.a[1][1]));

        auto k = MasterKernel::constant(Mat2{{{1.0, 0.0}, {0.0, 2.0}}});
        auto c = classical_limit_coefficients(k, {0.0, 0.0});
        const double a11 = 0.25 * oracle_math::circle_trapezoid(
                                      [](double c1, double c2) { return c1 * c1 / std::pow(c1 * c1 + 4 * c2 * c2, 2); }, 4096);
        const double a22 = 0.25 * oracle_math::circle_trapezoid(
                                      [](double c1, double c2) { return c2 * c2 / std::pow(c1 * c1 + 4 * c2 * c2, 2); }, 4096);
        CHECK(c.a[0][0] == Approx(a11).epsilon(1e-12));
        CHECK(c.a[1][1] == Approx(a22).epsilon(1e-12));
        CHECK(std::abs(c.a[0][1]) < 1e-15);
        CHECK(c.a[0][0] > c.a[1][1]);

        auto k3 = MasterKernel::constant(Mat2{{{3.0, 0.0}, {0.0, 6.0}}});
        auto c3 = classical_limit_coefficients(k3, {0.0, 0.0});
        CHECK(c3.a[0][0] == Approx(c.a[0][0] / 81.0).epsilon(1e-12));
    }

    TEST_CASE("master operator with identity matrix reduces to the fractional Laplacian")
    {
        const double s = 0.5;
        FunctionHandle2 u2{[](Point2 p) { return std::exp(-(p[0] * p[0] + p[1] * p[1])); }};
        u2.support_radius = 9.0;
        auto id = MasterKernel::constant(Mat2{{{1.0, 0.0}, {0.0, 1.0}}});
        const double v = master_operator(u2, {0.3, 0.0}, FracOrder(s), id).value;

        // 2D Gaussian multiplier in polar form: (1/(4 pi^2)) int rho^{2s} pi e^{-rho^2/4} rho int cos(r rho cos th)
        const double r = 0.3;
        auto radial = [&](double rho) {
            auto ang = [&](double c1, double) { return std::cos(r * rho * c1); };
            return std::pow(rho, 2.0 * s) * std::exp(-0.25 * rho * rho) * rho * oracle_math::circle_trapezoid(ang, 64);
        };
        const double image = oracle_math::simpson(radial, 0.0, 14.0, 1e-12) / (4.0 * pi * pi) * pi;
        CHECK(v == Approx((1.0 - s) / normalization_constant(2, FracOrder(s)) * image).epsilon(1e-5));
    }

    TEST_CASE("master kernel symmetry contract")
    {
        MasterKernel k;
        k.form = MasterKernel::Form::nondivergence;
        k.matrix = [](Point2, Point2 y) { return Mat2{{{1.0 + 0.5 * y[0], 0.0}, {0.0, 1.0}}}; };
        k.min_eig = 0.5;
        k.max_eig = 2.0;
        CHECK_THROWS_AS(k.validate(), ValidationError);
    }
}
