#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fraclab/core.hpp"
#include "fraclab/fitting.hpp"
#include "fraclab/quadrature.hpp"
#include "support/oracle_math.hpp"

using namespace fraclab;
using doctest::Approx;

TEST_SUITE("core")
{
    TEST_CASE("fractional order rejects the closed ends")
    {
        CHECK_THROWS_AS(FracOrder(0.0), ValidationError);
        CHECK_THROWS_AS(FracOrder(1.0), ValidationError);
        CHECK_THROWS_AS(FracOrder(std::nan("")), ValidationError);
        CHECK(FracOrder(0.3).value() == 0.3);
    }

    TEST_CASE("normalization constant in one dimension")
    {
        // C(1, 1/2) = 1/pi
        CHECK(normalization_constant(1, FracOrder(0.5)) == Approx(1.0 / std::numbers::pi).epsilon(1e-14));
        CHECK_THROWS_AS(normalization_constant(3, FracOrder(0.5)), ValidationError);
    }

    TEST_CASE("two-dimensional constant is consistent with the line constant")
    {
        // Integrating |y|^{-2-2s} over y2 gives |y1|^{-1-2s} sqrt(pi) Gamma(s + 1/2) / Gamma(1 + s);
        // a function of y1 alone must have the same fractional Laplacian in both dimensions.
        for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            auto inner = [s](double t) { return 1.0 / std::pow(1.0 + t * t, 1.0 + s); };
            const double line_factor = 2.0 * oracle_math::simpson(
                                                 [&](double w) {
                                                     // t = w / (1 - w) maps (0, 1) onto (0, inf)
                                                     if (w >= 1.0) {
                                                         return 0.0;
                                                     }
                                                     const double t = w / (1.0 - w);
                                                     return inner(t) / ((1.0 - w) * (1.0 - w));
                                                 },
                                                 0.0, 1.0, 1e-13);
            const double lhs = normalization_constant(2, FracOrder(s)) * line_factor;
            CHECK(lhs == Approx(normalization_constant(1, FracOrder(s))).epsilon(1e-8));
        }
    }

    TEST_CASE("domains and grids")
    {
        auto d = Domain::interval(-1.0, 1.0);
        CHECK(d.contains(0.0));
        CHECK_FALSE(d.contains(1.0));
        CHECK_THROWS_AS(Domain::interval(1.0, 1.0), ValidationError);

        auto g = GridFunction::sample(d, 201, [](double x) { return x * x; });
        CHECK(g.spacing() == Approx(0.01));
        CHECK(g.integral() == Approx(2.0 / 3.0).epsilon(1e-4));
        CHECK(g.interpolate(0.005) == Approx(0.5 * (0.0 + 1e-4)));
        CHECK_THROWS_AS(g.interpolate(1.5), ValidationError);

        auto t = GridFunction::sample(Domain::torus(1.0), 64, [](double x) { return std::cos(2 * std::numbers::pi * x); });
        CHECK(t.spacing() == Approx(1.0 / 64));
        CHECK(std::abs(t.integral()) < 1e-15);
        CHECK(t.interpolate(1.0) == Approx(t[0]));
    }

    TEST_CASE("function handle validation")
    {
        FunctionHandle g{[](double x) { return std::exp(-x * x); }, Smoothness::schwartz};
        CHECK_THROWS_AS(g.validate(), ValidationError);
        g.support = Interval{-9.0, 9.0};
        CHECK_NOTHROW(g.validate());

        QuadratureSpec q;
        q.abs_tol = -1.0;
        CHECK_THROWS_AS(q.validate(), ValidationError);
    }

    TEST_CASE("mean value deficit of a parabola")
    {
        // u - avg over (x - r, x + r) = -r^2 / 3 for u = x^2
        FunctionHandle u{[](double x) { return x * x; }};
        CHECK(mean_value_deficit(u, 0.3, 0.2) == Approx(-0.04 / 3.0).epsilon(1e-10));

        // disc average of |x|^2 over B_r(0) is r^2 / 2
        FunctionHandle2 v{[](Point2 p) { return p[0] * p[0] + p[1] * p[1]; }};
        CHECK(mean_value_deficit(v, Point2{0.0, 0.0}, 0.5) == Approx(-0.125).epsilon(1e-8));
    }
}

TEST_SUITE("quadrature")
{
    TEST_CASE("Gauss-Kronrod on smooth and endpoint-singular integrands")
    {
        auto e = quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
        CHECK(e.value == Approx(std::exp(1.0) - 1.0).epsilon(1e-14));

        std::vector<double> bp{0.0};
        quad::add_graded_points(bp, 0.0, 1.0, 0.0, 1.0);
        bp.push_back(1.0);
        bp = quad::normalize_breakpoints(bp, 0.0, 1.0);
        auto s = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, bp, 1e-10);
        CHECK(s.value == Approx(2.0).epsilon(1e-9));
    }

    TEST_CASE("tolerance failure carries the estimate")
    {
        try {
            quad::integrate([](double x) { return std::sin(1.0 / (x + 1e-9)); }, 0.0, 1.0, 1e-15, 8);
            FAIL("expected ToleranceError");
        } catch (const ToleranceError& err) {
            CHECK(err.requested() == 1e-15);
            CHECK(std::isfinite(err.achieved().value));
        }
    }

    TEST_CASE("geometric points and Richardson")
    {
        auto g = quad::geometric_points(1e-3, 1.0, 4);
        CHECK(g.size() == 13);
        CHECK(g.front() == Approx(1e-3));
        CHECK(g.back() == Approx(1.0));

        // forward differences of exp at 0 with h, h/2, h/4, h/8
        std::vector<double> v;
        for (double h : {0.1, 0.05, 0.025, 0.0125}) {
            v.push_back((std::exp(h) - 1.0) / h);
        }
        CHECK(quad::richardson(v).value == Approx(1.0).epsilon(1e-7));
    }
}

TEST_SUITE("fitting")
{
    TEST_CASE("power law and line fits")
    {
        std::vector<double> x{1, 2, 4, 8, 16};
        std::vector<double> y;
        for (double v : x) {
            y.push_back(3.0 * std::pow(v, -1.5));
        }
        auto p = fit_power_law(x, y);
        CHECK(p.exponent == Approx(-1.5).epsilon(1e-12));
        CHECK(p.constant == Approx(3.0).epsilon(1e-12));
        CHECK(p.half_width < 1e-10);

        auto l = fit_line(x, x);
        CHECK(l.slope == Approx(1.0));
        CHECK(std::abs(l.intercept) < 1e-12);

        std::vector<double> c{1.0, 1.0, 1.0};
        CHECK(coefficient_of_variation(c) == 0.0);
        CHECK(mean(x) == Approx(6.2));
        std::vector<double> bad{1.0, -1.0};
        CHECK_THROWS_AS(fit_power_law(bad, bad), ValidationError);
    }
}
