#include "fraclab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "fraclab/parallel.hpp"
#include "fraclab/pointops.hpp"

namespace fraclab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double require_half(std::optional<FracOrder> s, std::string_view name)
{
    if (s && s->value() != 0.5) {
        throw ValidationError(std::string(name) + " is an s = 1/2 oracle");
    }
    return 0.5;
}

FunctionHandle compact(std::function<double(double)> f, Smoothness kind, Interval support)
{
    FunctionHandle h;
    h.eval = std::move(f);
    h.smoothness = kind;
    h.support = support;
    h.singular_points = {support.lo, support.hi};
    return h;
}

} // namespace

std::vector<std::string> oracle_names()
{
    return {"u_s", "u_half", "u_minus_half", "halfspace_power", "arctan_layer", "kelvin_w", "kelvin_wstar", "U_s",
            "gaussian", "const"};
}

OracleEntry oracle(std::string_view name, std::optional<FracOrder> order)
{
    OracleEntry e;
    e.name = std::string(name);
    const double s = order ? order->value() : 0.5;
    e.s = s;
    e.parametric = true;

    if (name == "u_s") {
        e.function = compact([s](double x) { return std::abs(x) < 1.0 ? std::pow(1.0 - x * x, s) : 0.0; },
                             Smoothness::bounded, {-1.0, 1.0});
        e.function.sup_bound = 1.0;
        e.claim = {OracleClaim::Kind::constant_image_on, {-1.0, 1.0}, {}, std::tgamma(1.0 + 2.0 * s)};
        e.description = "(1 - x^2)_+^s has constant image Gamma(1 + 2s) on (-1, 1)";
    } else if (name == "u_half") {
        e.s = require_half(order, name);
        e.parametric = false;
        e.function = compact([](double x) { return std::abs(x) < 1.0 ? std::sqrt(1.0 - x * x) : 0.0; },
                             Smoothness::bounded, {-1.0, 1.0});
        e.function.sup_bound = 1.0;
        e.claim = {OracleClaim::Kind::constant_image_on, {-1.0, 1.0}, {}, 1.0};
        e.description = "(1 - x^2)_+^{1/2} has constant half-Laplacian 1 on (-1, 1)";
    } else if (name == "u_minus_half") {
        e.s = require_half(order, name);
        e.parametric = false;
        e.function = compact([](double x) { return std::abs(x) < 1.0 ? 1.0 / std::sqrt(1.0 - x * x) : 0.0; },
                             Smoothness::singular_integrable, {-1.0, 1.0});
        e.claim = {OracleClaim::Kind::sharmonic_on, {-1.0, 1.0}, {}, {}};
        e.description = "(1 - x^2)_+^{-1/2} is 1/2-harmonic in (-1, 1) and blows up at the boundary";
    } else if (name == "halfspace_power") {
        e.function.eval = [s](double x) { return x > 0.0 ? std::pow(x, s) : 0.0; };
        e.function.smoothness = Smoothness::c2_local;
        e.function.singular_points = {0.0};
        e.function.growth = PowerGrowth{s, 1.0, 0.0};
        e.claim = {OracleClaim::Kind::sharmonic_on, {0.0, inf}, {}, {}};
        e.description = "x_+^s is s-harmonic on the half-line";
    } else if (name == "arctan_layer") {
        e.s = require_half(order, name);
        e.parametric = false;
        e.function.eval = [](double x) { return 2.0 / std::numbers::pi * std::atan(x); };
        e.function.smoothness = Smoothness::bounded;
        e.function.sup_bound = 1.0;
        e.claim = {OracleClaim::Kind::explicit_image,
                   {-inf, inf},
                   [](double x) { return std::sin(2.0 * std::atan(x)) / std::numbers::pi; },
                   {}};
        e.description = "u = 2/pi arctan solves (-Delta)^{1/2} u = sin(pi u) / pi";
    } else if (name == "kelvin_w") {
        e.function = compact(
            [s](double x) { return x > 0.0 && x < 1.0 ? std::pow(x, s - 1.0) * std::pow(1.0 - x, s) : 0.0; },
            Smoothness::singular_integrable, {0.0, 1.0});
        e.claim = {OracleClaim::Kind::sharmonic_on, {0.0, 1.0}, {}, {}};
        e.description = "w_s = x^{s-1} (1 - x)^s on (0, 1), zero elsewhere, is s-harmonic in (0, 1)";
        e.quadrature.abs_tol = s < 0.5 ? 1e-6 : 1e-9;
    } else if (name == "kelvin_wstar") {
        e.function = compact(
            [s](double x) {
                if (!(x > 0.0 && x < 1.0)) {
                    return 0.0;
                }
                return std::pow(x, s - 1.0) * std::pow(1.0 - x, s) - std::pow(x, s) * std::pow(1.0 - x, s - 1.0);
            },
            Smoothness::singular_integrable, {0.0, 1.0});
        e.claim = {OracleClaim::Kind::sharmonic_on, {0.0, 1.0}, {}, {}};
        e.description = "W*_s = w_s(x) - w_s(1 - x) is s-harmonic in (0, 1)";
        e.quadrature.abs_tol = s < 0.5 ? 1e-6 : 1e-9;
    } else if (name == "U_s") {
        e.function = compact(
            [s](double x) { return x > 0.0 && x < 1.0 ? std::pow(x * (1.0 - x), s) : 0.0; }, Smoothness::bounded,
            {0.0, 1.0});
        e.function.sup_bound = std::pow(0.25, s);
        e.claim = {OracleClaim::Kind::constant_image_on, {0.0, 1.0}, {}, std::tgamma(1.0 + 2.0 * s)};
        e.description = "U_s = x_+^s (1 - x)_+^s, the primitive of s W*_s, has constant image on (0, 1)";
    } else if (name == "gaussian") {
        e.function.eval = [](double x) { return std::exp(-x * x); };
        e.function.smoothness = Smoothness::schwartz;
        e.function.support = Interval{-9.0, 9.0};
        e.claim = {OracleClaim::Kind::explicit_image,
                   {-inf, inf},
                   [s](double x) {
                       return std::pow(4.0, s) * std::tgamma(s + 0.5) / std::sqrt(std::numbers::pi) *
                              boost::math::hypergeometric_1F1(s + 0.5, 0.5, -x * x);
                   },
                   {}};
        e.description = "exp(-x^2), with image 4^s Gamma(s + 1/2) / sqrt(pi) 1F1(s + 1/2; 1/2; -x^2)";
    } else if (name == "const") {
        e.function.eval = [](double) { return 1.0; };
        e.function.smoothness = Smoothness::bounded;
        e.function.sup_bound = 1.0;
        e.claim = {OracleClaim::Kind::sharmonic_on, {-inf, inf}, {}, {}};
        e.description = "constants are s-harmonic";
    } else {
        throw ValidationError("unknown oracle: " + std::string(name));
    }
    return e;
}

std::vector<double> default_points(const OracleEntry& e)
{
    if (e.name == "u_half" || e.name == "u_s") {
        std::vector<double> p;
        for (int i = 0; i < 9; ++i) {
            p.push_back(-0.8 + 0.2 * i);
        }
        return p;
    }
    if (e.name == "u_minus_half") {
        return {-0.6, -0.2, 0.2, 0.3, 0.6, 0.7};
    }
    if (e.name == "halfspace_power") {
        return {0.5, 1.0, 2.0};
    }
    if (e.name == "arctan_layer") {
        return {0.0, 0.5, 1.0, 3.0};
    }
    if (e.name == "kelvin_w" || e.name == "kelvin_wstar" || e.name == "U_s") {
        return {0.2, 0.35, 0.5, 0.65, 0.8};
    }
    return {-1.0, 0.0, 0.5, 2.0};
}

OracleReport verify_oracle(const OracleEntry& e, std::span<const double> points,
                           const std::optional<QuadratureSpec>& q, unsigned threads)
{
    if (points.empty()) {
        throw ValidationError("no verification points");
    }
    for (double x : points) {
        if (!(x > e.claim.on.lo && x < e.claim.on.hi)) {
            throw ValidationError("verification point outside the claim interval");
        }
    }
    OracleReport r;
    r.name = e.name;
    r.s = e.s;
    r.points.assign(points.begin(), points.end());
    r.values = fraclap_batch(e.function, points, FracOrder(e.s), q.value_or(e.quadrature), FracLapMethod::second_difference,
                             threads);

    double scale = 0.0;
    switch (e.claim.kind) {
    case OracleClaim::Kind::sharmonic_on:
        for (std::size_t i = 0; i < points.size(); ++i) {
            r.max_abs = std::max(r.max_abs, std::abs(r.values[i].value));
            scale = std::max(scale, std::abs(e.function(points[i])));
        }
        break;
    case OracleClaim::Kind::constant_image_on: {
        double sum = 0.0;
        for (const Estimate& v : r.values) {
            sum += v.value;
        }
        const double m = sum / static_cast<double>(r.values.size());
        r.measured_constant = m;
        for (const Estimate& v : r.values) {
            r.max_abs = std::max(r.max_abs, std::abs(v.value - m));
        }
        scale = std::abs(m);
        break;
    }
    case OracleClaim::Kind::explicit_image:
        if (!e.claim.image) {
            throw ValidationError("explicit-image claim without an image");
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double image = e.claim.image(points[i]);
            r.max_abs = std::max(r.max_abs, std::abs(r.values[i].value - image));
            scale = std::max(scale, std::abs(image));
        }
        break;
    }
    r.residual = scale > 0.0 ? r.max_abs / scale : r.max_abs;
    return r;
}

LayerDecayReport layer_decay_check()
{
    LayerDecayReport r;
    r.limit = 2.0 / std::numbers::pi;
    // 1 - 2/pi arctan t = 2/pi arctan(1/t), exact without cancellation.
    auto gap = [](double t) { return 2.0 / std::numbers::pi * std::atan(1.0 / t); };
    for (double t : {1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0}) {
        r.t.push_back(t);
        r.products.push_back(t * gap(t));
    }
    r.relative_gap_at_100 = std::abs(100.0 * gap(100.0) - r.limit) / r.limit;
    const double series = r.limit * (1.0 - 1.0 / 300.0);
    r.correction_gap_at_10 = std::abs(10.0 * gap(10.0) - series) / series;

    r.min_log_curvature = inf;
    const double dt = 0.5;
    for (double t = 1.0; t + 2.0 * dt <= 50.0; t += dt) {
        const double d2 = std::log(gap(t + 2.0 * dt)) - 2.0 * std::log(gap(t + dt)) + std::log(gap(t));
        r.min_log_curvature = std::min(r.min_log_curvature, d2);
    }
    return r;
}

double primitive_identity_check(FracOrder order)
{
    const double s = order.value();
    double worst = 0.0;
    for (int i = 0; i <= 900; ++i) {
        const double x = 0.05 + 0.001 * i;
        const double derivative = s * std::pow(x * (1.0 - x), s - 1.0) * (1.0 - 2.0 * x);
        const double w = std::pow(x, s - 1.0) * std::pow(1.0 - x, s);
        const double wstar = std::pow(x, s) * std::pow(1.0 - x, s - 1.0);
        worst = std::max(worst, std::abs(derivative - s * (w - wstar)));
    }
    return worst;
}

} // namespace fraclab
