#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <locale>
#include <memory>
#include <numbers>
#include <sstream>

#include "fraclab/caputo.hpp"
#include "fraclab/fitting.hpp"
#include "fraclab/heatflow.hpp"
#include "fraclab/oracles.hpp"
#include "fraclab/pointops.hpp"
#include "fraclab/spectral.hpp"
#include "fraclab/walkers.hpp"

using namespace fraclab;

namespace cli {
namespace {

std::string canonical_oracle(const std::string& name)
{
    if (name == "arctan") {
        return "arctan_layer";
    }
    return name;
}

QuadratureSpec apply_overrides(QuadratureSpec q, const RunConfig& cfg)
{
    if (cfg.abs_tol > 0.0) {
        q.abs_tol = cfg.abs_tol;
    }
    if (cfg.inner_radius > 0.0) {
        q.inner_radius = cfg.inner_radius;
    }
    if (cfg.outer_radius > 0.0) {
        q.outer_radius = cfg.outer_radius;
    }
    if (cfg.panels_per_decade > 0) {
        q.panels_per_decade = cfg.panels_per_decade;
    }
    q.validate();
    return q;
}

struct GridData
{
    std::vector<double> x;
    std::vector<double> v;
};

// Two numeric columns (x, value); a header line and blank lines are skipped.
GridData read_grid(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open grid file " + path);
    }
    GridData g;
    std::string line;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        ls.imbue(std::locale::classic());
        double a = 0.0, b = 0.0;
        if (ls >> a >> b) {
            g.x.push_back(a);
            g.v.push_back(b);
        }
    }
    if (g.x.size() < 4) {
        throw ValidationError("grid file " + path + " needs at least four (x, value) rows");
    }
    for (std::size_t i = 1; i < g.x.size(); ++i) {
        if (!(g.x[i] > g.x[i - 1])) {
            throw ValidationError("grid file abscissae must increase");
        }
    }
    return g;
}

// Piecewise-linear handle that vanishes outside the tabulated range.
FunctionHandle handle_from_grid(const GridData& g)
{
    auto data = std::make_shared<GridData>(g);
    FunctionHandle h{[data](double x) {
                         const auto& xs = data->x;
                         if (x < xs.front() || x > xs.back()) {
                             return 0.0;
                         }
                         auto it = std::upper_bound(xs.begin(), xs.end(), x);
                         if (it == xs.end()) {
                             return data->v.back();
                         }
                         const auto j = static_cast<std::size_t>(it - xs.begin());
                         const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
                         return (1.0 - w) * data->v[j - 1] + w * data->v[j];
                     },
                     Smoothness::bounded};
    h.support = Interval{g.x.front(), g.x.back()};
    double m = 0.0;
    for (double v : g.v) {
        m = std::max(m, std::abs(v));
    }
    h.sup_bound = m;
    return h;
}

struct TimeFunction
{
    std::function<double(double)> f;
    std::function<double(double)> df;
};

TimeFunction time_function(const std::string& name)
{
    if (name == "const" || name == "1") {
        return {[](double) { return 1.0; }, [](double) { return 0.0; }};
    }
    if (name == "t") {
        return {[](double t) { return t; }, [](double) { return 1.0; }};
    }
    if (name == "t^2") {
        return {[](double t) { return t * t; }, [](double t) { return 2.0 * t; }};
    }
    if (name == "exp(-t)") {
        return {[](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); }};
    }
    if (name == "sin(t)") {
        return {[](double t) { return std::sin(t); }, [](double t) { return std::cos(t); }};
    }
    throw ValidationError("unknown time function '" + name + "' (const, t, t^2, exp(-t), sin(t))");
}

std::size_t time_steps(const RunConfig& cfg)
{
    return cfg.steps ? cfg.steps : 512;
}

CaputoScheme parse_scheme(const std::string& s)
{
    if (s == "l1") {
        return CaputoScheme::l1;
    }
    if (s == "direct") {
        return CaputoScheme::direct_quadrature;
    }
    throw ValidationError("unknown scheme '" + s + "' (l1, direct)");
}

Interval domain_of(const RunConfig& cfg, Interval fallback)
{
    if (cfg.domain.empty()) {
        return fallback;
    }
    if (cfg.domain.size() != 2 || !(cfg.domain[1] > cfg.domain[0])) {
        throw ValidationError("--domain expects two increasing numbers a,b");
    }
    return {cfg.domain[0], cfg.domain[1]};
}

int eval_pointwise(const RunConfig& cfg, CsvWriter& w)
{
    FunctionHandle u;
    QuadratureSpec q;
    std::vector<double> points = cfg.points;
    if (!cfg.grid_file.empty()) {
        u = handle_from_grid(read_grid(cfg.grid_file));
    } else if (!cfg.oracle.empty()) {
        const auto entry = oracle(canonical_oracle(cfg.oracle), FracOrder(cfg.s));
        u = entry.function;
        q = entry.quadrature;
        if (points.empty()) {
            points = default_points(entry);
        }
    } else {
        throw ValidationError("eval needs --oracle or --grid");
    }
    if (points.empty()) {
        throw ValidationError("eval needs --points");
    }
    q = apply_overrides(q, cfg);
    const FracOrder s(cfg.s);
    std::vector<Estimate> values;
    if (cfg.op == "fraclap") {
        FracLapMethod m = FracLapMethod::second_difference;
        if (cfg.method == "pv_split") {
            m = FracLapMethod::pv_split;
        } else if (cfg.method != "second_difference") {
            throw ValidationError("unknown method '" + cfg.method + "'");
        }
        values = fraclap_batch(u, points, s, q, m, cfg.threads);
    } else {
        const Interval d = domain_of(cfg, {-1.0, 1.0});
        const auto omega = Domain::interval(d.lo, d.hi);
        for (double x : points) {
            values.push_back(regional_fraclap(u, x, s, omega, q));
        }
    }
    w.header({"x", "value", "est_error"});
    for (std::size_t i = 0; i < points.size(); ++i) {
        w.row({points[i], values[i].value, values[i].error});
    }
    return exit_ok;
}

int eval_spectral(const RunConfig& cfg, CsvWriter& w)
{
    GridFunction g = [&] {
        if (!cfg.grid_file.empty()) {
            const auto data = read_grid(cfg.grid_file);
            const double dx = data.x[1] - data.x[0];
            return GridFunction(Domain::torus(dx * static_cast<double>(data.x.size()), data.x.front()), data.v);
        }
        if (cfg.oracle.empty()) {
            throw ValidationError("eval --op spectral needs --oracle or --grid");
        }
        const auto entry = oracle(canonical_oracle(cfg.oracle), FracOrder(cfg.s));
        const Interval d = domain_of(cfg, {0.0, 1.0});
        return GridFunction::sample(Domain::torus(d.length(), d.lo), cfg.nodes ? cfg.nodes : 256, entry.function.eval);
    }();
    const auto r = torus_fraclap(g, FracOrder(cfg.s));
    w.header({"x", "value", "est_error"});
    if (cfg.points.empty()) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            w.row({r.node(i), r[i], 0.0});
        }
    } else {
        for (double x : cfg.points) {
            w.row({x, r.interpolate(x), 0.0});
        }
    }
    return exit_ok;
}

int eval_caputo(const RunConfig& cfg, CsvWriter& w)
{
    const auto tf = time_function(cfg.fn.empty() ? "t^2" : cfg.fn);
    std::vector<double> times = cfg.points;
    if (times.empty()) {
        times.push_back(cfg.t);
    }
    const double horizon = *std::max_element(times.begin(), times.end());
    if (!(horizon > 0.0)) {
        throw ValidationError("caputo evaluation times must be positive");
    }
    const auto ts = TimeSeries::analytic(tf.f, tf.df, horizon, time_steps(cfg));
    const FracOrder s(cfg.s);
    const auto scheme = parse_scheme(cfg.scheme);
    w.header({"t", "value", "est_error"});
    for (double t : times) {
        const double direct = caputo_derivative(ts, t, s, CaputoScheme::direct_quadrature);
        if (scheme == CaputoScheme::l1) {
            const double l1 = caputo_derivative(ts, t, s, CaputoScheme::l1);
            w.row({t, l1, std::abs(l1 - direct)});
        } else {
            w.row({t, direct, 0.0});
        }
    }
    return exit_ok;
}

// Power-law exponent over the strictly positive entries; NaN when fewer than two remain.
double positive_fit(const std::vector<double>& t, const std::vector<double>& y)
{
    std::vector<double> tp, yp;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] > 0.0 && y[i] > 0.0) {
            tp.push_back(t[i]);
            yp.push_back(y[i]);
        }
    }
    return tp.size() < 2 ? std::nan("") : fit_power_law(tp, yp).exponent;
}

std::vector<double> geometric_checkpoints(double horizon, int count)
{
    std::vector<double> c;
    for (int i = 0; i < count - 1; ++i) {
        c.push_back(horizon * std::pow(100.0, -1.0 + static_cast<double>(i) / (count - 1)));
    }
    return c;
}

// Bin probabilities for the samples inside [lo, hi); samples outside are counted in the total only.
std::vector<double> bin_masses(const std::vector<double>& samples, const HistogramSpec& spec, std::size_t& inside)
{
    std::vector<double> kept;
    for (double x : samples) {
        if (x >= spec.lo && x < spec.hi) {
            kept.push_back(x);
        }
    }
    inside = kept.size();
    std::vector<double> mass(spec.bins, 0.0);
    if (kept.empty()) {
        return mass;
    }
    const auto d = empirical_density(kept, spec);
    const double width = (spec.hi - spec.lo) / static_cast<double>(spec.bins);
    const double frac = static_cast<double>(kept.size()) / static_cast<double>(samples.size());
    for (std::size_t i = 0; i < spec.bins; ++i) {
        mass[i] = d[i] * width * frac;
    }
    return mass;
}

// Density exponent from the empirical survival function P(|X| > r) ~ r^{-2s} on [r0, r1].
double survival_tail_exponent(std::vector<double> samples, double r0, double r1)
{
    for (auto& v : samples) {
        v = std::abs(v);
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<double> r, p;
    for (int i = 0; i <= 8; ++i) {
        const double rr = r0 * std::pow(r1 / r0, i / 8.0);
        const auto above = samples.end() - std::upper_bound(samples.begin(), samples.end(), rr);
        if (above > 0) {
            r.push_back(rr);
            p.push_back(static_cast<double>(above) / n);
        }
    }
    if (r.size() < 3) {
        return std::nan("");
    }
    return fit_power_law(r, p).exponent - 1.0;
}

void write_walk(const RunConfig& cfg, const std::string& stem, const std::vector<std::string>& density_header,
                const std::vector<std::vector<double>>& density_rows, const std::vector<std::string>& msd_header,
                const std::vector<std::vector<double>>& msd_rows)
{
    {
        OutputTarget t(stem + "_density.csv");
        CsvWriter w(t.stream());
        w.header(density_header);
        for (const auto& r : density_rows) {
            w.row(r);
        }
    }
    {
        OutputTarget t(stem + "_msd.csv");
        CsvWriter w(t.stream());
        w.header(msd_header);
        for (const auto& r : msd_rows) {
            w.row(r);
        }
    }
    std::cout << "wrote " << stem << "_density.csv and " << stem << "_msd.csv (seed " << cfg.seed << ")\n";
}

} // namespace

nlohmann::ordered_json RunConfig::echo() const
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["s"] = s;
    j["op"] = op;
    j["oracle"] = oracle;
    j["fn"] = fn;
    j["grid"] = grid_file;
    j["points"] = points;
    j["domain"] = domain;
    j["method"] = method;
    j["abs_tol"] = abs_tol;
    j["inner_radius"] = inner_radius;
    j["outer_radius"] = outer_radius;
    j["panels_per_decade"] = panels_per_decade;
    j["t"] = t;
    j["steps"] = steps;
    j["scheme"] = scheme;
    j["kind"] = kind;
    j["h"] = h;
    j["N"] = ensemble;
    j["seed"] = seed;
    j["bins"] = bins;
    j["mode"] = mode;
    j["xmax"] = xmax;
    j["nodes"] = nodes;
    j["sigma"] = sigma;
    j["suite"] = suite;
    j["quick"] = quick;
    j["threads"] = threads;
    j["out"] = out;
    j["format"] = format;
    return j;
}

int cmd_eval(const RunConfig& cfg)
{
    OutputTarget target(cfg.out);
    CsvWriter w(target.stream());
    if (cfg.op == "fraclap" || cfg.op == "regional") {
        return eval_pointwise(cfg, w);
    }
    if (cfg.op == "spectral") {
        return eval_spectral(cfg, w);
    }
    if (cfg.op == "caputo") {
        return eval_caputo(cfg, w);
    }
    throw ValidationError("unknown operator '" + cfg.op + "' (fraclap, regional, spectral, caputo)");
}

int cmd_verify(const RunConfig& cfg)
{
    auto rep = run_suite(cfg.suite, cfg);
    rep.config = cfg.echo();
    OutputTarget target(cfg.out);
    if (cfg.format == "csv") {
        write_checks_csv(target.stream(), rep);
    } else {
        target.stream() << to_json(rep).dump(2) << '\n';
    }
    return rep.passed() ? exit_ok : exit_verification;
}

int cmd_report(const RunConfig& cfg)
{
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    bool ok = true;
    std::vector<SuiteReport> reports;
    for (const auto& name : suite_names()) {
        reports.push_back(run_suite(name, cfg));
        ok = ok && reports.back().passed();
    }
    OutputTarget target(cfg.out);
    if (cfg.format == "csv") {
        CsvWriter w(target.stream());
        w.header({"suite", "checks", "failed"});
        for (const auto& r : reports) {
            const auto failed = std::count_if(r.checks.begin(), r.checks.end(), [](const Check& c) { return !c.pass; });
            w.row(std::vector<std::string>{r.suite, std::to_string(r.checks.size()), std::to_string(failed)});
        }
    } else {
        for (auto& r : reports) {
            r.config = cfg.echo();
            all.push_back(to_json(r));
        }
        nlohmann::ordered_json j;
        j["pass"] = ok;
        j["reports"] = all;
        target.stream() << j.dump(2) << '\n';
    }
    return ok ? exit_ok : exit_verification;
}

int cmd_walk(const RunConfig& cfg)
{
    if (cfg.h < 0.0) {
        throw ValidationError("--h must be positive");
    }
    const std::string stem = cfg.out.empty() ? "walk_" + cfg.kind : cfg.out;
    if (cfg.kind == "comb") {
        CombConfig cc;
        cc.steps = cfg.steps ? cfg.steps : 10000;
        cc.ensemble = cfg.ensemble ? cfg.ensemble : 2000;
        cc.seed = cfg.seed;
        cc.threads = cfg.threads;
        for (double t : geometric_checkpoints(static_cast<double>(cc.steps), 10)) {
            const auto k = static_cast<std::size_t>(std::llround(t));
            if (k > 0 && (cc.checkpoints.empty() || k > cc.checkpoints.back()) && k < cc.steps) {
                cc.checkpoints.push_back(k);
            }
        }
        const auto r = run_comb_walk(cc);
        const auto mx = r.msd_x();
        const auto my = r.msd_y();
        const auto bf = backbone_fraction(r);
        const double ex = positive_fit(r.times, mx);
        const double ey = positive_fit(r.times, my);
        std::vector<std::vector<double>> msd_rows;
        for (std::size_t k = 0; k < r.times.size(); ++k) {
            msd_rows.push_back({r.times[k], mx[k], my[k], bf[k], ex, ey});
        }
        const double half = std::max(4.0, 6.0 * std::sqrt(mx.back()));
        const HistogramSpec spec{-std::ceil(half) - 0.5, std::ceil(half) + 0.5,
                                 static_cast<std::size_t>(2 * std::ceil(half) + 1)};
        std::size_t inside = 0;
        const auto mass = bin_masses(r.final_positions(), spec, inside);
        std::vector<std::vector<double>> dens;
        for (std::size_t i = 0; i < spec.bins; ++i) {
            dens.push_back({spec.lo + 0.5 + static_cast<double>(i), mass[i]});
        }
        write_walk(cfg, stem, {"bin_center", "mass"}, dens,
                   {"t", "msd_x", "msd_y", "backbone_fraction", "fit_exponent_x", "fit_exponent_y"}, msd_rows);
        std::cout << "backbone MSD exponent " << format_number(ex) << "\n";
        return exit_ok;
    }

    WalkConfig wc;
    wc.s = cfg.s;
    wc.horizon = cfg.t;
    wc.ensemble = cfg.ensemble ? cfg.ensemble : (cfg.kind == "censored" ? 20000 : 100000);
    wc.seed = cfg.seed;
    wc.threads = cfg.threads;
    wc.checkpoints = geometric_checkpoints(cfg.t, 10);
    EnsembleResult r;
    HistogramSpec spec;
    if (cfg.kind == "classical") {
        wc.kind = WalkKind::classical;
        wc.h = cfg.h > 0.0 ? cfg.h : 0.02;
        // bins of width 4h with edges between sites, so each bin holds both parities equally
        const double w = 4.0 * wc.h;
        const auto half_bins = static_cast<std::size_t>(std::ceil(6.0 * std::sqrt(cfg.t) / w));
        const std::size_t bins = cfg.bins ? cfg.bins : 2 * half_bins;
        spec = {-static_cast<double>(bins / 2) * w - wc.h, static_cast<double>(bins - bins / 2) * w - wc.h, bins};
        r = run_classical_walk(wc);
    } else if (cfg.kind == "censored") {
        wc.kind = WalkKind::long_jump;
        wc.h = cfg.h > 0.0 ? cfg.h : 1.0 / 128;
        const Interval d = domain_of(cfg, {-1.0, 1.0});
        wc.domain = d;
        wc.start = 0.5 * (d.lo + d.hi);
        const auto bins = static_cast<std::size_t>(std::llround(d.length() / wc.h)) + 1;
        spec = {d.lo - 0.5 * wc.h, d.hi + 0.5 * wc.h, cfg.bins ? cfg.bins : bins};
        r = run_censored_walk(wc);
    } else if (cfg.kind == "free") {
        wc.kind = WalkKind::long_jump;
        wc.h = cfg.h > 0.0 ? cfg.h : 1e-3;
        const Interval d = domain_of(cfg, {-20.0, 20.0});
        spec = {d.lo, d.hi, cfg.bins ? cfg.bins : 400};
        r = run_free_longjump_walk(wc);
    } else {
        throw ValidationError("unknown walk kind '" + cfg.kind + "' (classical, censored, free, comb)");
    }

    std::size_t inside = 0;
    const auto mass = bin_masses(r.final_positions(), spec, inside);
    const double width = (spec.hi - spec.lo) / static_cast<double>(spec.bins);
    std::vector<std::vector<double>> dens;
    std::vector<std::string> dens_header{"bin_center", "mass"};
    double tail = std::nan("");
    if (cfg.kind == "free") {
        const double scale = std::pow(cfg.t, 1.0 / (2.0 * cfg.s));
        tail = survival_tail_exponent(r.final_positions(), 5.0 * scale, 50.0 * scale);
        dens_header.push_back("tail_exponent");
    }
    for (std::size_t i = 0; i < spec.bins; ++i) {
        std::vector<double> row{spec.lo + (static_cast<double>(i) + 0.5) * width, mass[i]};
        if (cfg.kind == "free") {
            row.push_back(tail);
        }
        dens.push_back(row);
    }
    const auto msd = r.msd_x();
    const double fit = positive_fit(r.times, msd);
    std::vector<std::vector<double>> msd_rows;
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        msd_rows.push_back({r.times[k], msd[k], fit});
    }
    write_walk(cfg, stem, dens_header, dens, {"t", "msd", "fit_exponent"}, msd_rows);
    if (inside < r.final_positions().size()) {
        std::cout << (r.final_positions().size() - inside) << " walkers fell outside the histogram range\n";
    }
    if (cfg.kind == "free") {
        std::cout << "density tail exponent " << format_number(tail) << "\n";
    }
    return exit_ok;
}

int cmd_heat(const RunConfig& cfg)
{
    OutputTarget target(cfg.out);
    CsvWriter w(target.stream());
    const FracOrder s(cfg.s);
    if (cfg.mode == "kernel") {
        const std::size_t n = cfg.nodes ? cfg.nodes : 801;
        if (n < 3 || !(cfg.xmax > 0.0)) {
            throw ValidationError("heat kernel needs --nodes >= 3 and --xmax > 0");
        }
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = -cfg.xmax + 2.0 * cfg.xmax * static_cast<double>(i) / static_cast<double>(n - 1);
        }
        const auto table = heat_kernel_fourier(s, x, cfg.threads);
        w.header({"x", "value"});
        for (std::size_t i = 0; i < n; ++i) {
            w.row({x[i], table.values[i]});
        }
        std::cerr << "mass " << format_number(table.mass) << "\n";
        return exit_ok;
    }
    if (cfg.mode == "regional") {
        const Interval d = domain_of(cfg, {-1.0, 1.0});
        const std::size_t n = cfg.nodes ? cfg.nodes : 257;
        const double c = 0.5 * (d.lo + d.hi);
        const double sig = cfg.sigma;
        const auto u0 = GridFunction::sample(Domain::interval(d.lo, d.hi), n, [&](double x) {
            return std::exp(-(x - c) * (x - c) / (2.0 * sig * sig)) / (std::sqrt(2.0 * std::numbers::pi) * sig);
        });
        RegionalHeatOptions opt;
        opt.threads = cfg.threads;
        const auto r = regional_heat_solve(u0, s, cfg.t, opt);
        w.header({"x", "u0", "u"});
        for (std::size_t i = 0; i < n; ++i) {
            w.row({u0.node(i), u0[i], r.solution[i]});
        }
        std::cerr << "steps " << r.steps << " dt " << format_number(r.dt) << " mass " << format_number(r.solution.integral())
                  << "\n";
        return exit_ok;
    }
    throw ValidationError("unknown heat mode '" + cfg.mode + "' (kernel, regional)");
}

int cmd_caputo(const RunConfig& cfg)
{
    const auto tf = time_function(cfg.fn.empty() ? "t^2" : cfg.fn);
    const auto ts = TimeSeries::analytic(tf.f, tf.df, cfg.t, time_steps(cfg));
    const FracOrder s(cfg.s);
    const auto l1 = caputo_l1_series(ts, s);
    OutputTarget target(cfg.out);
    CsvWriter w(target.stream());
    w.header({"t", "u", "l1", "direct"});
    for (std::size_t n = 0; n < ts.times.size(); ++n) {
        const double t = ts.times[n];
        w.row({t, ts.values[n], l1[n], caputo_derivative(ts, t, s, CaputoScheme::direct_quadrature)});
    }
    return exit_ok;
}

} // namespace cli
