#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/version.hpp"

int main(int argc, char** argv)
{
    using namespace cli;
    RunConfig cfg;
    CLI::App app{"fraclab: fractional Laplacians, Caputo derivatives, heat flows and random walks"};
    app.set_help_flag("--help", "print this help and exit");
    app.set_version_flag("--version", fraclab::version());
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.require_subcommand(1);

    app.add_option("--s", cfg.s, "fractional order in (0, 1)");
    app.add_option("--op", cfg.op, "eval operator: fraclap, regional, spectral, caputo");
    app.add_option("--oracle", cfg.oracle, "catalog function to evaluate (eval)");
    app.add_option("--fn", cfg.fn, "time function for caputo: const, t, t^2, exp(-t), sin(t)");
    app.add_option("--grid", cfg.grid_file, "CSV file with x,value rows (eval)");
    app.add_option("--points", cfg.points, "evaluation points, comma separated")->delimiter(',');
    app.add_option("--domain", cfg.domain, "interval a,b")->delimiter(',')->expected(2);
    app.add_option("--method", cfg.method, "fraclap method: second_difference, pv_split");
    app.add_option("--abs-tol", cfg.abs_tol, "quadrature absolute tolerance");
    app.add_option("--inner-radius", cfg.inner_radius, "inner radius of the singular integral");
    app.add_option("--outer-radius", cfg.outer_radius, "outer radius of the singular integral");
    app.add_option("--panels-per-decade", cfg.panels_per_decade, "geometric panels per decade");
    app.add_option("--t", cfg.t, "time or horizon");
    app.add_option("--steps", cfg.steps, "time steps (caputo) or walk steps (comb)");
    app.add_option("--scheme", cfg.scheme, "caputo scheme: l1, direct");
    app.add_option("--kind", cfg.kind, "walk kind: classical, censored, free, comb");
    app.add_option("--h", cfg.h, "lattice spacing (0 picks a default per kind)");
    app.add_option("--N", cfg.ensemble, "ensemble size");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--bins", cfg.bins, "histogram bins (0 picks a default)");
    app.add_option("--mode", cfg.mode, "heat mode: kernel, regional");
    app.add_option("--xmax", cfg.xmax, "kernel table half-width");
    app.add_option("--nodes", cfg.nodes, "grid nodes (0 picks a default)");
    app.add_option("--sigma", cfg.sigma, "width of the initial bump (heat regional)");
    app.add_option("--suite", cfg.suite, "verify suite: all, oracles, spectral, caputo, kernels, master");
    app.add_flag("--quick", cfg.quick, "skip the slowest checks");
    app.add_option("--threads", cfg.threads, "worker threads");
    app.add_option("--out", cfg.out, "output file (stdout when omitted); file prefix for walk");
    app.add_option("--format", cfg.format, "json or csv (verify, report)");

    struct Sub
    {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&);
    };
    const Sub subs[] = {
        {"eval", "evaluate an operator at points (CSV x,value,est_error)", cmd_eval},
        {"verify", "run a verification suite (JSON or CSV)", cmd_verify},
        {"walk", "simulate a random-walk ensemble", cmd_walk},
        {"heat", "heat kernel table or regional heat solve", cmd_heat},
        {"caputo", "Caputo derivative series (CSV t,u,l1,direct)", cmd_caputo},
        {"report", "run every suite and summarize", cmd_report},
    };
    for (const auto& sub : subs) {
        app.add_subcommand(sub.name, sub.help)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        for (const auto& sub : subs) {
            if (app.got_subcommand(sub.name)) {
                cfg.command = sub.name;
                return sub.run(cfg);
            }
        }
    } catch (const fraclab::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const fraclab::ToleranceError& e) {
        std::cerr << "tolerance not reached: " << e.what() << " (achieved error " << e.achieved().error
                  << ", requested " << e.requested() << ")\n";
        return exit_tolerance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_verification;
    }
    return exit_usage;
}
