#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "output.hpp"

namespace cli {

enum ExitCode : int { exit_ok = 0, exit_verification = 1, exit_usage = 2, exit_tolerance = 3 };

/// Effective settings after merging defaults, the config file and flags.
struct RunConfig
{
    std::string command;

    double s = 0.5;
    std::optional<double> s_flag;

    // eval
    std::string op = "fraclap";
    std::string oracle;
    std::string fn;
    std::string grid_file;
    std::vector<double> points;
    std::vector<double> domain;
    std::string method = "second_difference";

    // quadrature overrides
    double abs_tol = 0.0;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    int panels_per_decade = 0;

    // time
    double t = 1.0;
    /// 0 picks the command default (512 for caputo, 10000 for comb walks).
    std::size_t steps = 0;
    std::string scheme = "l1";

    // walkers
    std::string kind = "classical";
    double h = 0.0;
    /// 0 picks a default per walk kind.
    std::size_t ensemble = 0;
    std::uint64_t seed = 1;
    std::size_t bins = 0;

    // heat
    std::string mode = "kernel";
    double xmax = 20.0;
    std::size_t nodes = 0;
    double sigma = 0.05;

    // verify
    std::string suite = "all";
    bool quick = false;

    unsigned threads = 1;
    std::string out;
    std::string format;

    nlohmann::ordered_json echo() const;
};

int cmd_eval(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_walk(const RunConfig& cfg);
int cmd_heat(const RunConfig& cfg);
int cmd_caputo(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);

/// Suite runners behind verify and report.
SuiteReport run_suite(const std::string& name, const RunConfig& cfg);
std::vector<std::string> suite_names();

} // namespace cli
