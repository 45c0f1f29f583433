#include "output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <iostream>

#include "fraclab/errors.hpp"
#include "fraclab/version.hpp"

namespace cli {

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), end);
}

void CsvWriter::header(const std::vector<std::string>& names)
{
    row(names);
}

void CsvWriter::row(const std::vector<double>& values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) {
        cells.push_back(format_number(v));
    }
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            os_ << ',';
        }
        os_ << cells[i];
    }
    os_ << '\n';
}

bool SuiteReport::passed() const
{
    for (const auto& c : checks) {
        if (!c.pass) {
            return false;
        }
    }
    return true;
}

nlohmann::ordered_json to_json(const SuiteReport& r)
{
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"paper_ref", c.paper_ref},
                          {"residual", std::isfinite(c.residual) ? nlohmann::ordered_json(c.residual) : nullptr},
                          {"threshold", c.threshold},
                          {"pass", c.pass}});
    }
    j["checks"] = checks;
    j["seed"] = r.seed;
    auto versions = nlohmann::ordered_json::object();
    for (const auto& [k, v] : fraclab::component_versions()) {
        versions[k] = v;
    }
    j["versions"] = versions;
    j["config"] = r.config;
    return j;
}

void write_checks_csv(std::ostream& os, const SuiteReport& r)
{
    CsvWriter w(os);
    w.header({"suite", "name", "paper_ref", "residual", "threshold", "pass"});
    for (const auto& c : r.checks) {
        w.row(std::vector<std::string>{r.suite, c.name, '"' + c.paper_ref + '"', format_number(c.residual),
                                       format_number(c.threshold), c.pass ? "true" : "false"});
    }
}

OutputTarget::OutputTarget(const std::string& path)
{
    if (!path.empty() && path != "-") {
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) {
            throw fraclab::ValidationError("cannot open output file " + path);
        }
    }
}

std::ostream& OutputTarget::stream()
{
    return file_ ? *file_ : std::cout;
}

} // namespace cli
