#pragma once

#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace cli {

/// Shortest round-trip-safe text for v: 17 significant digits, '.' separator, no locale.
std::string format_number(double v);

/// Comma-separated table; every command writes a header row first.
class CsvWriter
{
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    /// Mixed text and numbers (numbers already formatted).
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
};

struct Check
{
    std::string name;
    std::string paper_ref;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct SuiteReport
{
    std::string suite;
    std::vector<Check> checks;
    unsigned long long seed = 0;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();

    bool passed() const;
};

nlohmann::ordered_json to_json(const SuiteReport& r);
void write_checks_csv(std::ostream& os, const SuiteReport& r);

/// Opens path for writing, or returns stdout when path is empty or "-".
class OutputTarget
{
public:
    explicit OutputTarget(const std::string& path);

    std::ostream& stream();

private:
    std::unique_ptr<std::ofstream> file_;
};

} // namespace cli
