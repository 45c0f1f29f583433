#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Result of a numerical evaluation together with an estimate of its absolute error.
struct Estimate
{
    double value = 0.0;
    double error = 0.0;
};

/// A precondition of an operation was violated (bad order, domain, grid, class...).
class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not reach the requested tolerance within its budget.
/// The best estimate obtained is carried along so callers can report it.
class ToleranceError : public std::runtime_error
{
public:
    ToleranceError(const std::string& what, Estimate achieved, double requested)
        : std::runtime_error(what), achieved_(achieved), requested_(requested)
    {
    }

    Estimate achieved() const noexcept { return achieved_; }
    double requested() const noexcept { return requested_; }

private:
    Estimate achieved_;
    double requested_;
};

} // namespace fraclab
