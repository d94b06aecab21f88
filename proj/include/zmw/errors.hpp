#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zmw
{
// Soft diagnostics (validity-regime notes, clamping). Functions that may warn
// take an optional sink; passing nullptr discards the messages.
using Warnings = std::vector<std::string>;

inline void warn(Warnings *sink, std::string message)
{
    if (sink)
        sink->push_back(std::move(message));
}

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Lookup outside a tabulated interval.
class RangeError : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

// Physical regime precondition violated (e.g. propagating waveguide where an
// evanescent one is required).
class RegimeError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace zmw
