#pragma once

#include <stdexcept>
#include <string>

namespace lvg {

// Bad input data (quotes, curves, config). CLI maps these to exit code 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated internal contract (a monotonicity invariant failed, a bracket
// could not be found where one must exist). CLI maps these to exit code 2.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace lvg
