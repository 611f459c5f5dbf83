#pragma once

#include <stdexcept>
#include <string>

namespace hemon {

// Bad inputs: malformed files, contract violations, invalid ids.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown: non-finite losses, divergent training.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hemon
