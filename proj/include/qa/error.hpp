#pragma once

#include <stdexcept>
#include <string>

namespace qa {

/// Bad arguments, malformed input files, violated preconditions.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Integration failures: norm drift, step-size underflow, step budget exhausted.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qa
