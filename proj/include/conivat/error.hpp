#pragma once

#include <stdexcept>
#include <string>

namespace conivat {

// Bad user input: malformed files, out-of-range arguments, dimension
// mismatches. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Failure while computing (non-convergence, non-finite values, I/O).
// The CLI maps this to exit code 1.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace conivat
