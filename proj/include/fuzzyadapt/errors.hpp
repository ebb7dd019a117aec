#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyadapt {

/// Invalid user input: bad files, unparseable cells, out-of-range parameters.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown: failed factorizations, degenerate systems.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fuzzyadapt
