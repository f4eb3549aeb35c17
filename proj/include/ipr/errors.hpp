#pragma once

#include <stdexcept>

namespace ipr {

// Bad or inconsistent run/model configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical guarantee failed (dominance, pivot, residual); the message
// names the module and the offending location.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ipr
