#pragma once

#include <stdexcept>
#include <string>

namespace fidsim {

// Error taxonomy maps onto process exit codes: config/input/capability
// problems exit 2, numerical failures exit 3.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CapabilityError : std::runtime_error {
    explicit CapabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fidsim
