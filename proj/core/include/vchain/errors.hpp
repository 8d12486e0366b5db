#pragma once

#include <stdexcept>
#include <string>

namespace vchain {

// Invalid or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during integration or quadrature (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vchain
