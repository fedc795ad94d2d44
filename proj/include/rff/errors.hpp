#pragma once

#include <stdexcept>
#include <string>

namespace rff {

// Bad data passed to an operation (shape mismatch, non-finite values, ...).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error("input error: " + msg) {}
};

// Invalid configuration (hyperparameters, unsupported family/sampler combos, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error("config error: " + msg) {}
};

// A linear system that should have been solvable is singular or too ill-conditioned.
class SingularError : public std::runtime_error {
public:
    explicit SingularError(const std::string& msg) : std::runtime_error("singular system: " + msg) {}
};

// Malformed external file (CSV cell, model file, ...).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error("format error: " + msg) {}
};

} // namespace rff
