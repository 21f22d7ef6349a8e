// errors.hpp - exception types used across the library
//
// The CLI maps these onto process exit codes: usage/config problems -> 1,
// numerical failures -> 2, failed self-checks -> 3.

#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

// Invalid input values, violated preconditions, out-of-domain evaluation.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Bad configuration files, unknown keys, malformed values.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Non-finite state detected during integration; carries the simulation time.
class NumericalBlowup : public std::runtime_error {
public:
    NumericalBlowup(double time, const std::string& what)
        : std::runtime_error(what + " (t = " + std::to_string(time) + " s)"), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

// Reduced-model validity guard violated (loss rate times collective lifetime
// below threshold) without an explicit override.
class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

// SR/SF result pairing mismatch in the metrics stage.
class PairingError : public std::invalid_argument {
public:
    explicit PairingError(const std::string& what) : std::invalid_argument(what) {}
};

// I/O failure, annotated with the offending path.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(what + ": " + path) {}
};

}  // namespace casimir
