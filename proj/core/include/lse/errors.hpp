#pragma once

#include <stdexcept>
#include <string>

namespace lse {

/// Cholesky factorization failed even after jitter escalation.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the domain a function is defined on.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested value cannot be produced in finite arithmetic.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// No eligible candidate remains for selection.
class ExhaustionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration value; `key()` names the offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace lse
