#pragma once

#include <stdexcept>
#include <string>

namespace dualzf {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Measure-zero channel realizations (zero rows, vanishing equivalent channels).
// The Monte Carlo harness resamples when it sees one.
class DegenerateChannel : public Error {
public:
    using Error::Error;
};

class UnsupportedConstellation : public Error {
public:
    using Error::Error;
};

class NotZFSystem : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

}  // namespace dualzf
