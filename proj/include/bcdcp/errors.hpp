#pragma once

#include <stdexcept>
#include <string>

namespace bcdcp {

// Config file problems: missing/invalid fields, unknown modes. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical precondition is violated (nonstationary regime, nonexistent
// moment, argument out of range). CLI exit code 3.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to reach its tolerance. Carries the achieved
// error estimate. CLI exit code 4.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double achieved_error)
        : std::runtime_error(what + " (achieved error " + std::to_string(achieved_error) + ")"),
          achieved(achieved_error) {}
    double achieved;
};

}  // namespace bcdcp
