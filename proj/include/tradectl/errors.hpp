#pragma once

#include <stdexcept>
#include <string>

namespace tradectl {

// Input that could not be parsed at all (malformed CSV, bad JSON, ...).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Input that parsed but violates a documented constraint (negative price,
// duplicate dates, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A window/operation asked for more history than the series provides.
class InsufficientDataError : public std::runtime_error {
public:
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

// Arguments outside an operation's domain (split date out of range,
// brute-force horizon too long, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A run/experiment configuration that cannot be executed as given.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Programming error: a caller broke an API contract (e.g. a controller
// peeked past the current day). Derived from logic_error on purpose —
// these should never be caught and recovered in normal operation.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace tradectl
