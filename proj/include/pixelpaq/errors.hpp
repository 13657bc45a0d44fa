#pragma once

#include <stdexcept>
#include <string>

namespace pixelpaq {

// Error taxonomy maps onto the CLI exit-status contract:
// ConfigError -> 2, IoError -> 3, DataError -> 4.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments, unsupported parameter values, usage mistakes.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Missing files, failed reads/writes.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Inputs that parse but violate an invariant (wrong size, sample out of range).
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

inline int exit_code(const Error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const IoError*>(&e)) return 3;
    return 4;
}

} // namespace pixelpaq
