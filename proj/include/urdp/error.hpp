#pragma once

#include <stdexcept>
#include <string>

namespace urdp {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument or configuration value.
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& msg) : Error(msg) {}
};

// Bit-string slice outside the available length.
class LengthError : public Error {
public:
    explicit LengthError(const std::string& msg) : Error(msg) {}
};

// Integer value does not fit in the requested width.
class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& msg) : Error(msg) {}
};

// Malformed serialized data. Distinct from a decryption reject.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

} // namespace urdp
