#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finord {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed formula or serialization text. `offset` is a byte offset into the input.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t offset)
        : Error("syntax error at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A variable of one sort used where the other sort is required.
class SortError : public Error {
public:
    using Error::Error;
};

/// A configured resource bound (state cap, enumeration bound, game budget) was exceeded.
class ResourceError : public Error {
public:
    ResourceError(const std::string& stage, const std::string& message)
        : Error(stage + ": " + message), stage_(stage) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Arguments outside an operation's domain (unbound variables, bad moduli, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

} // namespace finord
