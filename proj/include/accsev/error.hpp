#pragma once

#include <stdexcept>
#include <string>

namespace accsev {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: unknown column, malformed CSV, unreadable file.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

// Violated statistical precondition (empty sample, zero marginal, ...).
class StatError : public Error {
public:
    explicit StatError(const std::string& what) : Error(what) {}
};

// Model file problems: unknown version tag or truncated/garbled content.
class ModelFormatError : public Error {
public:
    explicit ModelFormatError(const std::string& what) : Error(what) {}
};

}  // namespace accsev
