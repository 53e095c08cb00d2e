#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmdrec {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes, dimensions or option values that cannot work together.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or a violated numerical guarantee.
class NumericError : public Error {
public:
    using Error::Error;
};

/// An operation called out of order (e.g. backward without a forward cache).
class StateError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed text input; carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what), line_(0) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Base for weight-file load failures.
class LoadError : public Error {
public:
    using Error::Error;
};

class MagicMismatchError : public LoadError {
public:
    using LoadError::LoadError;
};

class VersionMismatchError : public LoadError {
public:
    using LoadError::LoadError;
};

class TruncatedFileError : public LoadError {
public:
    using LoadError::LoadError;
};

class TopologyMismatchError : public LoadError {
public:
    using LoadError::LoadError;
};

}  // namespace hmdrec
