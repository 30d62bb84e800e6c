#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cegarnn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent layer sizes, matrix shapes or input lengths.
class ShapeError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string locate(const std::string &file, std::size_t line, const std::string &what)
{
    std::string prefix = file;
    if (line > 0)
        prefix += (file.empty() ? "line " : ":") + std::to_string(line);
    return prefix.empty() ? what : prefix + ": " + what;
}

} // namespace detail

/// Malformed NNet text. Carries the 1-based line number of the offending line
/// and, when read from disk, the file name ("file:line: message").
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string &what, const std::string &file = {})
        : Error(detail::locate(file, line, what))
        , _line(line)
        , _detail(what)
    {
    }

    std::size_t line() const noexcept { return _line; }
    /// The message without its location.
    const std::string &detail() const noexcept { return _detail; }

private:
    std::size_t _line;
    std::string _detail;
};

/// Malformed or unsupported property text.
class PropertyError : public Error {
public:
    PropertyError(std::size_t line, const std::string &what, const std::string &file = {})
        : Error(detail::locate(file, line, what))
        , _line(line)
        , _detail(what)
    {
    }

    /// 0 when the error is not tied to a single line.
    std::size_t line() const noexcept { return _line; }
    const std::string &detail() const noexcept { return _detail; }

private:
    std::size_t _line;
    std::string _detail;
};

class EncodingError : public Error {
public:
    using Error::Error;
};

class InvalidQueryError : public Error {
public:
    using Error::Error;
};

class PartitionError : public Error {
public:
    using Error::Error;
};

class MergeError : public PartitionError {
public:
    using PartitionError::PartitionError;
};

class RefinementError : public PartitionError {
public:
    using PartitionError::PartitionError;
};

/// Violated internal invariant (e.g. unlabeled neuron where a label is required).
class InvariantError : public Error {
public:
    using Error::Error;
};

/// The simplex hit its pivot cap or lost numerical control.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace cegarnn
