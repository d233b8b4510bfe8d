#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vfpph {

/// Base of every error raised by the library.
///
/// Errors split into input problems (unreadable files, malformed text, bad
/// grids) and domain problems (degenerate geometry, failed searches). The CLI
/// maps the former to exit status 2 and the latter to 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual bool is_input_error() const noexcept { return false; }
};

class InputError : public Error {
public:
    using Error::Error;
    bool is_input_error() const noexcept override { return true; }
};

class IoError : public InputError {
public:
    using InputError::InputError;
};

class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class FormatError : public InputError {
public:
    using InputError::InputError;
};

class GridError : public InputError {
public:
    using InputError::InputError;
};

class SpecMismatch : public InputError {
public:
    using InputError::InputError;
};

class ParamError : public InputError {
public:
    using InputError::InputError;
};

class CenterOnGridPoint : public Error {
public:
    using Error::Error;
};

class DegenerateAngle : public Error {
public:
    using Error::Error;
};

class ScaleError : public Error {
public:
    using Error::Error;
};

class PolygonNotFound : public Error {
public:
    using Error::Error;
};

} // namespace vfpph
