#pragma once

#include <stdexcept>
#include <string>

namespace vaxnet {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or missing input (files, configuration, arguments).
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace vaxnet
