#pragma once

#include <stdexcept>
#include <string>

namespace coevo {

// Base for every error the library raises on bad input or failed I/O.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a caller-supplied argument violates an operation precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

}  // namespace coevo
