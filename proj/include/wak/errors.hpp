#pragma once

#include <stdexcept>
#include <string>

namespace wak {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};

struct PoleAtSpecialization : Error {
    using Error::Error;
};

struct ArityMismatch : Error {
    using Error::Error;
};

struct CapExceeded : Error {
    using Error::Error;
};

struct ParityViolation : Error {
    using Error::Error;
};

struct WindowTooSmall : Error {
    using Error::Error;
};

struct SelectorError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct NoncommutingSubstitution : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace wak
