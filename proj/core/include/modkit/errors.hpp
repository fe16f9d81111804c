#pragma once

#include <stdexcept>
#include <string>

namespace modkit {

// Root of every exception raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands live on incompatible Hilbert spaces.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A hypothesis of the requested construction does not hold (e.g. density of X H0).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A module or algebra axiom fails; `axiom()` names it.
class ClosureError : public Error {
public:
    ClosureError(std::string axiom, const std::string& what)
        : Error(what), axiom_(std::move(axiom)) {}
    const std::string& axiom() const noexcept { return axiom_; }

private:
    std::string axiom_;
};

// Input is numerically inconsistent with a statement that must hold exactly.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace modkit
