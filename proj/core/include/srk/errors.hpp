#pragma once

#include <stdexcept>
#include <string>

namespace srk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown registry name (method, problem, potential).
class LookupError : public Error {
public:
    using Error::Error;
};

/// Malformed input text (method files, forest strings, number expressions).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A tableau that fails structural validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Request exceeds a fixed enumeration bound.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Graph that is not a valid decorated forest.
class StructureError : public Error {
public:
    using Error::Error;
};

/// Pair of decorations that are not comparable in the refinement order.
class PosetError : public Error {
public:
    using Error::Error;
};

/// Fixed-point iteration for an implicit stage block did not converge.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// A state or stage value became non-finite.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace srk
