#pragma once

#include <stdexcept>
#include <string>

namespace pip {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A count or index does not fit the platform integer.
class SizingError : public Error {
public:
    using Error::Error;
};

/// Operands disagree on dimension, length or degree bound.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input violates a precondition such as distinct nodes or a unit direction.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Pivoted elimination hit a pivot below the singularity threshold.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// A node lies (numerically) on a hyperplane it has to avoid.
class IllPosedGeometryError : public Error {
public:
    using Error::Error;
};

/// Decomposition parameters (lambda, kappa, offsets) produce colliding geometry.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Malformed node, polynomial or CSV document.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace pip
