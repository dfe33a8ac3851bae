#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subcurv {

// Base class for every failure this library reports deliberately.  Callers
// that want to distinguish causes catch the concrete type; callers that just
// want "the run failed" catch Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- expression layer ------------------------------------------------------

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
    explicit SyntaxError(const std::string& msg)  // no meaningful offset
        : Error(msg), offset(std::string::npos) {}
    std::size_t offset;  // byte offset into the source text
};

class UnknownIdentifier : public Error {
public:
    using Error::Error;
};

class ArityError : public Error {
public:
    using Error::Error;
};

// ---- geometry layer --------------------------------------------------------

class DomainViolation : public Error {
public:
    using Error::Error;
};

// A finite-difference stencil point left the declared chart domain.
class StencilOutsideDomain : public Error {
public:
    using Error::Error;
};

class NonPositiveDefinite : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class GramSchmidtBreakdown : public Error {
public:
    using Error::Error;
};

class DegeneratePlane : public Error {
public:
    using Error::Error;
};

class DimensionTooSmall : public Error {
public:
    using Error::Error;
};

class FiberTooSmall : public Error {
public:
    using Error::Error;
};

// ---- structure / model layer ----------------------------------------------

class MissingStructure : public Error {
public:
    using Error::Error;
};

class MixedStructureVector : public Error {
public:
    using Error::Error;
};

class ModelMisfit : public Error {
public:
    using Error::Error;
};

// ---- config / io layer -----------------------------------------------------

class MissingField : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class ConstraintViolated : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace subcurv
