#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pscontact {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structural misuse of the jet layer (mismatched variable counts, bad order).
class JetError : public Error {
public:
    using Error::Error;
};

// Domain violation inside jet arithmetic (division by zero value, ln of a
// non-positive value, ...). Carries no location; the expression evaluator
// wraps it into an EvalError with point and AST path.
class JetDomainError : public Error {
public:
    using Error::Error;
};

class EvalError : public Error {
public:
    EvalError(const std::string& msg, std::vector<double> point, std::string ast_path)
        : Error(msg), point(std::move(point)), ast_path(std::move(ast_path)) {}
    std::vector<double> point;
    std::string ast_path;
};

class ParseError : public Error {
public:
    enum class Kind { Syntax, UnknownIdentifier, NonIntegerExponent };
    ParseError(Kind kind, std::size_t offset, const std::string& msg)
        : Error(msg), kind(kind), offset(offset) {}
    Kind kind;
    std::size_t offset;
};

class SpecFileError : public Error {
public:
    SpecFileError(const std::string& msg, std::string section = "", int line = 0)
        : Error(msg), section(std::move(section)), line(line) {}
    std::string section;
    int line;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class DegenerateMetricError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class AsymmetricMetricError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class FrameConstructionError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class ContactViolationError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class GeodesicHypothesisError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class NonUnitProbeError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class NullProbeError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class CatalogSelfTestError : public Error {
public:
    using Error::Error;
};

} // namespace pscontact
