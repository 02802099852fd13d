#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plastiq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

class NotSPD : public Error {
public:
    using Error::Error;
};

/// Raised when a matrix that must lie in SL(d) has |det - 1| above tolerance.
/// `element` is the mesh element index when the check ran over a field.
class NotIsochoric : public Error {
public:
    NotIsochoric(const std::string& what, std::ptrdiff_t element = -1)
        : Error(what), element_(element) {}
    std::ptrdiff_t element() const noexcept { return element_; }

private:
    std::ptrdiff_t element_;
};

class DegenerateElement : public Error {
public:
    DegenerateElement(const std::string& what, std::ptrdiff_t element = -1)
        : Error(what), element_(element) {}
    std::ptrdiff_t element() const noexcept { return element_; }

private:
    std::ptrdiff_t element_;
};

class GrowthViolation : public Error {
public:
    using Error::Error;
};

class EmptySet : public Error {
public:
    using Error::Error;
};

class InvalidGeometry : public Error {
public:
    using Error::Error;
};

class InvalidEpsilon : public InvalidGeometry {
public:
    using InvalidGeometry::InvalidGeometry;
};

class InvalidDelta : public InvalidGeometry {
public:
    using InvalidGeometry::InvalidGeometry;
};

class InvalidMesh : public Error {
public:
    using Error::Error;
};

/// Ciarlet-Necas condition violated by a plastic deformation.
class CNViolation : public Error {
public:
    using Error::Error;
};

class ProjectionStall : public Error {
public:
    using Error::Error;
};

/// Wraps a failure inside the time loop with the knot at which it happened.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, std::size_t knot) : Error(what), knot_(knot) {}
    std::size_t knot() const noexcept { return knot_; }

private:
    std::size_t knot_;
};

class InvalidScenario : public Error {
public:
    using Error::Error;
};

}  // namespace plastiq
