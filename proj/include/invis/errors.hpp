#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace invis {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A conic's focal constant is incompatible with its kind (ellipse through a
// point of the focal segment, hyperbola through a point of the focal line
// outside it, zero focal difference, ...).
struct DegenerateConic : Error {
    using Error::Error;
};

// A point handed to a curve-local operation is not on the curve.
struct OffCurve : Error {
    using Error::Error;
};

// Polar angle outside an arc's extent.
struct OutOfExtent : Error {
    using Error::Error;
};

// No admissible polar radius / no curve point in the requested direction.
struct DomainError : Error {
    using Error::Error;
};

struct NoIntersection : Error {
    using Error::Error;
};

// A base arc could not be clipped against its line as the construction
// requires (missing or misplaced intersection).
struct ArcClippingFailed : Error {
    using Error::Error;
};

// Sequence generation stepped off its rail segment.
struct RailExhausted : Error {
    using Error::Error;
};

// Ray origin inside a solid quadrangle.
struct InsideBody : Error {
    using Error::Error;
};

// A trace that was required to exit did not.
struct NotExited : Error {
    using Error::Error;
};

// 3D ray's meridian plane outside the revolved angular range.
struct OutsideRevolvedRange : Error {
    using Error::Error;
};

// Unreadable or unwritable file.
struct IoError : Error {
    using Error::Error;
};

// Carries the list of violated constraint names, for machine-readable output.
struct InvalidConfiguration : Error {
    std::vector<std::string> violations;
    explicit InvalidConfiguration(std::vector<std::string> v)
        : Error("invalid configuration: " + join(v)), violations(std::move(v)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += ", ";
            s += v[i];
        }
        return s;
    }
};

} // namespace invis
