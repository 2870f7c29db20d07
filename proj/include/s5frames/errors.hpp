#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace s5frames {

enum class ErrorKind {
    BoundaryTooClose,
    DegenerateTangent,
    DegenerateAngle,
    SingularTrig,
    FrameDiscontinuity,
    HypothesisViolated,
    DegenerateSpec,
    InvalidChart,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::BoundaryTooClose: return "boundary_too_close";
    case ErrorKind::DegenerateTangent: return "degenerate_tangent";
    case ErrorKind::DegenerateAngle: return "degenerate_angle";
    case ErrorKind::SingularTrig: return "singular_trig";
    case ErrorKind::FrameDiscontinuity: return "frame_discontinuity";
    case ErrorKind::HypothesisViolated: return "hypothesis_violated";
    case ErrorKind::DegenerateSpec: return "degenerate_spec";
    case ErrorKind::InvalidChart: return "invalid_chart";
    }
    return "unknown";
}

/// Raised by the geometric kernels. Grid sweeps catch it per point and
/// count the point as skipped under `kind()`.
class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Which angle tripped a DegenerateAngle error.
enum class Angle { Alpha, Beta };

class DegenerateAngleError : public GeometryError {
public:
    DegenerateAngleError(Angle which, double value)
        : GeometryError(ErrorKind::DegenerateAngle,
                        std::string(which == Angle::Alpha ? "alpha" : "beta") + " = " +
                            std::to_string(value)),
          which_(which), value_(value) {}

    Angle which() const noexcept { return which_; }
    double value() const noexcept { return value_; }

private:
    Angle which_;
    double value_;
};

} // namespace s5frames
