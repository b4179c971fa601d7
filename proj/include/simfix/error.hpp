#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace simfix {

enum class ErrorCode {
    CoincidentPoints,
    ParallelLines,
    DegenerateInput,
    InvalidRatio,
    InvalidTolerance,
    DegenerateTriangle,
    NotSimilar,
    NoUniqueFixedPoint,
    IsometryInput,
    NotADilation,
    IdentityInput,
    IsDilatation,
    DegenerateSelection,
    ConstructionFailed,
    LineThroughCenter,
    ParallelImage,
    NotIndirect,
    NotDirect,
    DegenerateProbe,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; code() lets
// callers (the CLI, the fuzz harness) branch without parsing messages.
class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace simfix
