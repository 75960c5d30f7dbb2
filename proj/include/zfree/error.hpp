#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zfree {

using Complex = std::complex<double>;

enum class ErrorKind {
    InvalidArgument,
    Evaluation,
    ZeroOnContour,
    Nonconvergence,
    DegenerateGeometry,
    Precondition,
    InternalConsistency,
    MapInversion,
    Conditioning,
    DegreeExceeded,
    Parse,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. Carries the
/// failure class and, when one exists, the complex point that triggered it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::optional<Complex> point = std::nullopt);

    /// Rewraps an existing error without re-decorating its message.
    struct Verbatim {};
    Error(Verbatim, const Error& cause);

    ErrorKind kind() const noexcept { return kind_; }
    const std::optional<Complex>& point() const noexcept { return point_; }

private:
    ErrorKind kind_;
    std::optional<Complex> point_;
};

}  // namespace zfree
