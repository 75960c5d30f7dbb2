#include "zfree/error.hpp"

#include <sstream>

namespace zfree {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::Evaluation: return "evaluation-error";
        case ErrorKind::ZeroOnContour: return "zero-on-contour-suspected";
        case ErrorKind::Nonconvergence: return "nonconvergence";
        case ErrorKind::DegenerateGeometry: return "degenerate-geometry";
        case ErrorKind::Precondition: return "precondition-violation";
        case ErrorKind::InternalConsistency: return "internal-consistency";
        case ErrorKind::MapInversion: return "map-inversion-failure";
        case ErrorKind::Conditioning: return "conditioning-failure";
        case ErrorKind::DegreeExceeded: return "degree-exceeded";
        case ErrorKind::Parse: return "parse-error";
    }
    return "unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message,
                     const std::optional<Complex>& point) {
    std::ostringstream os;
    os << to_string(kind) << ": " << message;
    if (point) {
        os.precision(17);
        os << " (at " << point->real() << (point->imag() < 0 ? "" : "+")
           << point->imag() << "i)";
    }
    return os.str();
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<Complex> point)
    : std::runtime_error(decorate(kind, message, point)), kind_(kind), point_(point) {}

Error::Error(Verbatim, const Error& cause)
    : std::runtime_error(cause.what()), kind_(cause.kind()), point_(cause.point()) {}

}  // namespace zfree
