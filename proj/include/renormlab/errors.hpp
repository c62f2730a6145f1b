#pragma once

#include <stdexcept>
#include <string>

namespace renormlab {

enum class ErrorKind {
    DomainEscape,
    CriticalCenter,
    ZeroScaling,
    NonPositiveLength,
    QuadratureFailure,
    NoConvergence,
    SingularJacobian,
    NoCriticalPoint,
    SingularCorrection,
    SingularDifferential,
    ZeroJacobian,
    InvalidJacobian,
    MissingArtifact,
    Validation,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::DomainEscape: return "DomainEscape";
        case ErrorKind::CriticalCenter: return "CriticalCenter";
        case ErrorKind::ZeroScaling: return "ZeroScaling";
        case ErrorKind::NonPositiveLength: return "NonPositiveLength";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::SingularJacobian: return "SingularJacobian";
        case ErrorKind::NoCriticalPoint: return "NoCriticalPoint";
        case ErrorKind::SingularCorrection: return "SingularCorrection";
        case ErrorKind::SingularDifferential: return "SingularDifferential";
        case ErrorKind::ZeroJacobian: return "ZeroJacobian";
        case ErrorKind::InvalidJacobian: return "InvalidJacobian";
        case ErrorKind::MissingArtifact: return "MissingArtifact";
        case ErrorKind::Validation: return "Validation";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace renormlab
