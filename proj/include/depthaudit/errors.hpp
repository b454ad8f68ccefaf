#pragma once

#include <stdexcept>
#include <string>

namespace depthaudit {

enum class ErrorCode {
    DegenerateProjection,
    InvalidDepthSample,
    IndexError,
    AspectMismatch,
    DimensionError,
    InsufficientPoints,
    DegenerateConfiguration,
    NumericalFailure,
    NoConvergence,
    NoUsableViews,
    MissingField,
    BadType,
    InvariantViolation,
    DomainError,
    EmptyReport,
    NoValidSamples,
    DegenerateScene,
    IoError,
};

const char *error_code_name(ErrorCode code);

class AuditError : public std::runtime_error {
  public:
    AuditError(ErrorCode code, const std::string &msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string &msg) {
    throw AuditError(code, msg);
}

} // namespace depthaudit
