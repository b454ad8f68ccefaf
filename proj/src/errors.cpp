#include "depthaudit/errors.hpp"

namespace depthaudit {

const char *error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::DegenerateProjection:
        return "DegenerateProjection";
    case ErrorCode::InvalidDepthSample:
        return "InvalidDepthSample";
    case ErrorCode::IndexError:
        return "IndexError";
    case ErrorCode::AspectMismatch:
        return "AspectMismatch";
    case ErrorCode::DimensionError:
        return "DimensionError";
    case ErrorCode::InsufficientPoints:
        return "InsufficientPoints";
    case ErrorCode::DegenerateConfiguration:
        return "DegenerateConfiguration";
    case ErrorCode::NumericalFailure:
        return "NumericalFailure";
    case ErrorCode::NoConvergence:
        return "NoConvergence";
    case ErrorCode::NoUsableViews:
        return "NoUsableViews";
    case ErrorCode::MissingField:
        return "MissingField";
    case ErrorCode::BadType:
        return "BadType";
    case ErrorCode::InvariantViolation:
        return "InvariantViolation";
    case ErrorCode::DomainError:
        return "DomainError";
    case ErrorCode::EmptyReport:
        return "EmptyReport";
    case ErrorCode::NoValidSamples:
        return "NoValidSamples";
    case ErrorCode::DegenerateScene:
        return "DegenerateScene";
    case ErrorCode::IoError:
        return "IoError";
    }
    return "UnknownError";
}

} // namespace depthaudit
