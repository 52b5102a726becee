#include "fcalign/common.hpp"

namespace fcalign {

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::SchemaError:
        case ErrorCode::NonPositiveValue:
        case ErrorCode::IoError:
            return 2;
        case ErrorCode::EmptyAfterFiltering:
        case ErrorCode::InconsistentTimeGrid:
            return 3;
        case ErrorCode::ZeroVariance:
        case ErrorCode::ZeroNorm:
        case ErrorCode::NonPositiveVariance:
        case ErrorCode::DegenerateSampling:
            return 4;
        case ErrorCode::InvalidArgument:
        case ErrorCode::StepTooLarge:
        case ErrorCode::InvalidCombination:
        case ErrorCode::LengthMismatch:
        case ErrorCode::SingleCluster:
            return 5;
    }
    return 1;
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::EmptyAfterFiltering: return "EmptyAfterFiltering";
        case ErrorCode::InconsistentTimeGrid: return "InconsistentTimeGrid";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::ZeroNorm: return "ZeroNorm";
        case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::InvalidCombination: return "InvalidCombination";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::SingleCluster: return "SingleCluster";
        case ErrorCode::DegenerateSampling: return "DegenerateSampling";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::NonPositiveValue: return "NonPositiveValue";
        case ErrorCode::IoError: return "IoError";
    }
    return "Error";
}

}  // namespace fcalign
