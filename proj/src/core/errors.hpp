#pragma once

#include <stdexcept>
#include <string>

namespace ccr {

enum class ErrorCode {
    RationalInput,
    NonFinite,
    BandwidthOverflow,
    SingularMatrix,
    NotNearRotation,
    NonConvergent,
    DegenerateNorm,
    LogDiverges,
    ResonantAngle,
    NoContraction,
    PreconditionViolated,
    InvalidArgument,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::RationalInput: return "RationalInput";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::BandwidthOverflow: return "BandwidthOverflow";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::NotNearRotation: return "NotNearRotation";
        case ErrorCode::NonConvergent: return "NonConvergent";
        case ErrorCode::DegenerateNorm: return "DegenerateNorm";
        case ErrorCode::LogDiverges: return "LogDiverges";
        case ErrorCode::ResonantAngle: return "ResonantAngle";
        case ErrorCode::NoContraction: return "NoContraction";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ccr
