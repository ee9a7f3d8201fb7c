#include "rou/error.hpp"

namespace rou {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveGamma: return "NonPositiveGamma";
        case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::NoBoundary: return "NoBoundary";
        case ErrorCode::EmptyInterval: return "EmptyInterval";
        case ErrorCode::DoublyReflectedUnsupported: return "DoublyReflectedUnsupported";
        case ErrorCode::NonPositiveWidth: return "NonPositiveWidth";
        case ErrorCode::OutOfSupport: return "OutOfSupport";
        case ErrorCode::UnstableStep: return "UnstableStep";
        case ErrorCode::StepSpansInterval: return "StepSpansInterval";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::HorizonExceeded: return "HorizonExceeded";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::WriteFailure: return "WriteFailure";
        case ErrorCode::ReadFailure: return "ReadFailure";
    }
    return "Unknown";
}

namespace {
std::string compose(ErrorCode code, const std::string& field, const std::string& detail) {
    std::string msg(to_string(code));
    if (!field.empty()) msg += " [" + field + "]";
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}
}  // namespace

Error::Error(ErrorCode code, std::string field, const std::string& detail)
    : std::runtime_error(compose(code, field, detail)), code_(code), field_(std::move(field)) {}

}  // namespace rou
