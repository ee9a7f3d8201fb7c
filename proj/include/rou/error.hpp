#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rou {

enum class ErrorCode {
    NonPositiveGamma,
    NonPositiveSigma,
    NonFiniteInput,
    NoBoundary,
    EmptyInterval,
    DoublyReflectedUnsupported,
    NonPositiveWidth,
    OutOfSupport,
    UnstableStep,
    StepSpansInterval,
    InvalidConfig,
    EmptySample,
    HorizonExceeded,
    InsufficientSamples,
    WriteFailure,
    ReadFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library. `field()` names the offending input
// (parameter, config key or path) when there is one.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string field, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

}  // namespace rou
