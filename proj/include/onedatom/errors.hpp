#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace onedatom {

enum class ErrorKind {
    NonPositiveRate,
    NonFiniteInput,
    InvalidArgument,
    LeakyNotSupported,
    DephasingUnsupported,
    UnsupportedRegime,
    OffResonanceUnsupported,
    ScanFailed,
    StepCollapse,
    InvalidInitial,
    NoConvergence,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::NonPositiveRate: return "NonPositiveRate";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::LeakyNotSupported: return "LeakyNotSupported";
    case ErrorKind::DephasingUnsupported: return "DephasingUnsupported";
    case ErrorKind::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorKind::OffResonanceUnsupported: return "OffResonanceUnsupported";
    case ErrorKind::ScanFailed: return "ScanFailed";
    case ErrorKind::StepCollapse: return "StepCollapse";
    case ErrorKind::InvalidInitial: return "InvalidInitial";
    case ErrorKind::NoConvergence: return "NoConvergence";
    }
    return "Unknown";
}

/// Domain error raised by every module. The message names the violated
/// precondition; kind() allows callers to dispatch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace onedatom
