#pragma once

#include <stdexcept>
#include <string>

namespace ordstat {

/// Error categories surfaced across the library and, as integer codes,
/// through the C API.
enum class ErrorCode {
    InvalidArgument,
    NonPositiveTheta,
    UnsupportedFamily,
    QuadratureFailure,
    MomentDivergence,
    ZeroWeights,
    OutOfSupport,
    InapplicableTag,
    DegenerateDenominator,
    Inconclusive,
    ZeroDensity,
    UnknownPanel,
    ParseError,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace ordstat
