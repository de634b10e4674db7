#pragma once

#include <stdexcept>
#include <string>

namespace tiletransport {

/// Error codes for the failure modes that callers are expected to
/// distinguish programmatically.
enum class ErrorCode {
    UnknownPrototile,
    InvalidPatch,
    InsufficientCollar,
    MissingSignature,
    EmptyInterior,
    NotOneDimensional,
    SearchExhausted,
    NonpositiveMass,
    BadArgument,
    Overflow,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace tiletransport
