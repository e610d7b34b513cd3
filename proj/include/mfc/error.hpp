#pragma once

#include <stdexcept>
#include <string>

namespace mfc {

enum class ErrorKind {
    OutOfBounds,
    EmptyActionGrid,
    CapExceeded,
    SupportMismatch,
    SizeMismatch,
    InvalidAction,
    InvalidArgument,
    NonStochasticKernel,
    ContractionViolated,
    UnreachableState,
    Config,
    ArtifactMismatch,
    Io,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace mfc
