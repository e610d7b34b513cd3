#include <atomic>
#include <thread>

#include "mfc/error.hpp"
#include "mfc/parallel.hpp"

namespace mfc {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OutOfBounds: return "OutOfBounds";
        case ErrorKind::EmptyActionGrid: return "EmptyActionGrid";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::SupportMismatch: return "SupportMismatch";
        case ErrorKind::SizeMismatch: return "SizeMismatch";
        case ErrorKind::InvalidAction: return "InvalidAction";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NonStochasticKernel: return "NonStochasticKernel";
        case ErrorKind::ContractionViolated: return "ContractionViolated";
        case ErrorKind::UnreachableState: return "UnreachableState";
        case ErrorKind::Config: return "ConfigError";
        case ErrorKind::ArtifactMismatch: return "ArtifactMismatch";
        case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int threads) { g_threads.store(threads < 1 ? 1 : threads); }
int num_threads() { return g_threads.load(); }

}  // namespace mfc
