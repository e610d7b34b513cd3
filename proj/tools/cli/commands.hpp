#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mfc::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kMismatch = 3 };

struct Options {
    std::string config;
    std::string out = ".";
    std::string mdp;     // defaults to <out>/mdp.txt
    std::string policy;  // defaults to <out>/policy.txt
    std::string param;   // sweep: M or n
    std::string values;  // sweep: comma-separated
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<double> tol;
};

int cmd_build(const Options& opts);
int cmd_solve(const Options& opts);
int cmd_simulate(const Options& opts);
int cmd_regret(const Options& opts);
int cmd_sweep(const Options& opts);
int cmd_check(const Options& opts);

}  // namespace mfc::cli
