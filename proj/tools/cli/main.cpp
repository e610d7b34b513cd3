#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mfc/error.hpp"

using namespace mfc::cli;

int main(int argc, char** argv) {
    CLI::App app{"Finite measure-valued MDPs for weakly coupled mean-field control"};
    app.require_subcommand(1);
    Options opts;

    auto common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opts.config, "YAML run config");
        if (needs_config) c->required();
        sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
        sub->add_option("--seed", opts.seed, "Override the config seed");
        sub->add_option("--threads", opts.threads, "Worker threads (never changes results)");
        sub->add_option("--tol", opts.tol, "Override solve.tol");
    };

    auto* build = app.add_subcommand("build", "Build the finite MDP described by the config");
    common(build, true);
    auto* solve = app.add_subcommand("solve", "Solve an MDP artifact by value iteration");
    common(solve, false);
    solve->add_option("--mdp", opts.mdp, "MDP artifact (default <out>/mdp.txt)");
    auto* simulate = app.add_subcommand("simulate", "Estimate the team cost of a policy by rollouts");
    common(simulate, true);
    simulate->add_option("--policy", opts.policy, "Policy artifact (default <out>/policy.txt)");
    auto* regret = app.add_subcommand("regret", "Simulated regret of a policy against a baseline");
    common(regret, true);
    regret->add_option("--policy", opts.policy, "Policy artifact (default <out>/policy.txt)");
    auto* sweep = app.add_subcommand("sweep", "Build, solve and simulate over a parameter list");
    common(sweep, true);
    sweep->add_option("--param", opts.param, "Parameter to vary: M (cells) or n (population)")->required();
    sweep->add_option("--values", opts.values, "Comma-separated values")->required();
    auto* check = app.add_subcommand("check", "Run the oracle, Lipschitz and bound checks");
    common(check, false);
    check->add_option("--mdp", opts.mdp, "Also verify the kernel rows of this MDP artifact");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*build) return cmd_build(opts);
        if (*solve) return cmd_solve(opts);
        if (*simulate) return cmd_simulate(opts);
        if (*regret) return cmd_regret(opts);
        if (*sweep) return cmd_sweep(opts);
        if (*check) {
            if (opts.config.empty() && opts.mdp.empty()) {
                std::cerr << "error: check needs --config, --mdp or both\n";
                return kUsage;
            }
            return cmd_check(opts);
        }
    } catch (const mfc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == mfc::ErrorKind::ArtifactMismatch ? kMismatch : kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
