#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "mfc/mdp.hpp"
#include "mfc/solver.hpp"

namespace mfc {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

/// FNV-1a 64-bit, rendered as 16 lowercase hex digits.
std::string hash_hex(std::string_view data);

/// Text MDP artifact (see docs/formats.md). Newline-delimited decimal records:
/// header keys, representatives, action atoms, states, actions with costs,
/// sparse kernel triplets, "end".
void write_mdp(std::ostream& os, const FiniteMeasureMDP& mdp);
std::string mdp_to_string(const FiniteMeasureMDP& mdp);
FiniteMeasureMDP read_mdp(std::istream& is);

/// Solution artifact: values and chosen actions, tied to the MDP text hash.
struct SolutionFile {
    std::string mdp_hash;
    std::string config_hash;
    SolveResult result;
};
void write_solution(std::ostream& os, const SolutionFile& sol);
SolutionFile read_solution(std::istream& is);

/// CSV: state counts..., value, action id.
void write_values_csv(std::ostream& os, const FiniteMeasureMDP& mdp, const SolveResult& result);

/// Agent policy artifact carrying the grid signature it was computed on.
struct PolicyFile {
    std::string config_hash;
    std::string grid_signature;
    AgentPolicy policy;
};
void write_policy(std::ostream& os, const PolicyFile& file);
PolicyFile read_policy(std::istream& is);

/// Hash of the representatives, action atoms and population.
std::string grid_signature(const std::vector<Vec>& representatives,
                           const std::vector<Vec>& action_atoms, int population);

}  // namespace mfc
