#pragma once

#include <string>
#include <vector>

#include "mfc/grid.hpp"
#include "mfc/model.hpp"

namespace mfc {

/// A built-in model together with the grid and action atoms it is meant to
/// be discretized with by default.
struct ModelBundle {
    AgentModel model;
    StateGrid default_grid;
    ActionGrid default_actions;
};

/// Built-ins:
///  "paper-example"  control-free x' = x + E_mu[X], c = x on [0, 2^62].
///  "crowd-1d"       mean-reverting 1-D crowd with quadratic target cost and
///                   congestion, finite idiosyncratic and common noise.
///  "switch-2state"  two-state switching toy (exact oracle tests).
///  "ladder-3state"  three-level toy (exact oracle tests).
/// Error(Config) for unknown names.
ModelBundle make_model(const std::string& name);
std::vector<std::string> model_names();

}  // namespace mfc
