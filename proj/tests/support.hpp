#pragma once

// Small hand-checkable models shared by the unit and acceptance tests.

#include <cmath>

#include "mfc/grid.hpp"
#include "mfc/model.hpp"
#include "mfc/registry.hpp"

namespace mfc::test {

inline Vec scalar(double v) { return Vec{v}; }

// Two cells [0,0.5), [0.5,1] with representatives 0.25 and 0.75.
inline StateGrid two_cells() { return StateGrid({Vec{0.0, 0.5, 1.0}}); }

// Every agent lands in either cell with probability 1/2, whatever it does.
inline ModelBundle coin_model() {
    AgentModel m;
    m.name = "coin";
    m.dynamics = [](const Vec&, const Vec&, const MeanField&, const Vec& wi, const Vec&) {
        return scalar(wi[0] > 0.5 ? 0.75 : 0.25);
    };
    m.stage_cost = [](const Vec&, const Vec&, const MeanField&) { return 0.0; };
    m.idio_noise = Noise::finite({{scalar(0.0), 0.5}, {scalar(1.0), 0.5}});
    m.K_f = 0.0;
    m.K_c = 0.0;
    m.beta = 0.5;
    m.state_bounds = Box{{0.0}, {1.0}};
    m.action_set = Box{{0.0}, {1.0}};
    return {m, two_cells(), ActionGrid{{scalar(0.0), scalar(1.0)}}};
}

// Deterministic: action 1 moves to the other cell, action 0 stays.
// Cost is the state plus a small action charge.
inline ModelBundle flip_model() {
    AgentModel m;
    m.name = "flip";
    m.dynamics = [](const Vec& x, const Vec& u, const MeanField&, const Vec&, const Vec&) {
        if (u[0] < 0.5) return scalar(x[0]);
        return scalar(x[0] < 0.5 ? 0.75 : 0.25);
    };
    m.stage_cost = [](const Vec& x, const Vec& u, const MeanField&) { return x[0] + 0.1 * u[0]; };
    m.K_f = 1.0;
    m.K_c = 1.0;
    m.beta = 0.4;
    m.state_bounds = Box{{0.0}, {1.0}};
    m.action_set = Box{{0.0}, {1.0}};
    return {m, two_cells(), ActionGrid{{scalar(0.0), scalar(1.0)}}};
}

// Every agent jumps to cell 0 with common noise 0 and to cell 1 with common noise 1.
inline ModelBundle common_jump_model() {
    AgentModel m;
    m.name = "common-jump";
    m.dynamics = [](const Vec&, const Vec&, const MeanField&, const Vec&, const Vec& w0) {
        return scalar(w0[0] > 0.5 ? 0.75 : 0.25);
    };
    m.stage_cost = [](const Vec& x, const Vec&, const MeanField&) { return x[0]; };
    m.common_noise = Noise::finite({{scalar(0.0), 0.5}, {scalar(1.0), 0.5}});
    m.K_f = 0.0;
    m.K_c = 1.0;
    m.beta = 0.5;
    m.state_bounds = Box{{0.0}, {1.0}};
    m.action_set = Box{{0.0}, {0.0}};
    return {m, two_cells(), ActionGrid{{scalar(0.0)}}};
}

}  // namespace mfc::test
