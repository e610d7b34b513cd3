#include "mfc/registry.hpp"

#include <algorithm>
#include <cmath>

#include "mfc/error.hpp"

namespace mfc {

namespace {

Vec scalar(double v) { return Vec{v}; }

constexpr double kTop = 0x1.0p62;

// x' = x + E_mu[X], c = x; saturates at the top of the box.
ModelBundle paper_example() {
    AgentModel m;
    m.name = "paper-example";
    m.dynamics = [](const Vec& x, const Vec&, const MeanField& mf, const Vec&, const Vec&) {
        return scalar(std::min(x[0] + mf.mean(0), kTop));
    };
    m.stage_cost = [](const Vec& x, const Vec&, const MeanField&) { return x[0]; };
    m.K_f = 1.0;
    m.K_c = 1.0;
    m.beta = 0.25;
    m.state_bounds = Box{{0.0}, {kTop}};
    m.action_set = Box{{0.0}, {0.0}};
    const int one[] = {1};
    return {m, StateGrid::uniform(m.state_bounds, one), ActionGrid{{scalar(0.0)}}};
}

ModelBundle crowd_1d() {
    AgentModel m;
    m.name = "crowd-1d";
    m.dynamics = [](const Vec& x, const Vec& u, const MeanField& mf, const Vec& wi, const Vec& w0) {
        const double next = 0.5 * x[0] + 0.25 + 0.2 * u[0] + 0.2 * (mf.mean(0) - 0.5) + wi[0] + w0[0];
        return scalar(std::clamp(next, 0.0, 1.0));
    };
    m.stage_cost = [](const Vec& x, const Vec& u, const MeanField& mf) {
        const double target = (x[0] - 0.75) * (x[0] - 0.75);
        const double congestion = mf.integrate([&](const Vec& y) {
            return std::max(0.0, 1.0 - std::abs(x[0] - y[0]) / 0.25);
        });
        return target + 0.1 * u[0] * u[0] + 0.25 * congestion;
    };
    m.idio_noise = Noise::finite({{scalar(-0.1), 0.25}, {scalar(0.0), 0.5}, {scalar(0.1), 0.25}});
    m.common_noise = Noise::finite({{scalar(-0.1), 0.5}, {scalar(0.1), 0.5}});
    m.K_f = 0.5;
    m.K_c = 2.5;
    m.beta = 0.6;
    m.state_bounds = Box{{0.0}, {1.0}};
    m.action_set = Box{{-1.0}, {1.0}};
    const int cells[] = {4};
    return {m, StateGrid::uniform(m.state_bounds, cells), ActionGrid{{scalar(-1.0), scalar(1.0)}}};
}

// States {0, 1}. Action 1 flips the state with probability 0.8; the common
// noise resets everyone to 0 with probability 0.1.
ModelBundle switch_2state() {
    AgentModel m;
    m.name = "switch-2state";
    m.dynamics = [](const Vec& x, const Vec& u, const MeanField&, const Vec& wi, const Vec& w0) {
        if (w0[0] > 0.5) return scalar(0.0);
        if (u[0] > 0.5 && wi[0] > 0.5) return scalar(1.0 - x[0]);
        return scalar(x[0]);
    };
    m.stage_cost = [](const Vec& x, const Vec& u, const MeanField& mf) {
        return (1.0 - x[0]) + 0.5 * x[0] * mf.mean(0) + 0.1 * u[0];
    };
    m.idio_noise = Noise::finite({{scalar(0.0), 0.2}, {scalar(1.0), 0.8}});
    m.common_noise = Noise::finite({{scalar(0.0), 0.9}, {scalar(1.0), 0.1}});
    m.K_f = 1.0;
    m.K_c = 1.0;
    m.beta = 0.45;
    m.state_bounds = Box{{0.0}, {1.0}};
    m.action_set = Box{{0.0}, {1.0}};
    StateGrid grid({Vec{0.0, 0.5, 1.0}}, std::vector<Vec>{scalar(0.0), scalar(1.0)});
    return {m, grid, ActionGrid{{scalar(0.0), scalar(1.0)}}};
}

// States {0, 0.5, 1}. Action 1 climbs with probability 0.7, action 0 slides
// down with probability 0.6; the common noise pushes everyone down.
ModelBundle ladder_3state() {
    AgentModel m;
    m.name = "ladder-3state";
    m.dynamics = [](const Vec& x, const Vec& u, const MeanField&, const Vec& wi, const Vec& w0) {
        double next = x[0];
        if (u[0] > 0.5 && wi[0] < 0.7) next += 0.5;
        if (u[0] <= 0.5 && wi[0] < 0.6) next -= 0.5;
        if (w0[0] > 0.5) next -= 0.5;
        return scalar(std::clamp(next, 0.0, 1.0));
    };
    m.stage_cost = [](const Vec& x, const Vec& u, const MeanField& mf) {
        const double crowd = mf.integrate([&](const Vec& y) {
            return std::max(0.0, 1.0 - 2.0 * std::abs(x[0] - y[0]));
        });
        return (x[0] - 1.0) * (x[0] - 1.0) + 0.25 * crowd + 0.1 * u[0];
    };
    std::vector<NoiseAtom> atoms;
    for (int k = 0; k < 10; ++k) atoms.push_back({scalar(0.05 + 0.1 * k), 0.1});
    m.idio_noise = Noise::finite(std::move(atoms));
    m.common_noise = Noise::finite({{scalar(0.0), 0.8}, {scalar(1.0), 0.2}});
    m.K_f = 1.0;
    m.K_c = 2.5;
    m.beta = 0.45;
    m.state_bounds = Box{{0.0}, {1.0}};
    m.action_set = Box{{0.0}, {1.0}};
    StateGrid grid({Vec{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}},
                   std::vector<Vec>{scalar(0.0), scalar(0.5), scalar(1.0)});
    return {m, grid, ActionGrid{{scalar(0.0), scalar(1.0)}}};
}

}  // namespace

ModelBundle make_model(const std::string& name) {
    if (name == "paper-example") return paper_example();
    if (name == "crowd-1d") return crowd_1d();
    if (name == "switch-2state") return switch_2state();
    if (name == "ladder-3state") return ladder_3state();
    throw Error(ErrorKind::Config, "unknown model '" + name + "'");
}

std::vector<std::string> model_names() {
    return {"paper-example", "crowd-1d", "switch-2state", "ladder-3state"};
}

}  // namespace mfc
