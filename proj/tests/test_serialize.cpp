#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mfc/error.hpp"
#include "mfc/registry.hpp"
#include "mfc/serialize.hpp"

using namespace mfc;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidArgument;
}

FiniteMeasureMDP reread(const FiniteMeasureMDP& mdp) {
    std::istringstream is(mdp_to_string(mdp));
    return read_mdp(is);
}

}  // namespace

TEST_CASE("format_double examples") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
}

TEST_CASE("property: format_double round-trips every bit pattern") {
    std::mt19937_64 gen(23);
    for (int i = 0; i < 20000; ++i) {
        const std::uint64_t bits = gen();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) continue;
        const double back = parse_double(format_double(v));
        CHECK(std::memcmp(&back, &v, sizeof v) == 0);
    }
}

TEST_CASE("parse_double rejects junk") {
    CHECK(kind_of([] { parse_double("abc"); }) == ErrorKind::Io);
    CHECK(kind_of([] { parse_double("1.5x"); }) == ErrorKind::Io);
    CHECK(kind_of([] { parse_double(""); }) == ErrorKind::Io);
}

TEST_CASE("hash_hex is 64-bit FNV-1a") {
    CHECK(hash_hex("") == "cbf29ce484222325");
    CHECK(hash_hex("a") == "af63dc4c8601ec8c");
    CHECK(hash_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("MDP artifacts round-trip byte for byte") {
    const ModelBundle crowd = make_model("crowd-1d");
    McConfig mc;
    mc.seed = 8;
    std::vector<FiniteMeasureMDP> mdps{
        build_finite_population_mdp(crowd.model, crowd.default_grid, crowd.default_actions, 2),
        build_finite_population_mdp(crowd.model, crowd.default_grid, crowd.default_actions, 2,
                                    WeightScheme::sampled_uniform(3), mc),
        build_aggregation_mdp(crowd.model, crowd.default_grid, crowd.default_actions, 2),
        build_sampling_mdp(crowd.model, crowd.default_grid, crowd.default_actions, 2)};
    mdps[0].meta.config_hash = "0123456789abcdef";
    for (const auto& mdp : mdps) {
        const auto back = reread(mdp);
        CHECK(mdp_to_string(back) == mdp_to_string(mdp));
        CHECK(back.states == mdp.states);
        CHECK(back.actions == mdp.actions);
        CHECK(back.cost == mdp.cost);
        CHECK(back.beta == mdp.beta);
        CHECK(back.meta.kind == mdp.meta.kind);
        CHECK(back.meta.rule_resolution == mdp.meta.rule_resolution);
        CHECK(back.meta.config_hash == mdp.meta.config_hash);
        for (std::size_t s = 0; s < mdp.num_states(); ++s)
            for (std::size_t a = 0; a < mdp.num_actions(s); ++a) {
                CHECK(back.kernel[s][a].next == mdp.kernel[s][a].next);
                CHECK(back.kernel[s][a].prob == mdp.kernel[s][a].prob);
            }
    }
}

TEST_CASE("corrupt MDP artifacts are rejected") {
    const ModelBundle sw = make_model("switch-2state");
    const std::string text = mdp_to_string(build_finite_population_mdp(sw.model, sw.default_grid, sw.default_actions, 2));
    auto read = [](std::string t) {
        std::istringstream is(t);
        return read_mdp(is);
    };
    CHECK(kind_of([&] { read(text.substr(0, text.size() / 2)); }) == ErrorKind::Io);
    CHECK(kind_of([&] { read("mfc-mdp 2\n"); }) == ErrorKind::Io);
    CHECK(kind_of([&] { read("hello\n"); }) == ErrorKind::Io);
    std::string bad = text;
    const auto pos = bad.find("\nkernel ");
    REQUIRE(pos != std::string::npos);
    // first triplet gets a next-state index far outside the state space
    const auto line = bad.find('\n', pos + 1);
    const auto end = bad.find('\n', line + 1);
    bad.replace(line + 1, end - line - 1, "0 0 999 1");
    CHECK(kind_of([&] { read(bad); }) == ErrorKind::Io);
}

TEST_CASE("solution artifacts round-trip") {
    SolutionFile sol;
    sol.mdp_hash = hash_hex("m");
    sol.config_hash = "";
    sol.result.iterations = 3;
    sol.result.converged = true;
    sol.result.gaps = {1.0, 0.3, 1e-17};
    sol.result.value.values = {0.1, -2.0, 1.0 / 3.0};
    sol.result.policy.choice = {0, 4, 1};
    std::ostringstream os;
    write_solution(os, sol);
    std::istringstream is(os.str());
    const auto back = read_solution(is);
    CHECK(back.mdp_hash == sol.mdp_hash);
    CHECK(back.config_hash.empty());
    CHECK(back.result.iterations == 3);
    CHECK(back.result.converged);
    CHECK(back.result.gaps == sol.result.gaps);
    CHECK(back.result.value.values == sol.result.value.values);
    CHECK(back.result.policy.choice == sol.result.policy.choice);
}

TEST_CASE("policy artifacts round-trip") {
    PolicyFile f;
    f.config_hash = "abc";
    f.grid_signature = grid_signature({Vec{0.0}, Vec{1.0}}, {Vec{0.0}, Vec{1.0}}, 2);
    f.policy.kind = MdpKind::Sampling;
    f.policy.population = 2;
    f.policy.num_cells = 2;
    f.policy.num_actions = 2;
    f.policy.probs = {1, 0, 0.5, 0.5, 0.25, 0.75, 0, 1, 1.0 / 3.0, 2.0 / 3.0, 0.5, 0.5};
    std::ostringstream os;
    write_policy(os, f);
    std::istringstream is(os.str());
    const auto back = read_policy(is);
    CHECK(back.config_hash == "abc");
    CHECK(back.grid_signature == f.grid_signature);
    CHECK(back.policy.kind == MdpKind::Sampling);
    CHECK(back.policy.population == 2);
    CHECK(back.policy.probs == f.policy.probs);
}

TEST_CASE("grid_signature separates grids, atoms and populations") {
    const std::vector<Vec> reps{Vec{0.25}, Vec{0.75}}, atoms{Vec{-1.0}, Vec{1.0}};
    const auto base = grid_signature(reps, atoms, 4);
    CHECK(base.size() == 16);
    CHECK(base == grid_signature(reps, atoms, 4));
    CHECK(base != grid_signature(reps, atoms, 5));
    CHECK(base != grid_signature({Vec{0.25}, Vec{0.8}}, atoms, 4));
    CHECK(base != grid_signature(reps, {Vec{-1.0}, Vec{0.5}}, 4));
}

TEST_CASE("values CSV layout") {
    FiniteMeasureMDP mdp;
    mdp.meta.num_cells = 2;
    mdp.states = {EmpiricalMeasure({2, 0}), EmpiricalMeasure({1, 1})};
    SolveResult r;
    r.value.values = {0.5, 1.25};
    r.policy.choice = {0, 3};
    std::ostringstream os;
    write_values_csv(os, mdp, r);
    CHECK(os.str() == "count_0,count_1,value,action\n2,0,0.5,0\n1,1,1.25,3\n");
}
