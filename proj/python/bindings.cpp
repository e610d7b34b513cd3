#include <optional>
#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfc/diagnostics.hpp"
#include "mfc/error.hpp"
#include "mfc/lipschitz.hpp"
#include "mfc/mdp.hpp"
#include "mfc/parallel.hpp"
#include "mfc/registry.hpp"
#include "mfc/serialize.hpp"
#include "mfc/simulate.hpp"
#include "mfc/solver.hpp"

namespace py = pybind11;
using namespace mfc;

namespace {

const StateGrid& grid_or_default(const ModelBundle& b, const std::optional<StateGrid>& grid) {
    return grid ? *grid : b.default_grid;
}

ActionGrid atoms_or_default(const ModelBundle& b, const std::optional<std::vector<Vec>>& atoms) {
    return atoms ? ActionGrid{*atoms} : b.default_actions;
}

McConfig mc(std::uint64_t seed, int samples) {
    McConfig c;
    c.seed = seed;
    c.samples = samples;
    return c;
}

Realization realization_from_string(const std::string& s) {
    if (s == "independent") return Realization::Independent;
    if (s == "coordinated") return Realization::Coordinated;
    throw Error(ErrorKind::InvalidArgument, "realization must be 'independent' or 'coordinated'");
}

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite measure-valued MDPs for weakly coupled mean-field control";
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    m.def("set_num_threads", &set_num_threads, py::arg("threads"));
    m.def("num_threads", &num_threads);
    m.def("model_names", &model_names);

    py::class_<StateGrid>(m, "StateGrid")
        .def(py::init<std::vector<Vec>, std::optional<std::vector<Vec>>>(), py::arg("boundaries"),
             py::arg("representatives") = py::none())
        .def_static(
            "uniform",
            [](Vec lower, Vec upper, std::vector<int> cells) { return StateGrid::uniform(Box{lower, upper}, cells); },
            py::arg("lower"), py::arg("upper"), py::arg("cells"))
        .def("__len__", &StateGrid::size)
        .def_property_readonly("L_X", &StateGrid::L_X)
        .def_property_readonly("representatives", &StateGrid::representatives)
        .def_property_readonly("boundaries", &StateGrid::boundaries)
        .def("quantize", [](const StateGrid& g, const Vec& x) { return g.quantize(x); }, py::arg("x"));

    py::class_<ModelBundle>(m, "Model")
        .def(py::init(&make_model), py::arg("name"))
        .def_property_readonly("name", [](const ModelBundle& b) { return b.model.name; })
        .def_property(
            "beta", [](const ModelBundle& b) { return b.model.beta; },
            [](ModelBundle& b, double beta) { b.model.beta = beta; })
        .def_property_readonly("K_f", [](const ModelBundle& b) { return b.model.K_f; })
        .def_property_readonly("K_c", [](const ModelBundle& b) { return b.model.K_c; })
        .def_property_readonly("state_bounds",
                               [](const ModelBundle& b) { return py::make_tuple(b.model.state_bounds.lower, b.model.state_bounds.upper); })
        .def_readwrite("grid", &ModelBundle::default_grid)
        .def_property(
            "action_atoms", [](const ModelBundle& b) { return b.default_actions.atoms; },
            [](ModelBundle& b, std::vector<Vec> atoms) { b.default_actions = ActionGrid{std::move(atoms)}; })
        .def(
            "contraction",
            [](const ModelBundle& b) {
                const auto r = validate_contraction(b.model);
                return py::make_tuple(r.value, r.ok);
            },
            "(2 K_f beta, 2 K_f beta < 1)")
        .def(
            "estimate_lipschitz",
            [](const ModelBundle& b, int samples, std::uint64_t seed) {
                const auto e = estimate_lipschitz(b.model, samples, seed);
                return py::dict(py::arg("K_f") = e.K_f, py::arg("K_c") = e.K_c, py::arg("warning") = e.warning);
            },
            py::arg("samples") = 2000, py::arg("seed") = 0)
        .def("__repr__", [](const ModelBundle& b) { return "<mfc.Model " + b.model.name + ">"; });

    m.def("count_PN", &count_PN, py::arg("M"), py::arg("N"));
    m.def(
        "enumerate_PN",
        [](std::size_t M, int N) {
            std::vector<std::vector<int>> out;
            for (const auto& mu : enumerate_PN(M, N)) out.push_back(mu.counts);
            return out;
        },
        py::arg("M"), py::arg("N"));
    m.def("rank_PN", [](const std::vector<int>& counts) { return rank_PN(counts); }, py::arg("counts"));
    m.def(
        "w1_discrete", [](const Vec& a, const Vec& b) { return w1_discrete(std::span<const double>(a), std::span<const double>(b)); },
        py::arg("a"), py::arg("b"));
    m.def(
        "nearest_empirical", [](const Vec& mu, int n) { return nearest_empirical(SimplexMeasure(mu), n).counts; },
        py::arg("mu"), py::arg("n"));

    py::class_<FiniteMeasureMDP>(m, "MDP")
        .def_property_readonly("num_states", &FiniteMeasureMDP::num_states)
        .def_property_readonly("beta", [](const FiniteMeasureMDP& d) { return d.beta; })
        .def_property_readonly("kind", [](const FiniteMeasureMDP& d) { return std::string(to_string(d.meta.kind)); })
        .def_property_readonly("population", [](const FiniteMeasureMDP& d) { return d.meta.population; })
        .def_property_readonly("states",
                               [](const FiniteMeasureMDP& d) {
                                   std::vector<std::vector<int>> out;
                                   for (const auto& s : d.states) out.push_back(s.counts);
                                   return out;
                               })
        .def_property_readonly("costs", [](const FiniteMeasureMDP& d) { return d.cost; })
        .def(
            "kernel_row",
            [](const FiniteMeasureMDP& d, std::size_t s, std::size_t a) {
                const KernelRow& row = d.kernel.at(s).at(a);
                return py::make_tuple(std::vector<std::uint32_t>(row.next), std::vector<double>(row.prob));
            },
            py::arg("state"), py::arg("action"))
        .def("num_actions", &FiniteMeasureMDP::num_actions, py::arg("state"))
        .def("check_stochastic", &FiniteMeasureMDP::check_stochastic, py::arg("tol") = 1e-9)
        .def("to_text", [](const FiniteMeasureMDP& d) { return mdp_to_string(d); })
        .def_static(
            "from_text",
            [](const std::string& text) {
                std::istringstream is(text);
                return read_mdp(is);
            },
            py::arg("text"));

    m.def(
        "build_finite_population_mdp",
        [](const ModelBundle& b, int N, std::optional<StateGrid> grid, std::optional<std::vector<Vec>> atoms,
           const std::string& scheme, int samples_per_bin, std::uint64_t seed, int mc_samples) {
            WeightScheme ws;
            if (scheme == "sampled-uniform") ws = WeightScheme::sampled_uniform(samples_per_bin);
            else if (scheme != "dirac") throw Error(ErrorKind::InvalidArgument, "scheme must be 'dirac' or 'sampled-uniform'");
            return build_finite_population_mdp(b.model, grid_or_default(b, grid), atoms_or_default(b, atoms), N, ws,
                                               mc(seed, mc_samples));
        },
        py::arg("model"), py::arg("N"), py::arg("grid") = py::none(), py::arg("atoms") = py::none(),
        py::arg("scheme") = "dirac", py::arg("samples_per_bin") = 1, py::arg("seed") = 0,
        py::arg("mc_samples") = 10000);
    m.def(
        "build_aggregation_mdp",
        [](const ModelBundle& b, int n, std::optional<StateGrid> grid, std::optional<std::vector<Vec>> atoms,
           std::uint64_t seed, int mc_samples) {
            return build_aggregation_mdp(b.model, grid_or_default(b, grid), atoms_or_default(b, atoms), n,
                                         mc(seed, mc_samples));
        },
        py::arg("model"), py::arg("n"), py::arg("grid") = py::none(), py::arg("atoms") = py::none(),
        py::arg("seed") = 0, py::arg("mc_samples") = 10000);
    m.def(
        "build_sampling_mdp",
        [](const ModelBundle& b, int n, std::optional<StateGrid> grid, std::optional<std::vector<Vec>> atoms,
           std::uint64_t seed, int mc_samples) {
            return build_sampling_mdp(b.model, grid_or_default(b, grid), atoms_or_default(b, atoms), n,
                                      mc(seed, mc_samples));
        },
        py::arg("model"), py::arg("n"), py::arg("grid") = py::none(), py::arg("atoms") = py::none(),
        py::arg("seed") = 0, py::arg("mc_samples") = 10000);

    py::class_<SolveResult>(m, "SolveResult")
        .def_property_readonly("values", [](const SolveResult& r) { return to_array(r.value.values); })
        .def_property_readonly("policy", [](const SolveResult& r) { return r.policy.choice; })
        .def_readonly("iterations", &SolveResult::iterations)
        .def_readonly("converged", &SolveResult::converged)
        .def_readonly("gaps", &SolveResult::gaps)
        .def_property_readonly("max_gap_ratio", [](const SolveResult& r) { return max_gap_ratio(r.gaps); });

    m.def(
        "value_iteration",
        [](const FiniteMeasureMDP& d, double tol, int max_iter) { return value_iteration(d, {tol, max_iter}); },
        py::arg("mdp"), py::arg("tol") = 1e-8, py::arg("max_iter") = 100000);
    m.def(
        "policy_evaluation",
        [](const FiniteMeasureMDP& d, std::vector<std::size_t> choice, double tol) {
            return to_array(policy_evaluation(d, MeasurePolicy{std::move(choice)}, tol).values);
        },
        py::arg("mdp"), py::arg("policy"), py::arg("tol") = 1e-8);

    py::class_<AgentPolicy>(m, "AgentPolicy")
        .def_readonly("population", &AgentPolicy::population)
        .def_readonly("num_cells", &AgentPolicy::num_cells)
        .def_readonly("num_actions", &AgentPolicy::num_actions)
        .def_property_readonly("num_states", &AgentPolicy::num_states)
        .def(
            "rule",
            [](const AgentPolicy& p, std::size_t state, std::size_t cell) {
                const auto r = p.rule(state, cell);
                return std::vector<double>(r.begin(), r.end());
            },
            py::arg("state"), py::arg("cell"));
    m.def(
        "to_agent_policy",
        [](const FiniteMeasureMDP& d, const SolveResult& r) { return to_agent_policy(d, r.policy); },
        py::arg("mdp"), py::arg("result"));

    py::class_<CostEstimate>(m, "CostEstimate")
        .def_readonly("mean", &CostEstimate::mean)
        .def_readonly("std_error", &CostEstimate::std_error)
        .def_readonly("truncation_bound", &CostEstimate::truncation_bound)
        .def_property_readonly("per_rollout", [](const CostEstimate& e) { return to_array(e.per_rollout); });

    m.def(
        "rollout_team",
        [](const ModelBundle& b, const AgentPolicy& policy, const std::vector<Vec>& init, int horizon, int rollouts,
           std::uint64_t seed, const std::string& feedback, int feedback_n, const std::string& realization,
           bool resample_each_step, std::optional<StateGrid> grid, std::optional<std::vector<Vec>> atoms) {
            RolloutConfig cfg;
            cfg.agents = static_cast<int>(init.size());
            cfg.horizon = horizon;
            cfg.rollouts = rollouts;
            cfg.seed = seed;
            cfg.feedback = feedback_from_string(feedback);
            cfg.feedback_n = feedback_n;
            cfg.realization = realization_from_string(realization);
            cfg.resample_each_step = resample_each_step;
            py::gil_scoped_release release;
            return rollout_team(b.model, grid_or_default(b, grid), atoms_or_default(b, atoms), policy,
                                PointCloudMeasure{init}, cfg);
        },
        py::arg("model"), py::arg("policy"), py::arg("init"), py::arg("horizon"), py::arg("rollouts"),
        py::arg("seed") = 0, py::arg("feedback") = "full", py::arg("feedback_n") = 0,
        py::arg("realization") = "independent", py::arg("resample_each_step") = true, py::arg("grid") = py::none(),
        py::arg("atoms") = py::none());

    m.def(
        "brute_force_oracle",
        [](const ModelBundle& b, int N, std::optional<StateGrid> grid, std::optional<std::vector<Vec>> atoms,
           double tol) {
            const auto o = brute_force_oracle(b.model, grid_or_default(b, grid), atoms_or_default(b, atoms), N,
                                              b.model.beta, tol);
            return py::dict(py::arg("vector_values") = to_array(o.vector_values),
                            py::arg("measure_values") = to_array(o.measure_values),
                            py::arg("max_permutation_spread") = o.max_permutation_spread,
                            py::arg("iterations") = o.iterations);
        },
        py::arg("model"), py::arg("N"), py::arg("grid") = py::none(), py::arg("atoms") = py::none(),
        py::arg("tol") = 1e-8);

    m.def("bound_action", &bound_action, py::arg("K_c"), py::arg("K_f"), py::arg("beta"), py::arg("L_U"));
    m.def("bound_discretization", &bound_discretization, py::arg("K_c"), py::arg("K_f"), py::arg("beta"),
          py::arg("L_X"));
    m.def("bound_regret", &bound_regret, py::arg("K_c"), py::arg("K_f"), py::arg("beta"), py::arg("L_X"));
    m.def("bound_value_lipschitz", &bound_value_lipschitz, py::arg("K_c"), py::arg("K_f"), py::arg("beta"));

    m.def(
        "estimate_m_n",
        [](std::size_t M, int n, double resolution) { return estimate_m_n(M, n, SimplexSearch::grid(resolution)).value; },
        py::arg("M"), py::arg("n"), py::arg("resolution") = 0.01);
    m.def(
        "expected_sampling_error",
        [](const Vec& mu, int n, int samples, std::uint64_t seed) {
            const auto e = expected_sampling_error(mu, n, samples, seed);
            return py::make_tuple(e.mean, e.std_error);
        },
        py::arg("mu"), py::arg("n"), py::arg("samples"), py::arg("seed") = 0);
}
