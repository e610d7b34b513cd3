#include "mfc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "mfc/error.hpp"
#include "mfc/parallel.hpp"

namespace mfc {

namespace {

// Sweeps run in quad precision where the compiler has it, so rounding stays
// far below the sweep gaps and the measured contraction ratio is meaningful.
#if defined(__SIZEOF_FLOAT128__)
using Wide = __float128;
#else
using Wide = long double;
#endif

template <class T>
T q_value(const FiniteMeasureMDP& mdp, std::size_t s, std::size_t a, const std::vector<T>& v) {
    const KernelRow& row = mdp.kernel[s][a];
    T ev = 0;
    for (std::size_t e = 0; e < row.size(); ++e) ev += static_cast<T>(row.prob[e]) * v[row.next[e]];
    return static_cast<T>(mdp.cost[s][a]) + static_cast<T>(mdp.beta) * ev;
}

template <class T>
double sup_gap(const std::vector<T>& a, const std::vector<T>& b) {
    T g = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const T d = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
        if (d > g) g = d;
    }
    return static_cast<double>(g);
}

std::vector<double> narrow(const std::vector<Wide>& v) { return {v.begin(), v.end()}; }

}  // namespace

SolveResult value_iteration(const FiniteMeasureMDP& mdp, const SolveOptions& options) {
    if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
    mdp.check_stochastic(1e-9);
    const std::size_t S = mdp.num_states();
    const double threshold = options.tol * (1.0 - mdp.beta) / mdp.beta;

    SolveResult result;
    std::vector<Wide> v(S, 0), next(S, 0);
    for (int it = 0; it < options.max_iter; ++it) {
        parallel_for(S, [&](std::size_t s) {
            Wide best = 0;
            for (std::size_t a = 0; a < mdp.num_actions(s); ++a) {
                const Wide q = q_value(mdp, s, a, v);
                if (a == 0 || q < best) best = q;
            }
            next[s] = best;
        });
        const double gap = sup_gap(next, v);
        result.gaps.push_back(gap);
        v.swap(next);
        result.iterations = it + 1;
        if (gap <= threshold) {
            result.converged = true;
            break;
        }
    }
    if (!result.converged)
        std::cerr << "warning: value iteration stopped at max_iter=" << options.max_iter
                  << " with gap " << result.gaps.back() << '\n';
    // greedy with respect to the returned iterate
    result.policy.choice.assign(S, 0);
    parallel_for(S, [&](std::size_t s) {
        Wide best = 0;
        for (std::size_t a = 0; a < mdp.num_actions(s); ++a) {
            const Wide q = q_value(mdp, s, a, v);
            if (a == 0 || q < best) {
                best = q;
                result.policy.choice[s] = a;
            }
        }
    });
    result.value.values = narrow(v);
    return result;
}

MeasurePolicy greedy_policy(const FiniteMeasureMDP& mdp, const ValueFunction& values) {
    MeasurePolicy p;
    p.choice.assign(mdp.num_states(), 0);
    parallel_for(mdp.num_states(), [&](std::size_t s) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < mdp.num_actions(s); ++a) {
            const double q = q_value(mdp, s, a, values.values);
            if (q < best) {
                best = q;
                p.choice[s] = a;
            }
        }
    });
    return p;
}

ValueFunction policy_evaluation(const FiniteMeasureMDP& mdp, const MeasurePolicy& policy, double tol,
                                int max_iter) {
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
    mdp.check_stochastic(1e-9);
    const std::size_t S = mdp.num_states();
    if (policy.choice.size() != S) throw Error(ErrorKind::InvalidArgument, "policy size does not match the MDP");
    for (std::size_t s = 0; s < S; ++s)
        if (policy.choice[s] >= mdp.num_actions(s))
            throw Error(ErrorKind::InvalidArgument, "policy action out of range at state " + std::to_string(s));
    const double threshold = tol * (1.0 - mdp.beta) / mdp.beta;
    std::vector<Wide> v(S, 0), next(S, 0);
    for (int it = 0; it < max_iter; ++it) {
        parallel_for(S, [&](std::size_t s) { next[s] = q_value(mdp, s, policy.choice[s], v); });
        const double gap = sup_gap(next, v);
        v.swap(next);
        if (gap <= threshold) break;
    }
    return ValueFunction{narrow(v)};
}

AgentPolicy to_agent_policy(const FiniteMeasureMDP& mdp, const MeasurePolicy& policy) {
    AgentPolicy out;
    out.kind = mdp.meta.kind;
    out.population = mdp.meta.population;
    out.num_cells = mdp.meta.num_cells;
    out.num_actions = mdp.meta.num_actions;
    const std::size_t block = out.num_cells * out.num_actions;
    out.probs.assign(mdp.num_states() * block, 0.0);
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        const ConditionalKernel g = action_kernel(mdp.actions[s].at(policy.choice.at(s)));
        std::copy(g.probs.begin(), g.probs.end(), out.probs.begin() + s * block);
    }
    return out;
}

double max_gap_ratio(const std::vector<double>& gaps) {
    double worst = 0.0;
    for (std::size_t k = 1; k < gaps.size(); ++k)
        if (gaps[k - 1] > 0.0) worst = std::max(worst, gaps[k] / gaps[k - 1]);
    return worst;
}

}  // namespace mfc
