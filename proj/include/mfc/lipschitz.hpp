#pragma once

#include <cstdint>
#include <string>

#include "mfc/model.hpp"

namespace mfc {

struct ContractionReport {
    double value = 0.0;  // 2 K_f beta
    bool ok = false;     // value < 1
};

ContractionReport validate_contraction(const AgentModel& model);

struct LipschitzEstimate {
    double K_f = 0.0;  // sampled lower bound for the dynamics constant
    double K_c = 0.0;  // sampled lower bound for the cost constant
    bool f_exceeds_declared = false;
    bool c_exceeds_declared = false;
    std::string warning;  // empty when both estimates are within the declared values
};

/// Sampled lower bounds on the Lipschitz constants of the dynamics and the
/// stage cost, using the sum metric |dx| + |du| + W1(mu, mu') with W1 from
/// optimal matching of equal-size clouds. Noise is shared inside each pair.
LipschitzEstimate estimate_lipschitz(const AgentModel& model, int samples, std::uint64_t seed);

}  // namespace mfc
