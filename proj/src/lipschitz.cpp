#include "mfc/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfc/error.hpp"
#include "mfc/measures.hpp"
#include "mfc/rng.hpp"

namespace mfc {

ContractionReport validate_contraction(const AgentModel& model) {
    ContractionReport r;
    r.value = 2.0 * model.K_f * model.beta;
    r.ok = r.value < 1.0;
    return r;
}

namespace {

double norm_diff(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
}

Vec draw_in(Rng& rng, const Box& b) {
    Vec v(b.dim());
    for (std::size_t d = 0; d < b.dim(); ++d) v[d] = b.lower[d] + uniform01(rng) * (b.upper[d] - b.lower[d]);
    return v;
}

// Moves v by up to `scale` of the box width per axis, clipped to the box.
Vec perturb(Rng& rng, const Vec& v, const Box& b, double scale) {
    Vec out = v;
    for (std::size_t d = 0; d < v.size(); ++d) {
        const double width = b.upper[d] - b.lower[d];
        out[d] = std::clamp(v[d] + (2.0 * uniform01(rng) - 1.0) * scale * width, b.lower[d], b.upper[d]);
    }
    return out;
}

}  // namespace

LipschitzEstimate estimate_lipschitz(const AgentModel& model, int samples, std::uint64_t seed) {
    if (samples < 2) throw Error(ErrorKind::InvalidArgument, "estimate_lipschitz needs samples >= 2");
    constexpr int kCloud = 3;
    Rng rng = make_stream(seed, {0x6c697073ULL});
    LipschitzEstimate est;
    for (int s = 0; s < samples; ++s) {
        // alternate between moving one argument and moving all of them
        const int mode = s % 4;
        const double scale = std::pow(10.0, -3.0 * uniform01(rng));
        const Vec x = draw_in(rng, model.state_bounds);
        const Vec u = draw_in(rng, model.action_set);
        std::vector<Vec> cloud;
        for (int i = 0; i < kCloud; ++i) cloud.push_back(draw_in(rng, model.state_bounds));

        Vec x2 = x, u2 = u;
        std::vector<Vec> cloud2 = cloud;
        if (mode == 0 || mode == 3) x2 = perturb(rng, x, model.state_bounds, scale);
        if (mode == 1 || mode == 3) u2 = perturb(rng, u, model.action_set, scale);
        if (mode == 2 || mode == 3)
            for (auto& p : cloud2) p = perturb(rng, p, model.state_bounds, scale);

        const double dist = norm_diff(x, x2) + norm_diff(u, u2) +
                            w1_matching(PointCloudMeasure{cloud}, PointCloudMeasure{cloud2});
        if (!(dist > 0.0)) continue;

        const MeanField mf = MeanField::from_cloud(cloud);
        const MeanField mf2 = MeanField::from_cloud(cloud2);
        const Vec wi = model.idio_noise.sample(rng);
        const Vec w0 = model.common_noise.sample(rng);
        const double df = norm_diff(model.dynamics(x, u, mf, wi, w0), model.dynamics(x2, u2, mf2, wi, w0));
        const double dc = std::abs(model.stage_cost(x, u, mf) - model.stage_cost(x2, u2, mf2));
        est.K_f = std::max(est.K_f, df / dist);
        est.K_c = std::max(est.K_c, dc / dist);
    }
    // allow for rounding in the difference quotients
    constexpr double kSlack = 1e-9;
    est.f_exceeds_declared = est.K_f > model.K_f * (1.0 + kSlack) + kSlack;
    est.c_exceeds_declared = est.K_c > model.K_c * (1.0 + kSlack) + kSlack;
    std::ostringstream w;
    if (est.f_exceeds_declared) w << "sampled dynamics constant " << est.K_f << " exceeds declared K_f " << model.K_f;
    if (est.f_exceeds_declared && est.c_exceeds_declared) w << "; ";
    if (est.c_exceeds_declared) w << "sampled cost constant " << est.K_c << " exceeds declared K_c " << model.K_c;
    est.warning = w.str();
    return est;
}

}  // namespace mfc
