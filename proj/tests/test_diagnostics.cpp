#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mfc/diagnostics.hpp"
#include "mfc/error.hpp"
#include "mfc/registry.hpp"
#include "mfc/solver.hpp"

using namespace mfc;

namespace {

// Distance to the nearest n-empirical measure by scanning every count vector
// of {0..n}^M, independent of the P_n enumeration.
double brute_rounding_error(const std::vector<double>& mu, int n) {
    const std::size_t M = mu.size();
    std::vector<int> c(M, 0);
    double best = 1e300;
    while (true) {
        int total = 0;
        for (int v : c) total += v;
        if (total == n) {
            double d = 0.0;
            for (std::size_t j = 0; j < M; ++j) d += std::abs(mu[j] - static_cast<double>(c[j]) / n);
            best = std::min(best, d);
        }
        std::size_t j = 0;
        while (j < M && ++c[j] > n) c[j++] = 0;
        if (j == M) break;
    }
    return best;
}

}  // namespace

TEST_CASE("closed-form bounds at K_c = K_f = 1, beta = 1/4") {
    CHECK(bound_action(1, 1, 0.25, 0.3) == doctest::Approx(8.0 / 3.0 * 0.3).epsilon(1e-15));
    CHECK(bound_discretization(1, 1, 0.25, 0.3) == doctest::Approx(16.0 / 3.0 * 0.3).epsilon(1e-15));
    CHECK(bound_regret(1, 1, 0.25, 0.3) == doctest::Approx(128.0 / 9.0 * 0.3).epsilon(1e-15));
    CHECK(bound_value_lipschitz(1, 1, 0.25) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("bounds reject a non-contracting configuration") {
    for (double beta : {0.5, 0.75}) {
        try {
            bound_discretization(1, 1, beta, 0.1);
            FAIL("expected ContractionViolated");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ContractionViolated);
        }
        CHECK_THROWS_AS(bound_action(1, 1, beta, 0.1), Error);
        CHECK_THROWS_AS(bound_regret(1, 1, beta, 0.1), Error);
        CHECK_THROWS_AS(bound_value_lipschitz(1, 1, beta), Error);
    }
    CHECK_NOTHROW(bound_discretization(1, 0.0, 0.99, 0.1));
}

TEST_CASE("property: regret bound is the discretization bound times 2/(1-beta)") {
    for (double beta : {0.1, 0.3, 0.45})
        for (double L : {0.01, 0.25, 1.0}) {
            const double d = bound_discretization(2.5, 1.0, beta, L);
            CHECK(bound_regret(2.5, 1.0, beta, L) == doctest::Approx(2.0 * d / (1.0 - beta)).epsilon(1e-14));
            CHECK(bound_discretization(2.5, 1.0, beta, 2 * L) == doctest::Approx(2 * d).epsilon(1e-14));
        }
}

TEST_CASE("bound CSV row") {
    BoundReport r{"value_lipschitz", 0.5, 4.0, true, {{"beta", 0.25}, {"K_c", 1.0}}, ""};
    std::ostringstream os;
    write_bound_csv_header(os);
    write_bound_csv(os, r);
    CHECK(os.str() == "name,lhs,rhs,satisfied,inputs\nvalue_lipschitz,0.5,4,true,K_c=1;beta=0.25\n");
}

TEST_CASE("simplex grid search points") {
    const auto pts = simplex_search_points(3, SimplexSearch::grid(0.25));
    CHECK(pts.size() == 15);
    for (const auto& p : pts) {
        double t = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            CHECK(std::abs(v * 4 - std::round(v * 4)) < 1e-12);
            t += v;
        }
        CHECK(t == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(simplex_search_points(3, SimplexSearch::grid(0.3)), Error);
    CHECK_THROWS_AS(simplex_search_points(0, SimplexSearch::grid(0.5)), Error);
}

TEST_CASE("simplex sampled search points") {
    const auto a = simplex_search_points(4, SimplexSearch::sampled(4000, 3));
    const auto b = simplex_search_points(4, SimplexSearch::sampled(4000, 3));
    CHECK(a == b);
    REQUIRE(a.size() == 4000);
    double first = 0.0;
    for (const auto& p : a) {
        double t = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            t += v;
        }
        CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
        first += p[0];
    }
    // flat Dirichlet on 4 atoms: each coordinate has mean 1/4 and sd ~0.19
    CHECK(std::abs(first / 4000 - 0.25) < 0.02);
}

TEST_CASE("m_n examples") {
    const auto m1 = estimate_m_n(2, 1, SimplexSearch::grid(0.5));
    CHECK(m1.value == 1.0);
    CHECK(m1.argmax == std::vector<double>{0.5, 0.5});
    CHECK(m1.points_searched == 3);
    CHECK(estimate_m_n(3, 3, SimplexSearch::grid(1.0 / 3)).value == 0.0);
}

TEST_CASE("property: m_n equals the brute-force max rounding error over the search set") {
    for (std::size_t M : {2, 3, 4})
        for (int n : {1, 2, 3, 5}) {
            const auto search = SimplexSearch::grid(1.0 / 12);
            double want = 0.0;
            for (const auto& p : simplex_search_points(M, search)) want = std::max(want, brute_rounding_error(p, n));
            CHECK(estimate_m_n(M, n, search).value == doctest::Approx(want).epsilon(1e-14));
        }
}

TEST_CASE("expected sampling error matches exact multinomial expectation") {
    const std::vector<double> mu{0.3, 0.7};
    const int n = 5;
    // exact: sum over k of C(5,k) 0.3^k 0.7^(5-k) * 2 |k/5 - 0.3|
    double exact = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double binom = std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0));
        exact += binom * std::pow(0.3, k) * std::pow(0.7, n - k) * 2.0 * std::abs(k / 5.0 - 0.3);
    }
    const auto est = expected_sampling_error(mu, n, 40000, 17);
    CHECK(est.std_error > 0.0);
    CHECK(std::abs(est.mean - exact) <= 4.0 * est.std_error);

    const std::vector<double> dirac{0.0, 1.0, 0.0};
    const auto zero = expected_sampling_error(dirac, 7, 100, 1);
    CHECK(zero.mean == 0.0);
    CHECK(zero.std_error == 0.0);
}

TEST_CASE("M_n search is seeded and reports its argmax") {
    const auto a = estimate_M_n(3, 4, 500, SimplexSearch::sampled(20, 9));
    const auto b = estimate_M_n(3, 4, 500, SimplexSearch::sampled(20, 9));
    CHECK(a.value == b.value);
    CHECK(a.argmax == b.argmax);
    CHECK(a.points_searched == 20);
    CHECK(a.argmax.size() == 3);
    CHECK(a.value > 0.0);
    CHECK(a.argmax_std_error > 0.0);
}

TEST_CASE("value Lipschitz check on solved models") {
    const ModelBundle sw = make_model("switch-2state");
    const auto mdp = build_finite_population_mdp(sw.model, sw.default_grid, sw.default_actions, 4);
    const auto r = value_iteration(mdp);
    auto rep = check_value_lipschitz(mdp, r.value, sw.model.K_c, sw.model.K_f, 200, 1);
    CHECK(rep.satisfied);
    CHECK(rep.lhs <= rep.rhs);
    CHECK(rep.rhs == doctest::Approx(bound_value_lipschitz(1, 1, sw.model.beta)));
    CHECK(rep.witness.empty());

    const auto agg = build_aggregation_mdp(sw.model, sw.default_grid, sw.default_actions, 4);
    const auto ra = value_iteration(agg);
    CHECK(check_value_lipschitz(agg, ra.value, sw.model.K_c, sw.model.K_f, 200, 1).satisfied);

    // a planted jump breaks the bound and is reported
    ValueFunction broken = r.value;
    broken.values[0] += 100.0;
    rep = check_value_lipschitz(mdp, broken, sw.model.K_c, sw.model.K_f, 200, 1);
    CHECK_FALSE(rep.satisfied);
    CHECK(rep.lhs > rep.rhs);
    CHECK(rep.witness.find("states") == 0);

    CHECK_THROWS_AS(check_value_lipschitz(mdp, ValueFunction{{0.0}}, 1, 1, 10, 1), Error);
}
