#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mpxeq/oracle.hpp"
#include "mpxeq/welfare.hpp"

using namespace mpxeq;

namespace {

// planner stationarity: theta_i du_i/dx^s_i must be proportional to tilde_b^s
double planner_kkt_residual(const MultiplexEconomy& e, const ParetoSolution& sol) {
    double worst = 0.0;
    const auto infls = layer_influences(e);
    for (int s = 0; s < e.good_count(); ++s) {
        Eigen::VectorXd v(e.consumer_count());
        for (int i = 0; i < e.consumer_count(); ++i)
            v(i) = sol.weights(i) * e.goods[s].alpha / sol.effective(s, i);
        const Eigen::VectorXd expected = sol.multipliers(s) * infls[s].tilde_b;
        worst = std::max(worst, (v - expected).cwiseAbs().maxCoeff() / expected.cwiseAbs().maxCoeff());
    }
    return worst;
}

} // namespace

TEST_CASE("planner formula clears markets and satisfies the stationarity system") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const MultiplexEconomy e = random_economy(rng);
        Eigen::VectorXd theta(e.consumer_count());
        for (int i = 0; i < e.consumer_count(); ++i) theta(i) = 0.1 + unit(rng);
        ParetoSolution sol;
        try {
            sol = pareto_allocation(e, theta);
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::non_interior_pareto);
            continue;
        }
        for (int s = 0; s < e.good_count(); ++s)
            CHECK(sol.allocation.row(s).sum() ==
                  doctest::Approx(e.goods[s].aggregate_endowment()).epsilon(1e-12));
        CHECK(planner_kkt_residual(e, sol) < 1e-9);
    }
}

TEST_CASE("no-spillover planner at the share-average weights recovers the equilibrium") {
    const auto e = fixtures::benchmark();
    const EquilibriumSolution eq = solve_equilibrium(e);
    const Eigen::VectorXd theta = eq.mu / eq.mu.sum();
    const ParetoSolution sol = pareto_allocation(e, theta);
    CHECK((sol.allocation - eq.allocation).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dyad planner points trace the contract curve") {
    const double phi = 0.7;
    const auto e = fixtures::example_one(phi);
    for (double t : {0.75, 0.8, 0.9}) {  // interior branch needs theta > phi
        const ParetoSolution sol = pareto_allocation(e, Eigen::Vector2d(t, 1.0 - t));
        const double x1 = sol.allocation(0, 0);
        const double y1 = sol.allocation(1, 0);
        CHECK(y1 == doctest::Approx(contract_curve_y(TextbookExample::I, phi, x1)).epsilon(1e-10));
    }
}

TEST_CASE("same-network dyad planner points lie on the diagonal") {
    const auto e = fixtures::example_three(0.4);
    // the interior branch needs theta_1 above phi; below it the formula
    // correctly reports that it left its validity range
    for (double t : {0.45, 0.6, 0.8}) {
        const ParetoSolution sol = pareto_allocation(e, Eigen::Vector2d(t, 1.0 - t));
        CHECK(sol.allocation(0, 0) == doctest::Approx(sol.allocation(1, 0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(pareto_allocation(e, Eigen::Vector2d(0.3, 0.7)), Error);
}

TEST_CASE("efficiency verdict: parallel economies reproduce the equilibrium allocation") {
    for (const auto& e : {fixtures::example_two(0.7), fixtures::example_three(0.4),
                          fixtures::mixed_sign_lines(0.2, -0.25)}) {
        const EfficiencyVerdict v = efficiency_verdict(e);
        REQUIRE(v.verdict.parallel);
        REQUIRE(v.theta_star.has_value());
        const EquilibriumSolution eq = solve_equilibrium(e);
        const ParetoSolution sol = pareto_allocation(e, *v.theta_star);
        CHECK((sol.allocation - eq.allocation).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("efficiency verdict: the one-directional dyad is inefficient") {
    const EfficiencyVerdict v = efficiency_verdict(fixtures::example_one(0.7));
    CHECK_FALSE(v.verdict.parallel);
    CHECK_FALSE(v.theta_star.has_value());
}

TEST_CASE("efficiency loss: zero at the common layer weights, explicit two-layer value") {
    const auto parallel = fixtures::example_two(0.7);
    const auto rho = layer_weight_distributions(parallel);
    CHECK(efficiency_loss(parallel, rho[0]) == doctest::Approx(0.0).epsilon(1e-14));

    const auto skew = fixtures::example_one(0.7);
    const auto rho_skew = layer_weight_distributions(skew);
    const double expected = skew.goods[1].alpha * kl_divergence(rho_skew[0], rho_skew[1]);
    CHECK(efficiency_loss(skew, rho_skew[0]) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(efficiency_loss(skew, rho_skew[0]) > 0.0);
}

TEST_CASE("efficiency loss matches the numeric planner gap") {
    const auto e = fixtures::example_one(0.4);
    const EquilibriumSolution eq = solve_equilibrium(e);
    const Eigen::VectorXd theta = Eigen::Vector2d(0.55, 0.45);
    const PlannerResult planner = numeric_planner(e, theta);
    const double direct = planner.value - theta.dot(eq.utilities);
    CHECK(efficiency_loss(e, theta) == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("loss is convex along random chords") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto e = fixtures::example_five(0.5);
    const int n = e.consumer_count();
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a(i) = 0.05 + unit(rng);
            b(i) = 0.05 + unit(rng);
        }
        a /= a.sum();
        b /= b.sum();
        const double lambda = unit(rng);
        const Eigen::VectorXd mid = lambda * a + (1.0 - lambda) * b;
        CHECK(efficiency_loss(e, mid) <=
              lambda * efficiency_loss(e, a) + (1.0 - lambda) * efficiency_loss(e, b) + 1e-12);
    }
}

TEST_CASE("resource utilization: parallel economies score exactly one") {
    for (const auto& e : {fixtures::example_two(0.7), fixtures::example_three(0.4)}) {
        const ResourceUtilization r = resource_utilization(e);
        CHECK(r.cru == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.log_lower == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.log_upper == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.construction_feasible);
    }
}

TEST_CASE("resource utilization matches the generic simplex minimizer") {
    for (const auto& e : {fixtures::example_one(0.4), fixtures::example_four(3, 0.6, 0.2),
                          fixtures::example_five(0.5)}) {
        const ResourceUtilization r = resource_utilization(e);
        const auto rho = layer_weight_distributions(e);
        const int n = e.consumer_count();
        const auto objective = [&](const Eigen::VectorXd& t) {
            double v = 0.0;
            for (int s = 0; s < e.good_count(); ++s)
                for (int i = 0; i < n; ++i)
                    if (t(i) > 0.0) v += e.goods[s].alpha * t(i) * std::log(t(i) / rho[(size_t)s](i));
            return v;
        };
        const auto gradient = [&](const Eigen::VectorXd& t) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < n; ++i)
                for (int s = 0; s < e.good_count(); ++s)
                    g(i) += e.goods[s].alpha * (std::log(std::max(t(i), 1e-300) / rho[(size_t)s](i)) + 1.0);
            return g;
        };
        const SimplexMinResult min = minimize_on_simplex(n, objective, gradient);
        CHECK(std::log(r.cru) == doctest::Approx(-min.value).epsilon(1e-9));
        CHECK((r.theta_hat - min.point).cwiseAbs().maxCoeff() < 1e-5);
        CHECK(std::log(r.cru) >= r.log_lower - 1e-12);
        CHECK(std::log(r.cru) <= r.log_upper + 1e-12);
    }
}

TEST_CASE("cru bounds hold under small perturbations of a common rho") {
    // two-layer economies whose layer distributions differ by epsilon in one slot
    const auto base = fixtures::example_two(0.3);
    for (double eps : {1e-3, 1e-2, 1e-1}) {
        MultiplexEconomy e = base;
        e.goods[1].network(0, 1) = 1.0 + eps;  // asymmetry of size eps
        const ResourceUtilization r = resource_utilization(e);
        CHECK(std::log(r.cru) >= r.log_lower - 1e-12);
        CHECK(std::log(r.cru) <= r.log_upper + 1e-12);
        CHECK(r.cru <= 1.0 + 1e-12);
    }
}

TEST_CASE("no-improvement weights") {
    // single consumer
    MultiplexEconomy solo;
    solo.consumer_names = {"1"};
    solo.goods = {GoodLayer{"a", 1.0, 0.0, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 1.0)}};
    CHECK(no_improvement_weight(solo)(0) == doctest::Approx(1.0));

    // parallel economy: varpi is the supporting weight
    const auto e = fixtures::example_two(0.7);
    const EfficiencyVerdict v = efficiency_verdict(e);
    REQUIRE(v.theta_star.has_value());
    const Eigen::VectorXd varpi = no_improvement_weight(e);
    CHECK(cosine_dissimilarity(varpi, *v.theta_star) < 1e-12);
    CHECK(varpi.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((varpi.array() > 0.0).all());
}

TEST_CASE("improvement construction strictly dominates on the one-directional dyad") {
    const auto e = fixtures::example_one(0.7);
    const ImprovementResult imp = construct_improvement(e);
    CHECK(imp.min_gain > 0.0);
    CHECK((imp.utility_gains.array() > 0.0).all());
    const EquilibriumSolution eq = solve_equilibrium(e);
    for (int s = 0; s < e.good_count(); ++s)
        CHECK(imp.allocation.row(s).sum() ==
              doctest::Approx(e.goods[s].aggregate_endowment()).epsilon(1e-10));
    CHECK(imp.allocation.minCoeff() >= 0.0);
    CHECK(imp.lp_slack > 0.0);
    (void)eq;
}

TEST_CASE("improvement construction refuses parallel economies") {
    CHECK_THROWS_AS(construct_improvement(fixtures::example_two(0.7)), Error);
    try {
        construct_improvement(fixtures::example_three(0.4));
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::parallel_no_improvement);
    }
}

TEST_CASE("improvement construction succeeds on random non-parallel economies") {
    std::mt19937_64 rng(31);
    int built = 0;
    for (int trial = 0; built < 50 && trial < 400; ++trial) {
        const MultiplexEconomy e = random_economy(rng);
        if (e.good_count() < 2) continue;
        EquilibriumSolution eq;
        try {
            eq = solve_equilibrium(e);
        } catch (const Error&) {
            continue;
        }
        if (check_parallel(e).parallel) continue;
        const ImprovementResult imp = construct_improvement(e);
        CHECK(imp.min_gain > 0.0);
        CHECK(imp.allocation.minCoeff() >= 0.0);
        ++built;
    }
    CHECK(built == 50);
}

TEST_CASE("welfare report bundles the pieces consistently") {
    const WelfareReport report = welfare_report(fixtures::example_one(0.7));
    CHECK_FALSE(report.verdict.parallel);
    CHECK(report.improvement_available);
    CHECK_FALSE(report.theta_star.has_value());
    CHECK(report.cru.cru < 1.0);
    CHECK(report.varpi.sum() == doctest::Approx(1.0));
    CHECK(report.rho.size() == 2);
}
