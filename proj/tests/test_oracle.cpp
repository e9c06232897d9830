#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mpxeq/oracle.hpp"
#include "mpxeq/welfare.hpp"

using namespace mpxeq;

TEST_CASE("tatonnement reproduces the benchmark row") {
    const EquilibriumSolution sol = tatonnement_solve(fixtures::benchmark());
    CHECK(sol.prices(1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.allocation(0, 0) == doctest::Approx(0.78).epsilon(1e-8));
    CHECK(sol.interior);
    CHECK(verify_equilibrium(fixtures::benchmark(), sol).pass);
}

TEST_CASE("tatonnement solves a single-consumer economy immediately") {
    MultiplexEconomy e;
    e.consumer_names = {"1"};
    e.goods = {GoodLayer{"a", 0.4, 0.0, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 2.0)},
               GoodLayer{"b", 0.6, 0.0, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 1.0)}};
    const EquilibriumSolution sol = tatonnement_solve(e);
    CHECK(sol.allocation(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(sol.allocation(1, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tatonnement matches the closed form on the weighted-star economy") {
    const auto e = fixtures::example_five(0.5);
    const EquilibriumSolution closed = solve_equilibrium(e);
    const EquilibriumSolution fixed_point = tatonnement_solve(e);
    CHECK((closed.allocation - fixed_point.allocation).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((closed.prices - fixed_point.prices).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((closed.utilities - fixed_point.utilities).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(verify_equilibrium(e, fixed_point).pass);
}

TEST_CASE("tatonnement agrees with the closed form on random economies") {
    std::mt19937_64 rng(67);
    int done = 0;
    while (done < 25) {
        const MultiplexEconomy e = random_economy(rng);
        EquilibriumSolution closed;
        try {
            closed = solve_equilibrium(e);
        } catch (const Error&) {
            continue;
        }
        const EquilibriumSolution fixed_point = tatonnement_solve(e);
        CHECK((closed.allocation - fixed_point.allocation).cwiseAbs().maxCoeff() < 1e-6);
        Eigen::VectorXd rel_closed = closed.prices / closed.prices(0);
        Eigen::VectorXd rel_fixed = fixed_point.prices / fixed_point.prices(0);
        CHECK((rel_closed - rel_fixed).cwiseAbs().maxCoeff() < 1e-6);
        ++done;
    }
}

TEST_CASE("tatonnement reaches a corner the closed form rejects") {
    // under a strong one-directional spillover and a skewed endowment the
    // dyad equilibrium pushes consumer 1 out of good y
    MultiplexEconomy e = fixtures::example_one(0.95);
    e.goods[1].endowments = Eigen::Vector2d(0.01, 1.99);
    e.goods[0].endowments = Eigen::Vector2d(0.05, 1.95);
    CHECK_THROWS_AS(solve_equilibrium(e), Error);
    const EquilibriumSolution sol = tatonnement_solve(e);
    CHECK_FALSE(sol.interior);
    CHECK(sol.allocation.minCoeff() == 0.0);
    const ResidualReport residuals = verify_equilibrium(e, sol);
    CHECK(residuals.market_clearing < 1e-8);
    CHECK(residuals.budget < 1e-8);
    CHECK(residuals.foc < 1e-6);  // corner cells satisfy the inequality direction
}

TEST_CASE("numeric planner recovers the no-spillover equilibrium at the share-average weights") {
    const auto e = fixtures::benchmark();
    const EquilibriumSolution eq = solve_equilibrium(e);
    const PlannerResult r = numeric_planner(e, eq.mu / eq.mu.sum());
    CHECK((r.allocation - eq.allocation).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("numeric planner recovers the closed-form planner value") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int done = 0;
    while (done < 8) {
        const MultiplexEconomy e = random_economy(rng);
        Eigen::VectorXd theta(e.consumer_count());
        for (int i = 0; i < e.consumer_count(); ++i) theta(i) = 0.2 + unit(rng);
        theta /= theta.sum();
        ParetoSolution closed;
        try {
            closed = pareto_allocation(e, theta);
        } catch (const Error&) {
            continue;
        }
        const PlannerResult ascent = numeric_planner(e, theta);
        const double closed_value = theta.dot(closed.utilities);
        CHECK(ascent.value == doctest::Approx(closed_value).epsilon(1e-6));
        CHECK(ascent.value <= closed_value + 1e-6);  // ascent cannot beat the optimum
        ++done;
    }
}

TEST_CASE("numeric planner lands on the contract curve, including its corner") {
    const double phi = 0.7;
    const auto e = fixtures::example_one(phi);

    // interior branch
    {
        const PlannerResult r = numeric_planner(e, Eigen::Vector2d(0.8, 0.2));
        CHECK(r.allocation(1, 0) ==
              doctest::Approx(contract_curve_y(TextbookExample::I, phi, r.allocation(0, 0))).epsilon(1e-6));
    }
    // theta <= phi: the planner pushes consumer 1 out of good y entirely
    {
        const PlannerResult r = numeric_planner(e, Eigen::Vector2d(0.5, 0.5));
        CHECK(r.allocation(0, 0) == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(r.allocation(1, 0) == doctest::Approx(0.0).epsilon(1e-5));
    }
}

TEST_CASE("simplex projection") {
    const Eigen::VectorXd p = project_to_simplex(Eigen::Vector3d(0.4, 0.9, -0.2), 1.0);
    CHECK(p.sum() == doctest::Approx(1.0));
    CHECK(p.minCoeff() >= 0.0);
    // projecting a point already on the simplex is the identity
    const Eigen::VectorXd q = project_to_simplex(Eigen::Vector3d(0.2, 0.3, 0.5), 1.0);
    CHECK((q - Eigen::Vector3d(0.2, 0.3, 0.5)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("finite differences confirm the weighted-star transfer signs") {
    for (double sigma : {2.0 / 3.0, 0.5, 1.0 / 3.0}) {
        const auto e = fixtures::example_five(sigma);
        std::vector<Eigen::VectorXd> tau(static_cast<size_t>(e.good_count()), Eigen::VectorXd::Zero(4));
        tau[1](2) = -1.0;
        tau[1](1) = 1.0;
        const DerivativeReport report = finite_difference_check(e, Perturbation::endowment(tau));
        CHECK(report.max_rel_error < 1e-4);
        const TransferSign ts = transfer_price_sign(e, 2, 1, 1, 1);
        CHECK((report.price_log_derivative(1) > 0) == (ts.sign > 0));
    }
}

TEST_CASE("curves: dyad formulas, breakpoints and corner segments") {
    const double phi = 0.7;
    CHECK(equilibrium_curve_y(TextbookExample::I, phi, 1.0821) == doctest::Approx(0.6475).epsilon(1e-3));
    CHECK(equilibrium_curve_y(TextbookExample::I, phi, 0.5) == 0.0);  // below 2phi/(1+phi)
    CHECK(contract_curve_y(TextbookExample::I, phi, 2.0 * phi) == doctest::Approx(0.0));
    CHECK(contract_curve_y(TextbookExample::I, phi, 2.0) == doctest::Approx(2.0));
    CHECK(equilibrium_curve_y(TextbookExample::II, phi, 1.9) == 2.0);  // saturated segment
    CHECK(equilibrium_curve_y(TextbookExample::III, 0.3, 0.5) == doctest::Approx(0.5));

    CHECK_THROWS_AS(equilibrium_curve_y(TextbookExample::I, phi, 2.5), Error);
    CHECK_THROWS_AS(equilibrium_curve_y(TextbookExample::I, 1.2, 0.5), Error);

    const std::vector<double> grid = {0.0, 0.5, 1.0, 1.5, 2.0};
    const CurveSample sample = textbook_curves(TextbookExample::II, 0.4, grid);
    CHECK(sample.x.size() == 5);
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(sample.y_equilibrium[i] == sample.y_contract[i]);  // they coincide for this case
        CHECK(sample.y_equilibrium[i] >= 0.0);
        CHECK(sample.y_equilibrium[i] <= 2.0);
    }
}

TEST_CASE("solver points stay on the curves under random endowments and weights") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double phi : {0.1, 0.4, 0.7}) {
        int done = 0;
        while (done < 8) {
            const double alpha = 0.2 + 0.6 * unit(rng);
            MultiplexEconomy e = fixtures::example_one(phi, alpha);
            e.goods[0].endowments = Eigen::Vector2d(0.2 + 1.6 * unit(rng), 0.0);
            e.goods[0].endowments(1) = 2.0 - e.goods[0].endowments(0);
            e.goods[1].endowments = Eigen::Vector2d(0.2 + 1.6 * unit(rng), 0.0);
            e.goods[1].endowments(1) = 2.0 - e.goods[1].endowments(0);
            EquilibriumSolution sol;
            try {
                sol = solve_equilibrium(e);
            } catch (const Error&) {
                continue;
            }
            CHECK(sol.allocation(1, 0) ==
                  doctest::Approx(equilibrium_curve_y(TextbookExample::I, phi, sol.allocation(0, 0)))
                      .epsilon(1e-8));
            ++done;
        }
    }
}

TEST_CASE("random economy generator respects the smallness bound") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 50; ++trial) {
        const MultiplexEconomy e = random_economy(rng);
        const AssumptionReport report = validate_economy(e);
        CHECK(report.all_small);
        CHECK(report.all_floor);
    }
}
