#include <doctest.h>

#include "fixtures.hpp"
#include "mpxeq/jsonio.hpp"

using namespace mpxeq;

namespace {

const char* kBenchmarkFile = R"({ "consumers": ["1","2"],
  "goods": [ { "name": "x", "alpha": 0.5, "phi": 0.0,
               "network": [[0,0],[0,0]],
               "endowments": [1.44, 0.56] },
             { "name": "y", "alpha": 0.5, "phi": 0.0,
               "network": [[0,0],[0,0]],
               "endowments": [0.12, 1.88] } ] })";

} // namespace

TEST_CASE("parse_economy reads the benchmark file") {
    const MultiplexEconomy e = parse_economy(kBenchmarkFile);
    CHECK(e.consumer_count() == 2);
    CHECK(e.good_count() == 2);
    CHECK(e.goods[0].endowments(0) == doctest::Approx(1.44));
    CHECK(e.goods[1].endowments(1) == doctest::Approx(1.88));
    CHECK(e.goods[1].phi == 0.0);
}

TEST_CASE("parse rejects bad documents") {
    CHECK_THROWS_AS(parse_economy("{"), Error);
    CHECK_THROWS_AS(parse_economy(R"({"consumers":["1"],"goods":[],"extra":1})"), Error);

    // alpha normalization violated
    std::string bad = kBenchmarkFile;
    const auto pos = bad.find("0.5");
    bad.replace(pos, 3, "0.6");
    try {
        parse_economy(bad.replace(bad.find("0.5"), 3, "0.6"));
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::validation_error);
        CHECK(e.location() == "goods[*].alpha");
    }
}

TEST_CASE("self-loops are rejected with the cell path") {
    std::string bad = kBenchmarkFile;
    bad.replace(bad.find("[[0,0],[0,0]]"), 13, "[[0.2,0],[0,0]]");
    try {
        parse_economy(bad);
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::validation_error);
        CHECK(e.location() == "goods[0].network[0][0]");
    }
}

TEST_CASE("parse then serialize round-trips bit-identically") {
    const MultiplexEconomy e = parse_economy(kBenchmarkFile);
    const std::string once = serialize_economy(e);
    const std::string twice = serialize_economy(parse_economy(once));
    CHECK(once == twice);
    CHECK(economy_hash(e) == economy_hash(parse_economy(once)));
}

TEST_CASE("round-trip preserves awkward doubles exactly") {
    MultiplexEconomy e = fixtures::example_one(0.7);
    e.goods[0].endowments(0) = 1.0 / 3.0;
    e.goods[0].endowments(1) = 0.1 + 0.2;  // 0.30000000000000004
    e.goods[1].phi = 1e-13;
    const MultiplexEconomy back = parse_economy(serialize_economy(e));
    CHECK(back.goods[0].endowments(0) == e.goods[0].endowments(0));
    CHECK(back.goods[0].endowments(1) == e.goods[0].endowments(1));
    CHECK(back.goods[1].phi == e.goods[1].phi);
}

TEST_CASE("spillover bounds: benchmark is vacuous") {
    const AssumptionReport r = validate_economy(fixtures::benchmark());
    CHECK(r.all_floor);
    CHECK(r.all_small);
    CHECK(std::isinf(r.goods[0].small_margin));
    CHECK(std::isinf(r.goods[1].floor_margin));
}

TEST_CASE("spillover bounds on the one-directional dyad with phi=0.7") {
    // min share 0.06, max weight 1, n=2: the smallness bound is 0.02
    const AssumptionReport r = validate_economy(fixtures::example_one(0.7));
    CHECK_FALSE(r.goods[1].spillover_small);
    CHECK(r.goods[1].small_margin == doctest::Approx(0.06 / 3.0 - 0.7));
    CHECK(r.goods[1].spillover_floor);  // positive phi always clears the floor
    CHECK_FALSE(r.all_small);
}

TEST_CASE("spillover bounds on the weighted-star economy") {
    const AssumptionReport r = validate_economy(fixtures::example_five(0.5));
    // min share 0.25, max weight 1.01, n=4: bound = 0.25 / 5.05 > 0.04
    CHECK(r.all_small);
    CHECK(r.goods[1].small_margin == doctest::Approx(0.25 / 5.05 - 0.04));
}

TEST_CASE("smallness flags are monotone in |phi|") {
    for (double phi : {0.5, 0.1, 0.019, 0.005}) {
        const AssumptionReport strong = validate_economy(fixtures::example_one(phi));
        const AssumptionReport weak = validate_economy(fixtures::example_one(phi / 2.0));
        if (strong.goods[1].spillover_small) CHECK(weak.goods[1].spillover_small);
    }
}

TEST_CASE("comparison builder: star neighbor sets, linear mode") {
    // leaves compare with the center only; n_i = 1 so the row weight is
    // 1/(1*(1 + 0.1*1)) = 0.909090...
    std::vector<std::vector<int>> neighbors = {{}, {0}, {0}, {0}};
    GoodLayer priv;
    priv.name = "private";
    priv.alpha = 0.5;
    priv.phi = 0.0;
    priv.endowments = Eigen::VectorXd::Constant(4, 1.0);
    const Eigen::VectorXd comp_w = Eigen::VectorXd::Constant(4, 1.0);
    const auto built =
        build_comparison_economy(neighbors, 0.1, ComparisonMode::linear, priv, comp_w);
    CHECK(built.isolated_consumers == std::vector<int>{0});
    const auto& g = built.economy.goods[1];
    CHECK(g.phi == doctest::Approx(-0.1));
    CHECK(g.network(1, 0) == doctest::Approx(1.0 / 1.1));
    CHECK(g.network(0, 1) == 0.0);
    CHECK(g.network.diagonal().cwiseAbs().sum() == 0.0);
    CHECK_NOTHROW(validate_structure(built.economy));
}

TEST_CASE("comparison builder: zero intensity reproduces row-stochastic weights") {
    std::vector<std::vector<int>> neighbors = {{1, 2}, {0}, {0, 1}};
    GoodLayer priv;
    priv.name = "private";
    priv.alpha = 0.4;
    priv.phi = 0.0;
    priv.endowments = Eigen::VectorXd::Constant(3, 1.0);
    const auto built = build_comparison_economy(neighbors, 0.0, ComparisonMode::average, priv,
                                                Eigen::VectorXd::Constant(3, 2.0));
    const auto& g = built.economy.goods[1];
    CHECK(g.phi == 0.0);
    CHECK(g.network.row(0).sum() == doctest::Approx(1.0));
    CHECK(g.network(0, 1) == doctest::Approx(0.5));
    CHECK(g.network(2, 0) == doctest::Approx(0.5));
}

TEST_CASE("comparison builder: everyone compares with consumer 1") {
    // n_i = 1 for all i != 0, S(1) = 1 in both modes: g_j1 = 1/(1 + a)
    const double a = 0.3;
    std::vector<std::vector<int>> neighbors = {{}, {0}, {0}, {0}};
    GoodLayer priv;
    priv.name = "private";
    priv.alpha = 0.5;
    priv.phi = 0.0;
    priv.endowments = Eigen::VectorXd::Constant(4, 1.0);
    for (auto mode : {ComparisonMode::linear, ComparisonMode::average}) {
        const auto built =
            build_comparison_economy(neighbors, a, mode, priv, Eigen::VectorXd::Constant(4, 1.0));
        for (int j = 1; j < 4; ++j)
            CHECK(built.economy.goods[1].network(j, 0) == doctest::Approx(1.0 / (1.0 + a)));
        CHECK(built.economy.goods[1].network.row(0).sum() == 0.0);
    }
}
