#pragma once

#include <Eigen/Dense>

#include "mpxeq/economy.hpp"

namespace fixtures {

using mpxeq::GoodLayer;
using mpxeq::MultiplexEconomy;

// Two consumers, two goods, aggregate endowment 2 of each:
// consumer 1 holds (1.44, 0.12), consumer 2 holds (0.56, 1.88).
inline MultiplexEconomy two_consumer(double alpha, double phi_x, double phi_y, const Eigen::MatrixXd& gx,
                                     const Eigen::MatrixXd& gy) {
    MultiplexEconomy e;
    e.consumer_names = {"1", "2"};
    GoodLayer x;
    x.name = "x";
    x.alpha = alpha;
    x.phi = phi_x;
    x.network = gx;
    x.endowments = Eigen::Vector2d(1.44, 0.56);
    GoodLayer y;
    y.name = "y";
    y.alpha = 1.0 - alpha;
    y.phi = phi_y;
    y.network = gy;
    y.endowments = Eigen::Vector2d(0.12, 1.88);
    e.goods = {x, y};
    return e;
}

inline Eigen::MatrixXd empty2() { return Eigen::MatrixXd::Zero(2, 2); }

inline Eigen::MatrixXd dyad_directed() {  // consumer 1 watches consumer 2
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
    g(0, 1) = 1.0;
    return g;
}

inline Eigen::MatrixXd dyad_undirected() {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
    g(0, 1) = g(1, 0) = 1.0;
    return g;
}

// phi = 0 in both layers
inline MultiplexEconomy benchmark() { return two_consumer(0.5, 0.0, 0.0, empty2(), empty2()); }

// one-directional spillover on good y only
inline MultiplexEconomy example_one(double phi, double alpha = 0.5) {
    return two_consumer(alpha, 0.0, phi, empty2(), dyad_directed());
}

// mutual spillovers on good y
inline MultiplexEconomy example_two(double phi, double alpha = 0.5) {
    return two_consumer(alpha, 0.0, phi, empty2(), dyad_undirected());
}

// the same directed dyad in both layers
inline MultiplexEconomy example_three(double phi, double alpha = 0.5) {
    return two_consumer(alpha, phi, phi, dyad_directed(), dyad_directed());
}

inline Eigen::MatrixXd star4() {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
    for (int j = 1; j < 4; ++j) g(0, j) = g(j, 0) = 1.0;
    return g;
}

inline Eigen::MatrixXd star4_complement() {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
    g(1, 2) = g(2, 1) = 1.0;
    g(1, 3) = g(3, 1) = 1.0;
    g(2, 3) = g(3, 2) = 1.0;
    return g;
}

// four consumers, m in {2,3} goods, equal endowments 0.25 and weights 1/m;
// good 1 is a star, good 2 blends the star with its complement, good 3 (when
// present) is private.
inline MultiplexEconomy example_four(int m, double beta, double phi) {
    MultiplexEconomy e;
    e.consumer_names = {"1", "2", "3", "4"};
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(4, 0.25);
    GoodLayer g1{"g1", 1.0 / m, phi, star4(), w};
    GoodLayer g2{"g2", 1.0 / m, phi, (1.0 - beta) * star4() + beta * star4_complement(), w};
    e.goods = {g1, g2};
    if (m == 3) {
        GoodLayer g3{"g3", 1.0 / m, 0.0, Eigen::MatrixXd::Zero(4, 4), w};
        e.goods.push_back(g3);
    }
    return e;
}

// four consumers; good 1 private, good 2 a weighted star (the 1-2 link is
// 1.01), good 3 the line 1-2-3-4; weight sigma on good 2. sigma = 2/3 drops
// good 3 (its weight would be zero).
inline MultiplexEconomy example_five(double sigma) {
    MultiplexEconomy e;
    e.consumer_names = {"1", "2", "3", "4"};
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(4, 0.25);

    Eigen::MatrixXd star = Eigen::MatrixXd::Zero(4, 4);
    star(0, 1) = star(1, 0) = 1.01;
    star(0, 2) = star(2, 0) = 1.0;
    star(0, 3) = star(3, 0) = 1.0;
    Eigen::MatrixXd line = Eigen::MatrixXd::Zero(4, 4);
    line(0, 1) = line(1, 0) = 1.0;
    line(1, 2) = line(2, 1) = 1.0;
    line(2, 3) = line(3, 2) = 1.0;

    GoodLayer g1{"g1", 1.0 / 3.0, 0.0, Eigen::MatrixXd::Zero(4, 4), w};
    GoodLayer g2{"g2", sigma, -0.04, star, w};
    e.goods = {g1, g2};
    const double alpha3 = 2.0 / 3.0 - sigma;
    if (alpha3 > 1e-12) {
        GoodLayer g3{"g3", alpha3, -0.04, line, w};
        e.goods.push_back(g3);
    }
    return e;
}

// the two four-node lines whose centralities align iff (1-phi1)(1-phi2) = 1
inline MultiplexEconomy mixed_sign_lines(double phi1, double phi2) {
    MultiplexEconomy e;
    e.consumer_names = {"1", "2", "3", "4"};
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(4, 0.5);
    Eigen::MatrixXd ga = Eigen::MatrixXd::Zero(4, 4);  // path 2-1-4-3
    ga(1, 0) = ga(0, 1) = 1.0;
    ga(0, 3) = ga(3, 0) = 1.0;
    ga(3, 2) = ga(2, 3) = 1.0;
    Eigen::MatrixXd gb = Eigen::MatrixXd::Zero(4, 4);  // path 1-2-3-4
    gb(0, 1) = gb(1, 0) = 1.0;
    gb(1, 2) = gb(2, 1) = 1.0;
    gb(2, 3) = gb(3, 2) = 1.0;
    GoodLayer g1{"g1", 0.5, phi1, ga, w};
    GoodLayer g2{"g2", 0.5, phi2, gb, w};
    e.goods = {g1, g2};
    return e;
}

} // namespace fixtures
