#pragma once

#include "mpxeq/welfare.hpp"

namespace mpxeq {

struct LindahlSolution {
    Eigen::VectorXd goods_prices;               // s̄, alpha^s / wbar^s
    Eigen::MatrixXd own_prices;                 // s̄ x n, p^s_ii = tilde_b^s_i * p^s
    std::vector<Eigen::MatrixXd> cross_prices;  // per good: n x n, p^s_ij = phi^s g^s_ij p^s_ii
    Eigen::MatrixXd allocation;                 // s̄ x n
    Eigen::MatrixXd effective;
    Eigen::VectorXd gamma;                      // normalized budget weights = sum_s alpha^s eta^s
    Eigen::VectorXd utilities;
};

// Interior personalized-price equilibrium. Throws non_interior_lindahl when
// the closed form leaves the nonnegative orthant (spillovers too large).
LindahlSolution solve_lindahl(const MultiplexEconomy& economy);

struct LindahlComparison {
    LindahlSolution lindahl;
    Eigen::VectorXd competitive_utilities;
    Eigen::VectorXd delta_u;        // u^L - u^*
    bool efficient = false;         // allocation matches the planner solution at gamma
    double planner_gap = 0.0;       // max-abs deviation from pareto_allocation(gamma)
    bool pareto_improvement = false;
    std::vector<int> worse_off;     // consumers with delta_u < 0
};

LindahlComparison compare_lindahl(const MultiplexEconomy& economy);

} // namespace mpxeq
