#pragma once

#include "mpxeq/centrality.hpp"
#include "mpxeq/economy.hpp"

namespace mpxeq {

// Mbar = sum_s alpha^s (I - eta^s 1') M^s drives the homogeneous system for
// the effective endowment; H = Mbar + alpha^1 eta^1 1' M^1 pins the scale so
// that the price of good 1 is 1.
struct SystemMatrices {
    Eigen::MatrixXd Mbar;
    Eigen::MatrixXd H;
    std::vector<LayerInfluence> layers;
    int rank_Mbar = 0;
    double cond_H = 0.0;
};

SystemMatrices build_system(const MultiplexEconomy& economy);

struct EffectiveEndowment {
    Eigen::VectorXd mu;   // H^-1 w^1, scale fixed by p^1 = 1
    bool unique = false;  // rank(Mbar) == n-1
    SystemMatrices sys;
};

EffectiveEndowment solve_effective_endowment(const MultiplexEconomy& economy);

// Internal cross-check: the effective endowment direction as the null space
// of Mbar (smallest singular vector). Tests compare it with H^-1 w^1.
Eigen::VectorXd effective_endowment_nullspace(const SystemMatrices& sys);

struct EquilibriumSolution {
    Eigen::VectorXd mu;         // n
    Eigen::VectorXd prices;     // s̄, prices(0) == 1
    Eigen::MatrixXd allocation; // s̄ x n
    Eigen::MatrixXd effective;  // s̄ x n, q^s_i = x^s_i + phi^s sum_j g^s_ij x^s_j
    Eigen::VectorXd utilities;  // n
    Eigen::VectorXd shadow;     // n, 1/mu
    bool interior = true;
    bool unique = false;
};

EquilibriumSolution solve_equilibrium(const MultiplexEconomy& economy);

struct ResidualReport {
    double market_clearing = 0.0;  // max relative row-sum error
    double budget = 0.0;           // max relative budget error
    double foc = 0.0;              // max relative first-order-condition error
    double min_allocation = 0.0;
    bool pass = false;             // all residuals below 1e-8 and allocation >= 0
};

ResidualReport verify_equilibrium(const MultiplexEconomy& economy, const EquilibriumSolution& candidate);

// Effective endowment when all prices are exogenously one and incomes are T:
// (sum_s alpha^s M^s)^-1 T.
Eigen::VectorXd exogenous_price_mu(const MultiplexEconomy& economy, const Eigen::VectorXd& incomes);

// Utilities of an arbitrary allocation (rows = goods); cells with
// non-positive effective consumption evaluate to -inf.
Eigen::VectorXd allocation_utilities(const MultiplexEconomy& economy, const Eigen::MatrixXd& allocation);

} // namespace mpxeq
