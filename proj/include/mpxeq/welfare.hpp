#pragma once

#include <optional>

#include "mpxeq/equilibrium.hpp"

namespace mpxeq {

struct ParetoSolution {
    Eigen::VectorXd weights;     // theta, normalized onto the simplex
    Eigen::MatrixXd allocation;  // s̄ x n
    Eigen::MatrixXd effective;   // s̄ x n
    Eigen::VectorXd multipliers; // beta^s = alpha^s * 1'theta / wbar^s
    Eigen::VectorXd utilities;
};

// Planner solution for interior weights: x^s = wbar^s M^s {theta/(1'theta) ./ tilde_b^s}.
ParetoSolution pareto_allocation(const MultiplexEconomy& economy, const Eigen::VectorXd& theta);

// Layer weight distributions rho^s = (mu .* tilde_b^s) / (mu' tilde_b^s).
// They summarize the equilibrium for every welfare measure below.
std::vector<Eigen::VectorXd> layer_weight_distributions(const MultiplexEconomy& economy);
std::vector<Eigen::VectorXd> layer_weight_distributions(const MultiplexEconomy& economy,
                                                        const EffectiveEndowment& eff);

struct EfficiencyVerdict {
    ParallelVerdict verdict;
    std::optional<Eigen::VectorXd> theta_star;  // supporting weight when parallel
};

EfficiencyVerdict efficiency_verdict(const MultiplexEconomy& economy);

// Weighted-utility gap to the Pareto frontier at weights theta:
// sum_s alpha^s KL(theta || rho^s). Nonnegative; zero iff theta matches every rho^s.
double efficiency_loss(const MultiplexEconomy& economy, const Eigen::VectorXd& theta);

struct ResourceUtilization {
    double cru = 1.0;                 // sum_i prod_s (rho^s_i)^{alpha^s}
    Eigen::VectorXd theta_hat;        // minimizer of the weighted KL sum
    double log_lower = 0.0;           // -max_{s,t} KL(rho^s || rho^t)
    double log_upper = 0.0;           // -1/2 sum alpha^s alpha^t Hellinger^2
    bool construction_feasible = true;  // witness allocation x = M q stayed nonnegative
};

ResourceUtilization resource_utilization(const MultiplexEconomy& economy);

// Strictly positive weights under which every pure redistribution has zero
// first-order welfare effect: varpi = sum_s alpha^s rho^s.
Eigen::VectorXd no_improvement_weight(const MultiplexEconomy& economy);

struct ImprovementResult {
    Eigen::MatrixXd allocation;  // strictly dominating reallocation
    double step = 0.0;           // line-search step along (tau_s, tau_t)
    int good_s = 0;
    int good_t = 0;
    Eigen::VectorXd tau_s;       // physical reallocation directions
    Eigen::VectorXd tau_t;
    Eigen::VectorXd utility_gains;
    double min_gain = 0.0;
    double lp_slack = 0.0;
};

// When the parallel condition fails, builds an attainable allocation that
// strictly Pareto dominates the competitive one: an LP finds effective-space
// directions with positive minimum slack, then a halving line search picks
// the step.
ImprovementResult construct_improvement(const MultiplexEconomy& economy);

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);
double hellinger_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

struct WelfareReport {
    ParallelVerdict verdict;
    std::vector<Eigen::VectorXd> rho;
    std::optional<Eigen::VectorXd> theta_star;
    ResourceUtilization cru;
    Eigen::VectorXd varpi;
    bool improvement_available = false;
};

WelfareReport welfare_report(const MultiplexEconomy& economy);

} // namespace mpxeq
