#pragma once

#include "mpxeq/equilibrium.hpp"

namespace mpxeq {

// Marginal change of the economy's primitives along a direction. Exactly one
// payload is read, selected by `kind`.
struct Perturbation {
    enum class Kind { endowment, preference, network, phi };
    Kind kind = Kind::endowment;

    std::vector<Eigen::VectorXd> tau;    // endowment: per-good n-vectors
    Eigen::VectorXd preference_tau;      // preference: s̄-vector with 1'tau = 0
    std::vector<Eigen::MatrixXd> gamma;  // network: per-good n x n, zero diagonal
    Eigen::VectorXd dphi;                // phi: per-good scalars

    static Perturbation endowment(std::vector<Eigen::VectorXd> tau);
    static Perturbation preference(Eigen::VectorXd tau);
    static Perturbation network(std::vector<Eigen::MatrixXd> gamma);
    static Perturbation phi(Eigen::VectorXd dphi);
};

struct PerturbationResult {
    Eigen::VectorXd mu0;                          // reference H^-1 w^1 solution
    Eigen::VectorXd mu_dot;                       // H^-1 particular solution
    Eigen::VectorXd price_log_derivative;         // d/dl ln(p^s / p^1), per good
    Eigen::VectorXd utility_derivative;           // per consumer
    Eigen::MatrixXd consumption_log_derivative;   // s̄ x n

    // Decomposition (endowment kind; empty otherwise).
    Eigen::VectorXd price_redistribution;  // b^s(mu_dot)/b^s(mu0) - same for good 1
    Eigen::VectorXd price_aggregate;       // -1'tau^s/wbar^s + 1'tau^1/wbar^1
    Eigen::VectorXd welfare_income;        // mu_dot_i / mu0_i
    double welfare_price = 0.0;            // common across consumers
    double welfare_aggregate = 0.0;
    bool pure_redistribution = false;
};

PerturbationResult perturb(const MultiplexEconomy& economy, const Perturbation& perturbation);

struct TransferSign {
    int sign = 0;        // sign of c^s_to - c^s_from; 0 when below the neutral threshold
    double margin = 0.0; // |c^s_to - c^s_from|
    double c_from = 0.0;
    double c_to = 0.0;
};

// Direction of the relative-price change of `watch_good` caused by a marginal
// endowment transfer from `from` to `to` on `on_good`, read off the
// generalized influence centrality ordering.
TransferSign transfer_price_sign(const MultiplexEconomy& economy, int from, int to, int on_good, int watch_good);

} // namespace mpxeq
