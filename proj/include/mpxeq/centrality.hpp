#pragma once

#include <vector>

#include "mpxeq/economy.hpp"

namespace mpxeq {

// Per-layer influence data: M = (I + phi G)^-1 and the column-sum centrality
// tilde_b = M' 1. tilde_b is the layer's marginal-externality weighting; the
// equilibrium, welfare and Lindahl formulas are all expressed through it.
struct LayerInfluence {
    int good = 0;
    Eigen::MatrixXd M;
    Eigen::VectorXd tilde_b;
    bool spectral_ok = true;  // 1 + min real eigenvalue of phi G is positive
};

LayerInfluence leontief_inverse(const GoodLayer& layer, int good_index = 0);
std::vector<LayerInfluence> layer_influences(const MultiplexEconomy& economy);

struct KatzResult {
    Eigen::VectorXd b;        // M z
    double aggregate = 0.0;   // 1' M z = z' tilde_b
    Eigen::VectorXd tilde_b;
};

KatzResult katz_centralities(const LayerInfluence& influence, const Eigen::VectorXd& z);

struct ParallelVerdict {
    bool parallel = true;
    int worst_s = 0;
    int worst_t = 0;
    double dissimilarity = 0.0;        // max over pairs of 1 - cos(tilde_b^s, tilde_b^t)
    std::vector<bool> regular;          // per layer: G' 1 parallel to 1
    bool identical_layers = true;       // all phi^s G^s coincide entrywise
    double tolerance = 1e-10;
};

// The efficiency test: all layer centralities tilde_b^s must be scalar
// multiples of one another. Either symmetry flag (regular layers, identical
// scaled networks) is sufficient.
ParallelVerdict check_parallel(const MultiplexEconomy& economy);
ParallelVerdict check_parallel(const MultiplexEconomy& economy,
                               const std::vector<LayerInfluence>& influences,
                               double tolerance = 1e-10);

// Generalized influence centrality c^s = (H')^-1 tilde_b^s. The pairwise
// ordering of c^s signs the relative-price effect of bilateral transfers.
Eigen::VectorXd influence_centrality(const MultiplexEconomy& economy, const Eigen::MatrixXd& H, int good);

double cosine_dissimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

} // namespace mpxeq
