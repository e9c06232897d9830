#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpxeq/errors.hpp"

namespace mpxeq {

// One good of the exchange economy: preference weight, spillover parameter,
// the layer's adjacency matrix and the consumers' endowments of this good.
struct GoodLayer {
    std::string name;
    double alpha = 0.0;
    double phi = 0.0;
    Eigen::MatrixXd network;     // n x n, nonnegative, zero diagonal
    Eigen::VectorXd endowments;  // n, strictly positive

    double aggregate_endowment() const { return endowments.sum(); }
    Eigen::VectorXd endowment_shares() const { return endowments / endowments.sum(); }
    double max_link_weight() const {
        return network.size() == 0 ? 0.0 : network.maxCoeff();
    }
};

struct MultiplexEconomy {
    std::vector<std::string> consumer_names;
    std::vector<GoodLayer> goods;

    int consumer_count() const { return static_cast<int>(consumer_names.size()); }
    int good_count() const { return static_cast<int>(goods.size()); }

    // min over consumers and goods of the endowment share
    double min_share() const;
    // max link weight over all layers
    double max_link_weight() const;
    // s̄ x n matrix of endowments, one row per good
    Eigen::MatrixXd endowment_matrix() const;
    int good_index(std::string_view name) const;  // -1 if absent
};

// Structural invariants: sum(alpha)=1 (abs tol 1e-12), endowments > 1e-12,
// nonnegative networks with zero diagonal, consistent dimensions.
// Throws Error(validation_error) with the offending field path.
void validate_structure(const MultiplexEconomy& economy);

struct AssumptionReport {
    struct PerGood {
        bool spillover_floor = true;   // phi^s above the existence floor
        bool spillover_small = true;   // |phi^s| below the interiority bound
        double floor_margin = 0.0;     // phi^s minus the floor (+inf when vacuous)
        double small_margin = 0.0;     // bound minus |phi^s| (+inf when vacuous)
    };
    std::vector<PerGood> goods;
    bool all_floor = true;
    bool all_small = true;
    double worst_margin = 0.0;                 // min over finite margins
    std::optional<bool> rank_condition;        // filled by the equilibrium module
};

// Report-only evaluation of the two spillover bounds. Empty layers and n=1
// make the bounds vacuous (+inf margin, flag true).
AssumptionReport validate_economy(const MultiplexEconomy& economy);

enum class ComparisonMode { linear, average };

struct ComparisonBuildResult {
    MultiplexEconomy economy;
    std::vector<int> isolated_consumers;  // rows zeroed because no neighbors
};

// Maps the one-private-good / one-comparison-good model into the general
// two-layer form: good 2 gets phi = -intensity and
// g_ij = S(n_i) / (n_i (1 + intensity * S(n_i))) on links, with S(n_i) = n_i
// in linear mode and S(n_i) = 1 in average mode.
ComparisonBuildResult build_comparison_economy(const std::vector<std::vector<int>>& neighbors,
                                               double intensity,
                                               ComparisonMode mode,
                                               GoodLayer private_good,
                                               const Eigen::VectorXd& comparison_endowments);

} // namespace mpxeq
