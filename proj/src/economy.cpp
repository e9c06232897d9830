#include "mpxeq/economy.hpp"

#include <cmath>
#include <limits>

namespace mpxeq {

namespace {
constexpr double kAlphaTol = 1e-12;
constexpr double kEndowmentFloor = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::validation_error: return "validation_error";
        case ErrorCode::degenerate_network: return "degenerate_network";
        case ErrorCode::singular_layer: return "singular_layer";
        case ErrorCode::singular_h: return "singular_h";
        case ErrorCode::singular_aggregate: return "singular_aggregate";
        case ErrorCode::non_positive_mu: return "non_positive_mu";
        case ErrorCode::non_interior_equilibrium: return "non_interior_equilibrium";
        case ErrorCode::non_interior_pareto: return "non_interior_pareto";
        case ErrorCode::non_interior_lindahl: return "non_interior_lindahl";
        case ErrorCode::parallel_no_improvement: return "parallel_no_improvement";
        case ErrorCode::line_search_failed: return "line_search_failed";
        case ErrorCode::rank_deficient: return "rank_deficient";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::no_convergence: return "no_convergence";
        case ErrorCode::domain_error: return "domain_error";
        case ErrorCode::io_error: return "io_error";
    }
    return "unknown";
}

double MultiplexEconomy::min_share() const {
    double m = kInf;
    for (const auto& g : goods) m = std::min(m, g.endowment_shares().minCoeff());
    return m;
}

double MultiplexEconomy::max_link_weight() const {
    double m = 0.0;
    for (const auto& g : goods) m = std::max(m, g.max_link_weight());
    return m;
}

Eigen::MatrixXd MultiplexEconomy::endowment_matrix() const {
    Eigen::MatrixXd w(good_count(), consumer_count());
    for (int s = 0; s < good_count(); ++s) w.row(s) = goods[s].endowments.transpose();
    return w;
}

int MultiplexEconomy::good_index(std::string_view name) const {
    for (int s = 0; s < good_count(); ++s)
        if (goods[s].name == name) return s;
    return -1;
}

void validate_structure(const MultiplexEconomy& economy) {
    const int n = economy.consumer_count();
    if (n < 1) throw Error(ErrorCode::validation_error, "economy needs at least one consumer", "consumers");
    if (economy.goods.empty())
        throw Error(ErrorCode::validation_error, "economy needs at least one good", "goods");

    double alpha_sum = 0.0;
    for (int s = 0; s < economy.good_count(); ++s) {
        const auto& g = economy.goods[s];
        const std::string base = "goods[" + std::to_string(s) + "]";
        if (!(g.alpha > 0.0) || !(g.alpha < 1.0 + kAlphaTol))
            throw Error(ErrorCode::validation_error, "alpha must lie in (0,1)", base + ".alpha");
        alpha_sum += g.alpha;
        if (!std::isfinite(g.phi))
            throw Error(ErrorCode::validation_error, "phi must be finite", base + ".phi");
        if (g.endowments.size() != n)
            throw Error(ErrorCode::validation_error, "endowment vector length must equal consumer count",
                        base + ".endowments");
        for (int i = 0; i < n; ++i) {
            if (!(g.endowments(i) > kEndowmentFloor))
                throw Error(ErrorCode::validation_error, "endowments must be strictly positive",
                            base + ".endowments[" + std::to_string(i) + "]");
        }
        if (g.network.rows() != n || g.network.cols() != n)
            throw Error(ErrorCode::validation_error, "network must be n x n", base + ".network");
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double v = g.network(i, j);
                if (!std::isfinite(v) || v < 0.0)
                    throw Error(ErrorCode::validation_error, "network weights must be nonnegative",
                                base + ".network[" + std::to_string(i) + "][" + std::to_string(j) + "]");
                if (i == j && v != 0.0)
                    throw Error(ErrorCode::validation_error, "network diagonal must be zero",
                                base + ".network[" + std::to_string(i) + "][" + std::to_string(j) + "]");
            }
        }
    }
    if (std::abs(alpha_sum - 1.0) > kAlphaTol)
        throw Error(ErrorCode::validation_error,
                    "preference weights must sum to 1 (got " + std::to_string(alpha_sum) + ")", "goods[*].alpha");
}

AssumptionReport validate_economy(const MultiplexEconomy& economy) {
    validate_structure(economy);
    AssumptionReport report;
    const int n = economy.consumer_count();
    const double gbar = economy.max_link_weight();
    const double eta_min_all = economy.min_share();

    double worst = kInf;
    for (const auto& g : economy.goods) {
        AssumptionReport::PerGood per;
        const double gbar_s = g.max_link_weight();
        if (n == 1 || gbar_s == 0.0) {
            per.floor_margin = kInf;
            per.spillover_floor = true;
        } else {
            const double floor = -g.endowment_shares().minCoeff() / ((n - 1) * gbar_s);
            per.floor_margin = g.phi - floor;
            per.spillover_floor = per.floor_margin > 0.0;
        }
        if (n == 1 || gbar == 0.0) {
            per.small_margin = kInf;
            per.spillover_small = true;
        } else {
            const double bound = eta_min_all / ((n + 1) * gbar);
            per.small_margin = bound - std::abs(g.phi);
            per.spillover_small = per.small_margin > 0.0;
        }
        report.all_floor = report.all_floor && per.spillover_floor;
        report.all_small = report.all_small && per.spillover_small;
        if (std::isfinite(per.floor_margin)) worst = std::min(worst, per.floor_margin);
        if (std::isfinite(per.small_margin)) worst = std::min(worst, per.small_margin);
        report.goods.push_back(per);
    }
    report.worst_margin = worst;
    return report;
}

ComparisonBuildResult build_comparison_economy(const std::vector<std::vector<int>>& neighbors,
                                               double intensity,
                                               ComparisonMode mode,
                                               GoodLayer private_good,
                                               const Eigen::VectorXd& comparison_endowments) {
    const int n = static_cast<int>(neighbors.size());
    if (n < 1) throw Error(ErrorCode::validation_error, "need at least one consumer", "neighbors");
    if (intensity < 0.0)
        throw Error(ErrorCode::validation_error, "comparison intensity must be nonnegative", "intensity");
    if (comparison_endowments.size() != n)
        throw Error(ErrorCode::dimension_mismatch, "comparison endowments length must equal consumer count",
                    "comparison_endowments");
    if (private_good.endowments.size() != n)
        throw Error(ErrorCode::dimension_mismatch, "private good endowments length must equal consumer count",
                    "private_good.endowments");
    if (private_good.network.size() == 0) private_good.network = Eigen::MatrixXd::Zero(n, n);

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    std::vector<int> isolated;
    for (int i = 0; i < n; ++i) {
        const auto& set = neighbors[i];
        for (int j : set) {
            if (j < 0 || j >= n)
                throw Error(ErrorCode::validation_error, "neighbor index out of range",
                            "neighbors[" + std::to_string(i) + "]");
            if (j == i)
                throw Error(ErrorCode::validation_error, "neighbor sets must be irreflexive",
                            "neighbors[" + std::to_string(i) + "]");
        }
        const double ni = static_cast<double>(set.size());
        if (set.empty()) {
            isolated.push_back(i);
            continue;  // row stays zero, flagged
        }
        const double S = (mode == ComparisonMode::linear) ? ni : 1.0;
        const double weight = S / (ni * (1.0 + intensity * S));
        for (int j : set) g(i, j) = weight;
    }

    MultiplexEconomy economy;
    economy.consumer_names.reserve(n);
    for (int i = 0; i < n; ++i) economy.consumer_names.push_back(std::to_string(i + 1));

    GoodLayer comparison;
    comparison.name = "comparison";
    comparison.alpha = 1.0 - private_good.alpha;
    comparison.phi = -intensity;
    comparison.network = std::move(g);
    comparison.endowments = comparison_endowments;

    economy.goods.push_back(std::move(private_good));
    economy.goods.push_back(std::move(comparison));
    validate_structure(economy);
    return {std::move(economy), std::move(isolated)};
}

} // namespace mpxeq
