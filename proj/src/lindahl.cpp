#include "mpxeq/lindahl.hpp"

#include <cmath>

namespace mpxeq {

LindahlSolution solve_lindahl(const MultiplexEconomy& economy) {
    validate_structure(economy);
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();
    const auto influences = layer_influences(economy);

    LindahlSolution sol;
    sol.gamma = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < sbar; ++s) sol.gamma += economy.goods[s].alpha * economy.goods[s].endowment_shares();

    sol.goods_prices.resize(sbar);
    sol.own_prices.resize(sbar, n);
    sol.allocation.resize(sbar, n);
    sol.effective.resize(sbar, n);
    sol.cross_prices.reserve(sbar);

    std::string offending;
    for (int s = 0; s < sbar; ++s) {
        const auto& g = economy.goods[s];
        const double wbar = g.aggregate_endowment();
        sol.goods_prices(s) = g.alpha / wbar;
        sol.own_prices.row(s) = (influences[s].tilde_b * sol.goods_prices(s)).transpose();

        Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) cross(i, j) = g.phi * g.network(i, j) * sol.own_prices(s, i);
        sol.cross_prices.push_back(std::move(cross));

        const Eigen::VectorXd q = wbar * sol.gamma.cwiseQuotient(influences[s].tilde_b);
        sol.effective.row(s) = q.transpose();
        sol.allocation.row(s) = (influences[s].M * q).transpose();
        for (int i = 0; i < n; ++i)
            if (!(sol.allocation(s, i) > 0.0))
                offending += (offending.empty() ? "" : ", ") + std::string("allocation[") + std::to_string(s) +
                             "][" + std::to_string(i) + "]";
    }
    if (!offending.empty())
        throw Error(ErrorCode::non_interior_lindahl,
                    "personalized-price closed form requires an interior allocation", offending);

    sol.utilities = allocation_utilities(economy, sol.allocation);
    return sol;
}

LindahlComparison compare_lindahl(const MultiplexEconomy& economy) {
    LindahlComparison cmp;
    cmp.lindahl = solve_lindahl(economy);
    const EquilibriumSolution eq = solve_equilibrium(economy);
    cmp.competitive_utilities = eq.utilities;
    cmp.delta_u = cmp.lindahl.utilities - eq.utilities;

    const ParetoSolution planner = pareto_allocation(economy, cmp.lindahl.gamma);
    cmp.planner_gap = (planner.allocation - cmp.lindahl.allocation).cwiseAbs().maxCoeff();
    cmp.efficient = cmp.planner_gap <= 1e-9;

    cmp.pareto_improvement = true;
    for (int i = 0; i < economy.consumer_count(); ++i) {
        if (cmp.delta_u(i) < 0.0) {
            cmp.worse_off.push_back(i);
            cmp.pareto_improvement = false;
        }
    }
    return cmp;
}

} // namespace mpxeq
