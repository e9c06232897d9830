#include "mpxeq/welfare.hpp"

#include <cmath>
#include <limits>

#include "mpxeq/jsonio.hpp"
#include "mpxeq/linprog.hpp"

namespace mpxeq {

namespace {
constexpr double kParetoResidualTol = 1e-9;
} // namespace

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    double d = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) == 0.0) continue;  // 0 ln 0 = 0
        d += p(i) * std::log(p(i) / q(i));
    }
    return d;
}

double hellinger_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    return (p.cwiseSqrt() - q.cwiseSqrt()).norm();
}

ParetoSolution pareto_allocation(const MultiplexEconomy& economy, const Eigen::VectorXd& theta) {
    validate_structure(economy);
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();
    if (theta.size() != n)
        throw Error(ErrorCode::dimension_mismatch, "theta length must equal consumer count");
    for (int i = 0; i < n; ++i)
        if (!(theta(i) > 0.0))
            throw Error(ErrorCode::validation_error, "theta must be strictly positive",
                        "theta[" + std::to_string(i) + "]");

    const double total = theta.sum();
    ParetoSolution sol;
    sol.weights = theta / total;
    sol.allocation.resize(sbar, n);
    sol.effective.resize(sbar, n);
    sol.multipliers.resize(sbar);

    const auto influences = layer_influences(economy);
    std::string offending;
    for (int s = 0; s < sbar; ++s) {
        const auto& g = economy.goods[s];
        const double wbar = g.aggregate_endowment();
        const Eigen::VectorXd q = wbar * sol.weights.cwiseQuotient(influences[s].tilde_b);
        sol.effective.row(s) = q.transpose();
        sol.allocation.row(s) = (influences[s].M * q).transpose();
        sol.multipliers(s) = g.alpha / wbar;  // 1'theta = 1 after normalization
        for (int i = 0; i < n; ++i)
            if (!(sol.allocation(s, i) > 0.0))
                offending += (offending.empty() ? "" : ", ") + std::string("allocation[") + std::to_string(s) +
                             "][" + std::to_string(i) + "]";
    }
    if (!offending.empty())
        throw Error(ErrorCode::non_interior_pareto,
                    "planner formula left its validity range (non-positive cells)", offending);

    sol.utilities = allocation_utilities(economy, sol.allocation);
    return sol;
}

std::vector<Eigen::VectorXd> layer_weight_distributions(const MultiplexEconomy& economy) {
    return layer_weight_distributions(economy, solve_effective_endowment(economy));
}

std::vector<Eigen::VectorXd> layer_weight_distributions(const MultiplexEconomy& economy,
                                                        const EffectiveEndowment& eff) {
    std::vector<Eigen::VectorXd> rho;
    rho.reserve(economy.goods.size());
    for (int s = 0; s < economy.good_count(); ++s) {
        const Eigen::VectorXd num = eff.mu.cwiseProduct(eff.sys.layers[s].tilde_b);
        rho.push_back(num / num.sum());
    }
    return rho;
}

EfficiencyVerdict efficiency_verdict(const MultiplexEconomy& economy) {
    EffectiveEndowment eff = solve_effective_endowment(economy);
    EfficiencyVerdict out;
    out.verdict = check_parallel(economy, eff.sys.layers);
    if (!out.verdict.parallel) return out;

    // Common centrality direction: any layer serves; rho^s coincide here.
    const Eigen::VectorXd weighted = eff.mu.cwiseProduct(eff.sys.layers[0].tilde_b);
    out.theta_star = weighted / weighted.sum();
    return out;
}

double efficiency_loss(const MultiplexEconomy& economy, const Eigen::VectorXd& theta) {
    const int n = economy.consumer_count();
    if (theta.size() != n)
        throw Error(ErrorCode::dimension_mismatch, "theta length must equal consumer count");
    for (int i = 0; i < n; ++i)
        if (!(theta(i) > 0.0))
            throw Error(ErrorCode::validation_error, "theta must be strictly positive");
    const Eigen::VectorXd t = theta / theta.sum();
    const auto rho = layer_weight_distributions(economy);
    double loss = 0.0;
    for (int s = 0; s < economy.good_count(); ++s) loss += economy.goods[s].alpha * kl_divergence(t, rho[s]);
    return loss;
}

ResourceUtilization resource_utilization(const MultiplexEconomy& economy) {
    EffectiveEndowment eff = solve_effective_endowment(economy);
    const auto rho = layer_weight_distributions(economy, eff);
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();

    ResourceUtilization out;
    Eigen::VectorXd geo = Eigen::VectorXd::Ones(n);  // prod_s (rho^s_i)^{alpha^s}
    for (int i = 0; i < n; ++i) {
        double log_geo = 0.0;
        for (int s = 0; s < sbar; ++s) log_geo += economy.goods[s].alpha * std::log(rho[s](i));
        geo(i) = std::exp(log_geo);
    }
    out.cru = geo.sum();
    out.theta_hat = geo / geo.sum();

    double max_kl = 0.0, hell = 0.0;
    for (int s = 0; s < sbar; ++s) {
        for (int t = 0; t < sbar; ++t) {
            if (s != t) max_kl = std::max(max_kl, kl_divergence(rho[s], rho[t]));
            const double h = hellinger_distance(rho[s], rho[t]);
            hell += economy.goods[s].alpha * economy.goods[t].alpha * h * h;
        }
    }
    out.log_lower = -max_kl;
    out.log_upper = -0.5 * hell;

    // Witness allocation behind the closed form: q^s_i = geo_i wbar^s / tilde_b^s_i,
    // x^s = M^s q^s. Entries can go negative when spillovers are large.
    out.construction_feasible = true;
    for (int s = 0; s < sbar && out.construction_feasible; ++s) {
        const Eigen::VectorXd q =
            economy.goods[s].aggregate_endowment() * geo.cwiseQuotient(eff.sys.layers[s].tilde_b);
        if (((eff.sys.layers[s].M * q).array() < 0.0).any()) out.construction_feasible = false;
    }
    return out;
}

Eigen::VectorXd no_improvement_weight(const MultiplexEconomy& economy) {
    const auto rho = layer_weight_distributions(economy);
    Eigen::VectorXd varpi = Eigen::VectorXd::Zero(economy.consumer_count());
    for (int s = 0; s < economy.good_count(); ++s) varpi += economy.goods[s].alpha * rho[s];
    return varpi;
}

ImprovementResult construct_improvement(const MultiplexEconomy& economy) {
    EquilibriumSolution eq = solve_equilibrium(economy);
    EffectiveEndowment eff = solve_effective_endowment(economy);
    const ParallelVerdict verdict = check_parallel(economy, eff.sys.layers);
    if (verdict.parallel)
        throw Error(ErrorCode::parallel_no_improvement,
                    "the equilibrium is efficient; no Pareto-improving reallocation exists");

    const int n = economy.consumer_count();
    const int s = verdict.worst_s;
    const int t = verdict.worst_t;
    const Eigen::VectorXd qs = eq.effective.row(s).transpose();
    const Eigen::VectorXd qt = eq.effective.row(t).transpose();
    const double alpha_s = economy.goods[s].alpha;
    const double alpha_t = economy.goods[t].alpha;

    // Max-min-slack LP over effective-space directions (tau_hat_s, tau_hat_t, delta):
    //   alpha^t q^s_i tau_hat_t_i + alpha^s q^t_i tau_hat_s_i - delta >= q^s_i q^t_i
    //   tilde_b^s . tau_hat_s = 0,  tilde_b^t . tau_hat_t = 0
    const double qmax = eq.effective.maxCoeff();
    const int nv = 2 * n + 1;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
    c(nv - 1) = 1.0;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 2, nv);
    Eigen::VectorXd b(n + 2);
    std::vector<LpRelation> rel;
    for (int i = 0; i < n; ++i) {
        A(i, i) = alpha_s * qt(i);         // tau_hat_s coefficient
        A(i, n + i) = alpha_t * qs(i);     // tau_hat_t coefficient
        A(i, nv - 1) = -1.0;
        b(i) = qs(i) * qt(i);
        rel.push_back(LpRelation::greater_equal);
    }
    A.row(n).head(n) = eff.sys.layers[s].tilde_b.transpose();
    b(n) = 0.0;
    rel.push_back(LpRelation::equal);
    A.row(n + 1).segment(n, n) = eff.sys.layers[t].tilde_b.transpose();
    b(n + 1) = 0.0;
    rel.push_back(LpRelation::equal);

    // The witness scale grows like 1/wedge, so a nearly-parallel pair may not
    // fit the base box; widen geometrically until the slack turns positive.
    LpResult lp;
    for (double box = 10.0 * qmax; box <= 1e14 * qmax; box *= 100.0) {
        Eigen::VectorXd lower = Eigen::VectorXd::Constant(nv, -box);
        Eigen::VectorXd upper = Eigen::VectorXd::Constant(nv, box);
        lower(nv - 1) = -box * qmax;
        upper(nv - 1) = box * qmax;
        lp = solve_lp(c, A, rel, b, lower, upper);
        if (lp.optimal && lp.value > 0.0) break;
    }
    if (!lp.optimal || lp.value <= 0.0)
        throw Error(ErrorCode::line_search_failed,
                    "feasibility LP found no direction with positive slack (slack " +
                        format_double(lp.value) + "); this should not happen off the parallel set");

    const Eigen::VectorXd tau_hat_s = lp.x.head(n);
    const Eigen::VectorXd tau_hat_t = lp.x.segment(n, n);

    ImprovementResult out;
    out.good_s = s;
    out.good_t = t;
    out.lp_slack = lp.value;
    out.tau_s = eff.sys.layers[s].M * tau_hat_s;
    out.tau_t = eff.sys.layers[t].M * tau_hat_t;

    double step = 1.0;
    while (step >= 1e-12) {
        Eigen::MatrixXd candidate = eq.allocation;
        candidate.row(s) += step * out.tau_s.transpose();
        candidate.row(t) += step * out.tau_t.transpose();
        if (candidate.minCoeff() >= 0.0) {
            const Eigen::VectorXd u = allocation_utilities(economy, candidate);
            if (((u - eq.utilities).array() > 0.0).all()) {
                out.allocation = std::move(candidate);
                out.step = step;
                out.utility_gains = u - eq.utilities;
                out.min_gain = out.utility_gains.minCoeff();
                return out;
            }
        }
        step *= 0.5;
    }
    throw Error(ErrorCode::line_search_failed, "line search underflowed below 1e-12");
}

WelfareReport welfare_report(const MultiplexEconomy& economy) {
    WelfareReport report;
    EffectiveEndowment eff = solve_effective_endowment(economy);
    report.verdict = check_parallel(economy, eff.sys.layers);
    report.rho = layer_weight_distributions(economy, eff);
    if (report.verdict.parallel) {
        const Eigen::VectorXd weighted = eff.mu.cwiseProduct(eff.sys.layers[0].tilde_b);
        report.theta_star = weighted / weighted.sum();
    }
    report.cru = resource_utilization(economy);
    report.varpi = no_improvement_weight(economy);
    report.improvement_available = !report.verdict.parallel;
    return report;
}

} // namespace mpxeq
