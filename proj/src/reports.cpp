#include "mpxeq/reports.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace mpxeq {

namespace {

json good_names(const MultiplexEconomy& economy) {
    json names = json::array();
    for (const auto& g : economy.goods) names.push_back(g.name);
    return names;
}

} // namespace

json report_envelope(const MultiplexEconomy& economy) {
    json doc;
    doc["tool"] = "mpxeq";
    doc["version"] = kToolVersion;
    doc["economy_hash"] = economy_hash(economy);
    return doc;
}

json to_json(const AssumptionReport& report) {
    json doc;
    doc["all_spillover_floor"] = report.all_floor;
    doc["all_spillover_small"] = report.all_small;
    doc["worst_margin"] = report.worst_margin;
    if (report.rank_condition) doc["rank_condition"] = *report.rank_condition;
    json goods = json::array();
    for (const auto& per : report.goods) {
        json g;
        g["spillover_floor"] = per.spillover_floor;
        g["floor_margin"] = per.floor_margin;
        g["spillover_small"] = per.spillover_small;
        g["small_margin"] = per.small_margin;
        goods.push_back(std::move(g));
    }
    doc["goods"] = std::move(goods);
    return doc;
}

json to_json(const MultiplexEconomy& economy, const EquilibriumSolution& solution) {
    json doc;
    doc["consumers"] = economy.consumer_names;
    doc["goods"] = good_names(economy);
    doc["mu"] = to_json(solution.mu);
    doc["prices"] = to_json(solution.prices);
    doc["allocation"] = to_json(solution.allocation);
    doc["effective"] = to_json(solution.effective);
    doc["utilities"] = to_json(solution.utilities);
    doc["shadow"] = to_json(solution.shadow);
    doc["interior"] = solution.interior;
    doc["unique"] = solution.unique;
    return doc;
}

json to_json(const ResidualReport& report) {
    json doc;
    doc["market_clearing"] = report.market_clearing;
    doc["budget"] = report.budget;
    doc["foc"] = report.foc;
    doc["min_allocation"] = report.min_allocation;
    doc["pass"] = report.pass;
    return doc;
}

json to_json(const ParallelVerdict& verdict) {
    json doc;
    doc["parallel"] = verdict.parallel;
    doc["dissimilarity"] = verdict.dissimilarity;
    doc["worst_pair"] = json::array({verdict.worst_s, verdict.worst_t});
    doc["regular_layers"] = verdict.regular;
    doc["identical_layers"] = verdict.identical_layers;
    doc["tolerance"] = verdict.tolerance;
    return doc;
}

json to_json(const ResourceUtilization& cru) {
    json doc;
    doc["cru"] = cru.cru;
    doc["log_cru"] = std::log(cru.cru);
    doc["theta_hat"] = to_json(cru.theta_hat);
    doc["log_lower_bound"] = cru.log_lower;
    doc["log_upper_bound"] = cru.log_upper;
    doc["construction_feasible"] = cru.construction_feasible;
    return doc;
}

json to_json(const MultiplexEconomy& economy, const WelfareReport& report) {
    json doc;
    doc["parallel"] = to_json(report.verdict);
    json rho = json::array();
    for (const auto& r : report.rho) rho.push_back(to_json(r));
    doc["rho"] = std::move(rho);
    if (report.theta_star) doc["theta_star"] = to_json(*report.theta_star);
    doc["cru"] = to_json(report.cru);
    doc["varpi"] = to_json(report.varpi);
    doc["improvement_available"] = report.improvement_available;
    doc["goods"] = good_names(economy);
    return doc;
}

json to_json(const MultiplexEconomy& economy, const ImprovementResult& improvement) {
    json doc;
    doc["goods"] = good_names(economy);
    doc["pair"] = json::array({improvement.good_s, improvement.good_t});
    doc["step"] = improvement.step;
    doc["tau_s"] = to_json(improvement.tau_s);
    doc["tau_t"] = to_json(improvement.tau_t);
    doc["allocation"] = to_json(improvement.allocation);
    doc["utility_gains"] = to_json(improvement.utility_gains);
    doc["min_gain"] = improvement.min_gain;
    doc["lp_slack"] = improvement.lp_slack;
    return doc;
}

json to_json(const MultiplexEconomy& economy, const LindahlSolution& solution) {
    json doc;
    doc["consumers"] = economy.consumer_names;
    doc["goods"] = good_names(economy);
    doc["goods_prices"] = to_json(solution.goods_prices);
    doc["own_prices"] = to_json(solution.own_prices);
    json cross = json::array();
    for (const auto& m : solution.cross_prices) cross.push_back(to_json(m));
    doc["cross_prices"] = std::move(cross);
    doc["allocation"] = to_json(solution.allocation);
    doc["effective"] = to_json(solution.effective);
    doc["gamma"] = to_json(solution.gamma);
    doc["utilities"] = to_json(solution.utilities);
    return doc;
}

json to_json(const MultiplexEconomy& economy, const LindahlComparison& comparison) {
    json doc;
    doc["lindahl"] = to_json(economy, comparison.lindahl);
    doc["competitive_utilities"] = to_json(comparison.competitive_utilities);
    doc["delta_u"] = to_json(comparison.delta_u);
    doc["efficient"] = comparison.efficient;
    doc["planner_gap"] = comparison.planner_gap;
    doc["pareto_improvement"] = comparison.pareto_improvement;
    doc["worse_off"] = comparison.worse_off;
    return doc;
}

json to_json(const MultiplexEconomy& economy, const PerturbationResult& result) {
    json doc;
    doc["goods"] = good_names(economy);
    doc["mu0"] = to_json(result.mu0);
    doc["mu_dot"] = to_json(result.mu_dot);
    doc["price_log_derivative"] = to_json(result.price_log_derivative);
    doc["utility_derivative"] = to_json(result.utility_derivative);
    doc["consumption_log_derivative"] = to_json(result.consumption_log_derivative);
    if (result.price_redistribution.size() > 0) {
        json dec;
        dec["price_redistribution"] = to_json(result.price_redistribution);
        dec["price_aggregate"] = to_json(result.price_aggregate);
        dec["welfare_income"] = to_json(result.welfare_income);
        dec["welfare_price"] = result.welfare_price;
        dec["welfare_aggregate"] = result.welfare_aggregate;
        dec["pure_redistribution"] = result.pure_redistribution;
        doc["decomposition"] = std::move(dec);
    }
    return doc;
}

json to_json(const DerivativeReport& report) {
    json doc;
    doc["price_log_derivative"] = to_json(report.price_log_derivative);
    doc["utility_derivative"] = to_json(report.utility_derivative);
    doc["consumption_log_derivative"] = to_json(report.consumption_log_derivative);
    doc["analytic_price_log_derivative"] = to_json(report.analytic.price_log_derivative);
    doc["analytic_utility_derivative"] = to_json(report.analytic.utility_derivative);
    doc["analytic_consumption_log_derivative"] = to_json(report.analytic.consumption_log_derivative);
    doc["max_rel_error"] = report.max_rel_error;
    return doc;
}

json to_json(const Error& error) {
    json doc;
    json inner;
    inner["code"] = error_code_name(error.code());
    inner["message"] = error.what();
    inner["location"] = error.location();
    doc["error"] = std::move(inner);
    return doc;
}

std::string curves_csv(const CurveSample& sample) {
    std::string out = "x,y_equilibrium,y_contract\n";
    for (size_t i = 0; i < sample.x.size(); ++i) {
        out += format_double(sample.x[i]);
        out += ',';
        out += format_double(sample.y_equilibrium[i]);
        out += ',';
        out += format_double(sample.y_contract[i]);
        out += '\n';
    }
    return out;
}

json to_json(const CurveSample& sample) {
    json doc;
    doc["example"] = sample.example == TextbookExample::I ? "I" : sample.example == TextbookExample::II ? "II" : "III";
    doc["phi"] = sample.phi;
    doc["x"] = sample.x;
    doc["y_equilibrium"] = sample.y_equilibrium;
    doc["y_contract"] = sample.y_contract;
    return doc;
}

} // namespace mpxeq
