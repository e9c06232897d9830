#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mpxeq/reports.hpp"

namespace py = pybind11;
using namespace mpxeq;

namespace {

Perturbation perturbation_from_kwargs(const MultiplexEconomy& economy, const std::string& kind,
                                      const py::object& payload) {
    const int sbar = economy.good_count();
    if (kind == "endowment") {
        auto vecs = payload.cast<std::vector<Eigen::VectorXd>>();
        return Perturbation::endowment(std::move(vecs));
    }
    if (kind == "preference") return Perturbation::preference(payload.cast<Eigen::VectorXd>());
    if (kind == "network") {
        auto mats = payload.cast<std::vector<Eigen::MatrixXd>>();
        return Perturbation::network(std::move(mats));
    }
    if (kind == "phi") return Perturbation::phi(payload.cast<Eigen::VectorXd>());
    (void)sbar;
    throw Error(ErrorCode::validation_error, "unknown perturbation kind '" + kind + "'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Equilibrium and welfare analysis of exchange economies with multiplex network spillovers";
    m.attr("__version__") = kToolVersion;

    py::register_exception<Error>(m, "MpxeqError");

    py::class_<GoodLayer>(m, "GoodLayer")
        .def(py::init<>())
        .def_readwrite("name", &GoodLayer::name)
        .def_readwrite("alpha", &GoodLayer::alpha)
        .def_readwrite("phi", &GoodLayer::phi)
        .def_readwrite("network", &GoodLayer::network)
        .def_readwrite("endowments", &GoodLayer::endowments)
        .def("aggregate_endowment", &GoodLayer::aggregate_endowment)
        .def("endowment_shares", &GoodLayer::endowment_shares);

    py::class_<MultiplexEconomy>(m, "MultiplexEconomy")
        .def(py::init<>())
        .def_readwrite("consumer_names", &MultiplexEconomy::consumer_names)
        .def_readwrite("goods", &MultiplexEconomy::goods)
        .def("consumer_count", &MultiplexEconomy::consumer_count)
        .def("good_count", &MultiplexEconomy::good_count)
        .def("endowment_matrix", &MultiplexEconomy::endowment_matrix)
        .def("validate", [](const MultiplexEconomy& e) { validate_structure(e); });

    m.def("parse_economy", [](const std::string& text) { return parse_economy(text); });
    m.def("load_economy", &load_economy);
    m.def("serialize_economy", &serialize_economy);
    m.def("economy_hash", &economy_hash);

    py::class_<AssumptionReport::PerGood>(m, "AssumptionPerGood")
        .def_readonly("spillover_floor", &AssumptionReport::PerGood::spillover_floor)
        .def_readonly("spillover_small", &AssumptionReport::PerGood::spillover_small)
        .def_readonly("floor_margin", &AssumptionReport::PerGood::floor_margin)
        .def_readonly("small_margin", &AssumptionReport::PerGood::small_margin);
    py::class_<AssumptionReport>(m, "AssumptionReport")
        .def_readonly("goods", &AssumptionReport::goods)
        .def_readonly("all_floor", &AssumptionReport::all_floor)
        .def_readonly("all_small", &AssumptionReport::all_small)
        .def_readonly("worst_margin", &AssumptionReport::worst_margin);
    m.def("validate_economy", &validate_economy);

    py::enum_<ComparisonMode>(m, "ComparisonMode")
        .value("linear", ComparisonMode::linear)
        .value("average", ComparisonMode::average);
    py::class_<ComparisonBuildResult>(m, "ComparisonBuildResult")
        .def_readonly("economy", &ComparisonBuildResult::economy)
        .def_readonly("isolated_consumers", &ComparisonBuildResult::isolated_consumers);
    m.def("build_comparison_economy", &build_comparison_economy, py::arg("neighbors"), py::arg("intensity"),
          py::arg("mode"), py::arg("private_good"), py::arg("comparison_endowments"));

    py::class_<LayerInfluence>(m, "LayerInfluence")
        .def_readonly("good", &LayerInfluence::good)
        .def_readonly("M", &LayerInfluence::M)
        .def_readonly("tilde_b", &LayerInfluence::tilde_b)
        .def_readonly("spectral_ok", &LayerInfluence::spectral_ok);
    m.def("leontief_inverse", &leontief_inverse, py::arg("layer"), py::arg("good_index") = 0);

    py::class_<ParallelVerdict>(m, "ParallelVerdict")
        .def_readonly("parallel", &ParallelVerdict::parallel)
        .def_readonly("worst_s", &ParallelVerdict::worst_s)
        .def_readonly("worst_t", &ParallelVerdict::worst_t)
        .def_readonly("dissimilarity", &ParallelVerdict::dissimilarity)
        .def_readonly("regular", &ParallelVerdict::regular)
        .def_readonly("identical_layers", &ParallelVerdict::identical_layers);
    m.def("check_parallel", [](const MultiplexEconomy& e) { return check_parallel(e); });

    py::class_<EquilibriumSolution>(m, "EquilibriumSolution")
        .def_readonly("mu", &EquilibriumSolution::mu)
        .def_readonly("prices", &EquilibriumSolution::prices)
        .def_readonly("allocation", &EquilibriumSolution::allocation)
        .def_readonly("effective", &EquilibriumSolution::effective)
        .def_readonly("utilities", &EquilibriumSolution::utilities)
        .def_readonly("shadow", &EquilibriumSolution::shadow)
        .def_readonly("interior", &EquilibriumSolution::interior)
        .def_readonly("unique", &EquilibriumSolution::unique);
    m.def("solve_equilibrium", &solve_equilibrium);
    m.def("exogenous_price_mu", &exogenous_price_mu);

    py::class_<ResidualReport>(m, "ResidualReport")
        .def_readonly("market_clearing", &ResidualReport::market_clearing)
        .def_readonly("budget", &ResidualReport::budget)
        .def_readonly("foc", &ResidualReport::foc)
        .def_readonly("min_allocation", &ResidualReport::min_allocation)
        .def_readonly("pass_", &ResidualReport::pass);
    m.def("verify_equilibrium", &verify_equilibrium);

    m.def("influence_centrality",
          [](const MultiplexEconomy& e, int good) {
              return influence_centrality(e, build_system(e).H, good);
          },
          py::arg("economy"), py::arg("good"));

    py::class_<ParetoSolution>(m, "ParetoSolution")
        .def_readonly("weights", &ParetoSolution::weights)
        .def_readonly("allocation", &ParetoSolution::allocation)
        .def_readonly("effective", &ParetoSolution::effective)
        .def_readonly("multipliers", &ParetoSolution::multipliers)
        .def_readonly("utilities", &ParetoSolution::utilities);
    m.def("pareto_allocation", &pareto_allocation);
    m.def("layer_weight_distributions",
          [](const MultiplexEconomy& e) { return layer_weight_distributions(e); });
    m.def("efficiency_loss", &efficiency_loss);

    py::class_<ResourceUtilization>(m, "ResourceUtilization")
        .def_readonly("cru", &ResourceUtilization::cru)
        .def_readonly("theta_hat", &ResourceUtilization::theta_hat)
        .def_readonly("log_lower", &ResourceUtilization::log_lower)
        .def_readonly("log_upper", &ResourceUtilization::log_upper)
        .def_readonly("construction_feasible", &ResourceUtilization::construction_feasible);
    m.def("resource_utilization", &resource_utilization);
    m.def("no_improvement_weight", &no_improvement_weight);

    py::class_<EfficiencyVerdict>(m, "EfficiencyVerdict")
        .def_readonly("verdict", &EfficiencyVerdict::verdict)
        .def_property_readonly("theta_star", [](const EfficiencyVerdict& v) -> py::object {
            if (!v.theta_star) return py::none();
            return py::cast(*v.theta_star);
        });
    m.def("efficiency_verdict", &efficiency_verdict);

    py::class_<ImprovementResult>(m, "ImprovementResult")
        .def_readonly("allocation", &ImprovementResult::allocation)
        .def_readonly("step", &ImprovementResult::step)
        .def_readonly("good_s", &ImprovementResult::good_s)
        .def_readonly("good_t", &ImprovementResult::good_t)
        .def_readonly("tau_s", &ImprovementResult::tau_s)
        .def_readonly("tau_t", &ImprovementResult::tau_t)
        .def_readonly("utility_gains", &ImprovementResult::utility_gains)
        .def_readonly("min_gain", &ImprovementResult::min_gain);
    m.def("construct_improvement", &construct_improvement);

    py::class_<LindahlSolution>(m, "LindahlSolution")
        .def_readonly("goods_prices", &LindahlSolution::goods_prices)
        .def_readonly("own_prices", &LindahlSolution::own_prices)
        .def_readonly("cross_prices", &LindahlSolution::cross_prices)
        .def_readonly("allocation", &LindahlSolution::allocation)
        .def_readonly("effective", &LindahlSolution::effective)
        .def_readonly("gamma", &LindahlSolution::gamma)
        .def_readonly("utilities", &LindahlSolution::utilities);
    m.def("solve_lindahl", &solve_lindahl);

    py::class_<LindahlComparison>(m, "LindahlComparison")
        .def_readonly("lindahl", &LindahlComparison::lindahl)
        .def_readonly("competitive_utilities", &LindahlComparison::competitive_utilities)
        .def_readonly("delta_u", &LindahlComparison::delta_u)
        .def_readonly("efficient", &LindahlComparison::efficient)
        .def_readonly("planner_gap", &LindahlComparison::planner_gap)
        .def_readonly("pareto_improvement", &LindahlComparison::pareto_improvement)
        .def_readonly("worse_off", &LindahlComparison::worse_off);
    m.def("compare_lindahl", &compare_lindahl);

    py::class_<PerturbationResult>(m, "PerturbationResult")
        .def_readonly("mu0", &PerturbationResult::mu0)
        .def_readonly("mu_dot", &PerturbationResult::mu_dot)
        .def_readonly("price_log_derivative", &PerturbationResult::price_log_derivative)
        .def_readonly("utility_derivative", &PerturbationResult::utility_derivative)
        .def_readonly("consumption_log_derivative", &PerturbationResult::consumption_log_derivative)
        .def_readonly("pure_redistribution", &PerturbationResult::pure_redistribution);
    m.def("perturb",
          [](const MultiplexEconomy& e, const std::string& kind, const py::object& payload) {
              return perturb(e, perturbation_from_kwargs(e, kind, payload));
          },
          py::arg("economy"), py::arg("kind"), py::arg("payload"));

    py::class_<TransferSign>(m, "TransferSign")
        .def_readonly("sign", &TransferSign::sign)
        .def_readonly("margin", &TransferSign::margin)
        .def_readonly("c_from", &TransferSign::c_from)
        .def_readonly("c_to", &TransferSign::c_to);
    m.def("transfer_price_sign", &transfer_price_sign, py::arg("economy"), py::arg("from_consumer"),
          py::arg("to_consumer"), py::arg("on_good"), py::arg("watch_good"));

    py::class_<DerivativeReport>(m, "DerivativeReport")
        .def_readonly("price_log_derivative", &DerivativeReport::price_log_derivative)
        .def_readonly("utility_derivative", &DerivativeReport::utility_derivative)
        .def_readonly("consumption_log_derivative", &DerivativeReport::consumption_log_derivative)
        .def_readonly("max_rel_error", &DerivativeReport::max_rel_error);
    m.def("finite_difference_check",
          [](const MultiplexEconomy& e, const std::string& kind, const py::object& payload, double h) {
              return finite_difference_check(e, perturbation_from_kwargs(e, kind, payload), h);
          },
          py::arg("economy"), py::arg("kind"), py::arg("payload"), py::arg("h") = 1e-5);

    py::class_<TatonnementConfig>(m, "TatonnementConfig")
        .def(py::init<>())
        .def_readwrite("price_step", &TatonnementConfig::price_step)
        .def_readwrite("damping", &TatonnementConfig::damping)
        .def_readwrite("max_outer", &TatonnementConfig::max_outer)
        .def_readwrite("tolerance", &TatonnementConfig::tolerance)
        .def_readwrite("price_floor", &TatonnementConfig::price_floor);
    m.def("tatonnement_solve",
          [](const MultiplexEconomy& e, const TatonnementConfig& cfg) { return tatonnement_solve(e, cfg); },
          py::arg("economy"), py::arg("config") = TatonnementConfig{});

    py::class_<PlannerResult>(m, "PlannerResult")
        .def_readonly("allocation", &PlannerResult::allocation)
        .def_readonly("value", &PlannerResult::value)
        .def_readonly("iterations", &PlannerResult::iterations);
    m.def("numeric_planner",
          [](const MultiplexEconomy& e, const Eigen::VectorXd& theta) { return numeric_planner(e, theta); },
          py::arg("economy"), py::arg("theta"));

    py::enum_<TextbookExample>(m, "TextbookExample")
        .value("I", TextbookExample::I)
        .value("II", TextbookExample::II)
        .value("III", TextbookExample::III);
    py::class_<CurveSample>(m, "CurveSample")
        .def_readonly("phi", &CurveSample::phi)
        .def_readonly("x", &CurveSample::x)
        .def_readonly("y_equilibrium", &CurveSample::y_equilibrium)
        .def_readonly("y_contract", &CurveSample::y_contract);
    m.def("textbook_curves",
          [](TextbookExample example, double phi, const std::vector<double>& grid) {
              return textbook_curves(example, phi, grid);
          });

    m.def("allocation_utilities", &allocation_utilities);
}
