#pragma once

#include <functional>
#include <random>
#include <span>

#include "mpxeq/compstat.hpp"
#include "mpxeq/equilibrium.hpp"

namespace mpxeq {

struct TatonnementConfig {
    double price_step = 0.1;      // kappa in (0,1]
    double damping = 0.5;         // inner best-response damping
    int max_outer = 10000;
    double tolerance = 1e-10;     // relative excess demand
    double price_floor = 1e-9;
    int inner_sweeps = 200;       // cap per outer round
};

// Fixed-point oracle: damped best responses inside, multiplicative price
// adjustment outside. Unlike the closed form it reaches corner equilibria
// (positive spillovers only), so `interior` can come back false.
EquilibriumSolution tatonnement_solve(const MultiplexEconomy& economy, const TatonnementConfig& config = {});

struct PlannerConfig {
    double step = 1e-2;
    int max_iterations = 100000;
    double tolerance = 1e-9;  // on the projected-gradient displacement
};

struct PlannerResult {
    Eigen::MatrixXd allocation;
    double value = 0.0;
    int iterations = 0;
};

// Projected-gradient ascent of theta-weighted utility over the product of
// scaled simplices (one per good).
PlannerResult numeric_planner(const MultiplexEconomy& economy, const Eigen::VectorXd& theta,
                              const PlannerConfig& config = {});

struct SimplexMinConfig {
    double step = 0.5;
    int max_iterations = 200000;
    double tolerance = 1e-12;  // on the projected-gradient displacement
};

struct SimplexMinResult {
    Eigen::VectorXd point;
    double value = 0.0;
    int iterations = 0;
};

// Generic projected-gradient minimizer over the probability simplex.
SimplexMinResult minimize_on_simplex(int dimension,
                                     const std::function<double(const Eigen::VectorXd&)>& objective,
                                     const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
                                     const SimplexMinConfig& config = {});

// Euclidean projection onto {x >= 0, sum x = total}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v, double total);

struct DerivativeReport {
    Eigen::VectorXd price_log_derivative;        // central differences
    Eigen::VectorXd utility_derivative;
    Eigen::MatrixXd consumption_log_derivative;
    PerturbationResult analytic;
    double max_rel_error = 0.0;  // FD vs analytic, floor 1 on the denominator
};

DerivativeReport finite_difference_check(const MultiplexEconomy& economy, const Perturbation& perturbation,
                                         double h = 1e-5);

enum class TextbookExample { I, II, III };

// Closed-form 2x2 Edgeworth curves, corner segments included. x, y live in
// [0, 2] (aggregate endowments normalized to 2).
struct CurveSample {
    TextbookExample example = TextbookExample::I;
    double phi = 0.0;
    std::vector<double> x;
    std::vector<double> y_equilibrium;
    std::vector<double> y_contract;
};

CurveSample textbook_curves(TextbookExample example, double phi, std::span<const double> grid);

double equilibrium_curve_y(TextbookExample example, double phi, double x);
double contract_curve_y(TextbookExample example, double phi, double x);

struct RandomEconomyOptions {
    int min_consumers = 2;
    int max_consumers = 6;
    int min_goods = 1;
    int max_goods = 4;
    double phi_scale = 0.9;     // fraction of the interiority bound
    double link_density = 0.6;
    // Force a parallel economy via one of the symmetry cases.
    bool force_regular = false;
    bool force_identical_layers = false;
};

// Deterministic generator of economies satisfying the interiority bound.
MultiplexEconomy random_economy(std::mt19937_64& rng, const RandomEconomyOptions& options = {});

// Random interior perturbation of the given kind (network directions are
// supported on existing links).
Perturbation random_perturbation(std::mt19937_64& rng, const MultiplexEconomy& economy,
                                 Perturbation::Kind kind, bool pure_redistribution = false);

} // namespace mpxeq
