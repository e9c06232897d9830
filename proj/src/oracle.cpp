#include "mpxeq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpxeq/jsonio.hpp"

namespace mpxeq {

namespace {

// Best response of one consumer given prices and others' consumption:
// Cobb-Douglas demand with an active-set reduction for goods whose candidate
// consumption would go negative (possible only under positive spillovers).
Eigen::VectorXd best_response(const MultiplexEconomy& economy, const Eigen::VectorXd& prices,
                              const Eigen::VectorXd& externality, double income, double* mu_out) {
    const int sbar = economy.good_count();
    std::vector<bool> active(static_cast<size_t>(sbar), true);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sbar);
    double mu = income;
    for (int round = 0; round < sbar; ++round) {
        double alpha_sum = 0.0, adjusted = income;
        for (int s = 0; s < sbar; ++s) {
            if (!active[static_cast<size_t>(s)]) continue;
            alpha_sum += economy.goods[s].alpha;
            adjusted += prices(s) * externality(s);
        }
        mu = adjusted / alpha_sum;
        int worst = -1;
        double worst_val = 0.0;
        for (int s = 0; s < sbar; ++s) {
            if (!active[static_cast<size_t>(s)]) {
                x(s) = 0.0;
                continue;
            }
            x(s) = economy.goods[s].alpha * mu / prices(s) - externality(s);
            if (x(s) < worst_val) {
                worst_val = x(s);
                worst = s;
            }
        }
        if (worst < 0) break;
        active[static_cast<size_t>(worst)] = false;
        x(worst) = 0.0;
    }
    if (mu_out) *mu_out = mu;
    return x.cwiseMax(0.0);
}

} // namespace

EquilibriumSolution tatonnement_solve(const MultiplexEconomy& economy, const TatonnementConfig& config) {
    validate_structure(economy);
    if (!(config.price_step > 0.0 && config.price_step <= 1.0))
        throw Error(ErrorCode::validation_error, "price step must lie in (0,1]", "config.price_step");
    if (!(config.tolerance > 0.0))
        throw Error(ErrorCode::validation_error, "tolerance must be positive", "config.tolerance");

    const int n = economy.consumer_count();
    const int sbar = economy.good_count();
    Eigen::VectorXd prices = Eigen::VectorXd::Ones(sbar);
    Eigen::MatrixXd x = economy.endowment_matrix();  // s̄ x n
    Eigen::VectorXd wbar(sbar);
    for (int s = 0; s < sbar; ++s) wbar(s) = economy.goods[s].aggregate_endowment();
    Eigen::VectorXd mu = Eigen::VectorXd::Ones(n);

    double excess_norm = 0.0;
    for (int outer = 0; outer < config.max_outer; ++outer) {
        for (int sweep = 0; sweep < config.inner_sweeps; ++sweep) {
            double shift = 0.0;
            for (int i = 0; i < n; ++i) {
                Eigen::VectorXd externality(sbar);
                for (int s = 0; s < sbar; ++s)
                    externality(s) = economy.goods[s].phi * economy.goods[s].network.row(i).dot(x.row(s));
                double income = 0.0;
                for (int s = 0; s < sbar; ++s) income += prices(s) * economy.goods[s].endowments(i);
                double mu_i = 0.0;
                const Eigen::VectorXd reply = best_response(economy, prices, externality, income, &mu_i);
                mu(i) = mu_i;
                for (int s = 0; s < sbar; ++s) {
                    const double next = (1.0 - config.damping) * x(s, i) + config.damping * reply(s);
                    shift = std::max(shift, std::abs(next - x(s, i)));
                    x(s, i) = next;
                }
            }
            if (shift < 0.01 * config.tolerance) break;
        }

        Eigen::VectorXd excess(sbar);
        for (int s = 0; s < sbar; ++s) excess(s) = x.row(s).sum() - wbar(s);
        excess_norm = (excess.cwiseQuotient(wbar)).cwiseAbs().maxCoeff();
        if (excess_norm < config.tolerance) {
            EquilibriumSolution sol;
            const double scale = prices(0);
            sol.prices = prices / scale;
            sol.prices(0) = 1.0;
            sol.mu = mu / scale;
            sol.allocation = x;
            sol.effective.resize(sbar, n);
            for (int s = 0; s < sbar; ++s) {
                const auto& g = economy.goods[s];
                for (int i = 0; i < n; ++i)
                    sol.effective(s, i) = x(s, i) + g.phi * g.network.row(i).dot(x.row(s));
            }
            sol.utilities = allocation_utilities(economy, sol.allocation);
            sol.shadow = sol.mu.cwiseInverse();
            sol.interior = sol.allocation.minCoeff() > 1e-12;
            sol.unique = false;  // the oracle does not assess uniqueness
            return sol;
        }
        for (int s = 0; s < sbar; ++s)
            prices(s) = std::max(config.price_floor, prices(s) * std::exp(config.price_step * excess(s) / wbar(s)));
        prices /= prices(0);
    }
    throw Error(ErrorCode::no_convergence,
                "price adjustment did not converge (final relative excess demand " +
                    format_double(excess_norm) + ")");
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v, double total) {
    const int n = static_cast<int>(v.size());
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumulative = 0.0, theta = 0.0;
    for (int j = 0; j < n; ++j) {
        cumulative += u[static_cast<size_t>(j)];
        const double candidate = (cumulative - total) / (j + 1);
        if (u[static_cast<size_t>(j)] - candidate > 0.0) theta = candidate;
    }
    return (v.array() - theta).cwiseMax(0.0);
}

PlannerResult numeric_planner(const MultiplexEconomy& economy, const Eigen::VectorXd& theta,
                              const PlannerConfig& config) {
    validate_structure(economy);
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();
    if (theta.size() != n)
        throw Error(ErrorCode::dimension_mismatch, "theta length must equal consumer count");
    for (int i = 0; i < n; ++i)
        if (!(theta(i) > 0.0))
            throw Error(ErrorCode::validation_error, "theta must be strictly positive");

    Eigen::VectorXd wbar(sbar);
    Eigen::MatrixXd x(sbar, n);
    for (int s = 0; s < sbar; ++s) {
        wbar(s) = economy.goods[s].aggregate_endowment();
        x.row(s).setConstant(wbar(s) / n);
    }

    const auto value_of = [&](const Eigen::MatrixXd& alloc) -> double {
        const Eigen::VectorXd u = allocation_utilities(economy, alloc);
        double v = theta.dot(u);
        return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
    };
    const auto gradient_of = [&](const Eigen::MatrixXd& alloc) {
        // d/dx^s_i of sum_j theta_j u_j = alpha^s [ (I + phi G')(theta ./ q^s) ]_i
        Eigen::MatrixXd grad(sbar, n);
        for (int s = 0; s < sbar; ++s) {
            const auto& g = economy.goods[s];
            Eigen::VectorXd q(n);
            for (int i = 0; i < n; ++i) q(i) = alloc(s, i) + g.phi * g.network.row(i).dot(alloc.row(s));
            const Eigen::VectorXd ratio = theta.cwiseQuotient(q);
            grad.row(s) = (g.alpha * (ratio + g.phi * (g.network.transpose() * ratio))).transpose();
        }
        return grad;
    };

    double value = value_of(x);
    double step = config.step;
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        const Eigen::MatrixXd grad = gradient_of(x);

        // Stationarity: displacement of a unit projected step at the base step size.
        Eigen::MatrixXd probe(sbar, n);
        for (int s = 0; s < sbar; ++s)
            probe.row(s) = project_to_simplex(x.row(s).transpose() + config.step * grad.row(s).transpose(),
                                              wbar(s)).transpose();
        if ((probe - x).cwiseAbs().maxCoeff() <= config.tolerance * config.step) break;

        bool moved = false;
        for (int backtrack = 0; backtrack < 60; ++backtrack) {
            Eigen::MatrixXd trial(sbar, n);
            for (int s = 0; s < sbar; ++s)
                trial.row(s) =
                    project_to_simplex(x.row(s).transpose() + step * grad.row(s).transpose(), wbar(s)).transpose();
            const double trial_value = value_of(trial);
            if (trial_value > value) {
                x = std::move(trial);
                value = trial_value;
                step = std::min(step * 1.25, 1.0);
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    if (iter >= config.max_iterations)
        throw Error(ErrorCode::no_convergence, "planner ascent hit the iteration cap");
    return {std::move(x), value, iter};
}

SimplexMinResult minimize_on_simplex(int dimension,
                                     const std::function<double(const Eigen::VectorXd&)>& objective,
                                     const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
                                     const SimplexMinConfig& config) {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(dimension, 1.0 / dimension);
    double value = objective(x);
    double step = config.step;
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        const Eigen::VectorXd grad = gradient(x);
        const Eigen::VectorXd probe = project_to_simplex(x - config.step * grad, 1.0);
        if ((probe - x).cwiseAbs().maxCoeff() <= config.tolerance * config.step) break;
        bool moved = false;
        for (int backtrack = 0; backtrack < 60; ++backtrack) {
            const Eigen::VectorXd trial = project_to_simplex(x - step * grad, 1.0);
            const double trial_value = objective(trial);
            if (std::isfinite(trial_value) && trial_value < value) {
                x = trial;
                value = trial_value;
                step = std::min(step * 1.25, 10.0);
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return {std::move(x), value, iter};
}

namespace {

MultiplexEconomy shifted_economy(const MultiplexEconomy& economy, const Perturbation& pert, double h) {
    MultiplexEconomy shifted = economy;
    switch (pert.kind) {
        case Perturbation::Kind::endowment:
            for (int s = 0; s < economy.good_count(); ++s) shifted.goods[s].endowments += h * pert.tau[s];
            break;
        case Perturbation::Kind::preference:
            for (int s = 0; s < economy.good_count(); ++s) shifted.goods[s].alpha += h * pert.preference_tau(s);
            break;
        case Perturbation::Kind::network:
            for (int s = 0; s < economy.good_count(); ++s) shifted.goods[s].network += h * pert.gamma[s];
            break;
        case Perturbation::Kind::phi:
            for (int s = 0; s < economy.good_count(); ++s) shifted.goods[s].phi += h * pert.dphi(s);
            break;
    }
    return shifted;
}

} // namespace

DerivativeReport finite_difference_check(const MultiplexEconomy& economy, const Perturbation& pert, double h) {
    DerivativeReport report;
    report.analytic = perturb(economy, pert);

    const EquilibriumSolution up = solve_equilibrium(shifted_economy(economy, pert, +h));
    const EquilibriumSolution dn = solve_equilibrium(shifted_economy(economy, pert, -h));
    const int sbar = economy.good_count();
    const int n = economy.consumer_count();

    report.price_log_derivative.resize(sbar);
    for (int s = 0; s < sbar; ++s)
        report.price_log_derivative(s) = (std::log(up.prices(s)) - std::log(dn.prices(s))) / (2.0 * h);
    report.utility_derivative = (up.utilities - dn.utilities) / (2.0 * h);
    report.consumption_log_derivative.resize(sbar, n);
    for (int s = 0; s < sbar; ++s)
        for (int i = 0; i < n; ++i)
            report.consumption_log_derivative(s, i) =
                (std::log(up.allocation(s, i)) - std::log(dn.allocation(s, i))) / (2.0 * h);

    double err = 0.0;
    const auto rel = [](double a, double f) { return std::abs(a - f) / std::max({1.0, std::abs(a), std::abs(f)}); };
    for (int s = 0; s < sbar; ++s) {
        err = std::max(err, rel(report.analytic.price_log_derivative(s), report.price_log_derivative(s)));
        for (int i = 0; i < n; ++i)
            err = std::max(err, rel(report.analytic.consumption_log_derivative(s, i),
                                    report.consumption_log_derivative(s, i)));
    }
    for (int i = 0; i < n; ++i)
        err = std::max(err, rel(report.analytic.utility_derivative(i), report.utility_derivative(i)));
    report.max_rel_error = err;
    return report;
}

double equilibrium_curve_y(TextbookExample example, double phi, double x) {
    if (!(phi > 0.0 && phi < 1.0))
        throw Error(ErrorCode::domain_error, "phi must lie in (0,1)");
    if (x < 0.0 || x > 2.0) throw Error(ErrorCode::domain_error, "x must lie in [0,2]");
    switch (example) {
        case TextbookExample::I:
            if (x <= 2.0 * phi / (1.0 + phi)) return 0.0;
            return 2.0 * ((1.0 + phi) * x - 2.0 * phi) / (2.0 * (1.0 - phi) + phi * x);
        case TextbookExample::II:
            if (x <= 2.0 * phi / (1.0 + phi)) return 0.0;
            if (x >= 2.0 / (1.0 + phi)) return 2.0;
            return ((1.0 + phi) * x - 2.0 * phi) / (1.0 - phi);
        case TextbookExample::III:
            return x;
    }
    throw Error(ErrorCode::domain_error, "unknown example");
}

double contract_curve_y(TextbookExample example, double phi, double x) {
    if (!(phi > 0.0 && phi < 1.0))
        throw Error(ErrorCode::domain_error, "phi must lie in (0,1)");
    if (x < 0.0 || x > 2.0) throw Error(ErrorCode::domain_error, "x must lie in [0,2]");
    switch (example) {
        case TextbookExample::I:
            if (x <= 2.0 * phi) return 0.0;
            return (x - 2.0 * phi) / (1.0 - phi);
        case TextbookExample::II:
            return equilibrium_curve_y(TextbookExample::II, phi, x);
        case TextbookExample::III:
            return x;
    }
    throw Error(ErrorCode::domain_error, "unknown example");
}

CurveSample textbook_curves(TextbookExample example, double phi, std::span<const double> grid) {
    CurveSample sample;
    sample.example = example;
    sample.phi = phi;
    sample.x.assign(grid.begin(), grid.end());
    sample.y_equilibrium.reserve(grid.size());
    sample.y_contract.reserve(grid.size());
    for (double x : grid) {
        sample.y_equilibrium.push_back(equilibrium_curve_y(example, phi, x));
        sample.y_contract.push_back(contract_curve_y(example, phi, x));
    }
    return sample;
}

MultiplexEconomy random_economy(std::mt19937_64& rng, const RandomEconomyOptions& options) {
    std::uniform_int_distribution<int> n_dist(options.min_consumers, options.max_consumers);
    std::uniform_int_distribution<int> s_dist(options.min_goods, options.max_goods);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = n_dist(rng);
    const int sbar = s_dist(rng);

    MultiplexEconomy economy;
    for (int i = 0; i < n; ++i) economy.consumer_names.push_back(std::to_string(i + 1));

    Eigen::VectorXd alphas(sbar);
    for (int s = 0; s < sbar; ++s) alphas(s) = 0.2 + unit(rng);
    alphas /= alphas.sum();

    Eigen::MatrixXd shared = Eigen::MatrixXd::Zero(n, n);
    if (options.force_identical_layers) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && unit(rng) < options.link_density) shared(i, j) = 0.2 + unit(rng);
    }

    for (int s = 0; s < sbar; ++s) {
        GoodLayer layer;
        layer.name = "g" + std::to_string(s + 1);
        layer.alpha = alphas(s);
        layer.endowments.resize(n);
        for (int i = 0; i < n; ++i) layer.endowments(i) = 0.3 + 1.7 * unit(rng);
        if (options.force_identical_layers) {
            layer.network = shared;
        } else if (options.force_regular) {
            // circulant: equal indegree by construction
            layer.network = Eigen::MatrixXd::Zero(n, n);
            const double w = 0.2 + unit(rng);
            const int offsets = n >= 3 ? 2 : 1;
            for (int k = 1; k <= offsets; ++k)
                for (int i = 0; i < n; ++i) layer.network(i, (i + k) % n) = w;
            if (n == 1) layer.network.setZero();
        } else {
            layer.network = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j && unit(rng) < options.link_density) layer.network(i, j) = 0.2 + unit(rng);
        }
        economy.goods.push_back(std::move(layer));
    }

    const double eta_min = economy.min_share();
    const double gbar = economy.max_link_weight();
    const double bound = gbar > 0.0 && n > 1 ? eta_min / ((n + 1) * gbar) : 0.5;
    if (options.force_identical_layers) {
        const double phi = options.phi_scale * bound * (2.0 * unit(rng) - 1.0);
        for (auto& g : economy.goods) g.phi = phi;
    } else {
        for (auto& g : economy.goods) g.phi = options.phi_scale * bound * (2.0 * unit(rng) - 1.0);
    }
    validate_structure(economy);
    return economy;
}

Perturbation random_perturbation(std::mt19937_64& rng, const MultiplexEconomy& economy, Perturbation::Kind kind,
                                 bool pure_redistribution) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();
    switch (kind) {
        case Perturbation::Kind::endowment: {
            std::vector<Eigen::VectorXd> tau;
            for (int s = 0; s < sbar; ++s) {
                Eigen::VectorXd v(n);
                for (int i = 0; i < n; ++i) v(i) = normal(rng);
                if (pure_redistribution) v.array() -= v.mean();
                tau.push_back(std::move(v));
            }
            return Perturbation::endowment(std::move(tau));
        }
        case Perturbation::Kind::preference: {
            Eigen::VectorXd tau(sbar);
            if (sbar == 1) {
                tau.setZero();
            } else {
                for (int s = 0; s < sbar; ++s) tau(s) = normal(rng);
                tau.array() -= tau.mean();
                tau *= 0.05;
            }
            return Perturbation::preference(std::move(tau));
        }
        case Perturbation::Kind::network: {
            std::vector<Eigen::MatrixXd> gamma;
            for (int s = 0; s < sbar; ++s) {
                Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (i != j && economy.goods[s].network(i, j) > 0.0) m(i, j) = normal(rng);
                gamma.push_back(std::move(m));
            }
            return Perturbation::network(std::move(gamma));
        }
        case Perturbation::Kind::phi: {
            Eigen::VectorXd dphi(sbar);
            for (int s = 0; s < sbar; ++s) dphi(s) = 0.01 * normal(rng);
            return Perturbation::phi(std::move(dphi));
        }
    }
    throw Error(ErrorCode::validation_error, "unknown perturbation kind");
}

} // namespace mpxeq
