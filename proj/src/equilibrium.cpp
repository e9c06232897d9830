#include "mpxeq/equilibrium.hpp"
#include "mpxeq/jsonio.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace mpxeq {

namespace {
constexpr double kInteriorFloor = 1e-12;
constexpr double kRankTol = 1e-10;  // sigma_k > tol * sigma_1 counts toward rank
} // namespace

SystemMatrices build_system(const MultiplexEconomy& economy) {
    validate_structure(economy);
    const int n = economy.consumer_count();
    SystemMatrices sys;
    sys.layers = layer_influences(economy);

    sys.Mbar = Eigen::MatrixXd::Zero(n, n);
    const Eigen::RowVectorXd ones_row = Eigen::RowVectorXd::Ones(n);
    for (int s = 0; s < economy.good_count(); ++s) {
        const auto& g = economy.goods[s];
        const Eigen::VectorXd eta = g.endowment_shares();
        sys.Mbar += g.alpha * ((Eigen::MatrixXd::Identity(n, n) - eta * ones_row) * sys.layers[s].M);
    }
    const Eigen::VectorXd eta1 = economy.goods[0].endowment_shares();
    sys.H = sys.Mbar + economy.goods[0].alpha * (eta1 * (ones_row * sys.layers[0].M));

    Eigen::JacobiSVD<Eigen::MatrixXd> svd_mbar(sys.Mbar);
    const auto& sv = svd_mbar.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > kRankTol * sv(0)) ++rank;
    sys.rank_Mbar = rank;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd_h(sys.H);
    const auto& sh = svd_h.singularValues();
    sys.cond_H = sh(sh.size() - 1) > 0.0 ? sh(0) / sh(sh.size() - 1) : std::numeric_limits<double>::infinity();
    return sys;
}

EffectiveEndowment solve_effective_endowment(const MultiplexEconomy& economy) {
    EffectiveEndowment out;
    out.sys = build_system(economy);
    const int n = economy.consumer_count();
    out.unique = out.sys.rank_Mbar == n - 1;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(out.sys.H);
    if (!(lu.rcond() > 1e-12))
        throw Error(ErrorCode::singular_h,
                    "H is numerically singular (cond " + format_double(out.sys.cond_H) + "); "
                    "the rank condition fails");
    out.mu = lu.solve(economy.goods[0].endowments);
    for (int i = 0; i < n; ++i)
        if (!(out.mu(i) > 0.0))
            throw Error(ErrorCode::non_positive_mu,
                        "effective endowment has a non-positive entry; spillovers violate the "
                        "interiority assumptions",
                        "mu[" + std::to_string(i) + "]");
    return out;
}

Eigen::VectorXd effective_endowment_nullspace(const SystemMatrices& sys) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.Mbar, Eigen::ComputeFullV);
    Eigen::VectorXd v = svd.matrixV().col(sys.Mbar.cols() - 1);
    if (v.sum() < 0.0) v = -v;
    return v;
}

EquilibriumSolution solve_equilibrium(const MultiplexEconomy& economy) {
    EffectiveEndowment eff = solve_effective_endowment(economy);
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();

    EquilibriumSolution sol;
    sol.unique = eff.unique;
    sol.mu = eff.mu;
    sol.prices.resize(sbar);
    sol.allocation.resize(sbar, n);
    sol.effective.resize(sbar, n);

    for (int s = 0; s < sbar; ++s) {
        const auto& g = economy.goods[s];
        const Eigen::VectorXd b = eff.sys.layers[s].M * sol.mu;
        const double aggregate = b.sum();
        const double wbar = g.aggregate_endowment();
        sol.prices(s) = g.alpha * aggregate / wbar;
        sol.allocation.row(s) = (wbar / aggregate) * b.transpose();
        sol.effective.row(s) = (wbar / aggregate) * sol.mu.transpose();
    }

    // mu = H^-1 w^1 already enforces p^1 = 1 up to roundoff; rescale so the
    // normalization is exact in floating point.
    const double scale = sol.prices(0);
    sol.mu /= scale;
    sol.prices /= scale;
    sol.prices(0) = 1.0;

    for (int s = 0; s < sbar; ++s)
        for (int i = 0; i < n; ++i)
            if (!(sol.allocation(s, i) > kInteriorFloor))
                throw Error(ErrorCode::non_interior_equilibrium,
                            "closed form is only valid for interior equilibria; allocation cell is "
                            "non-positive (" + format_double(sol.allocation(s, i)) + ")",
                            "allocation[" + std::to_string(s) + "][" + std::to_string(i) + "]");
    sol.interior = true;

    sol.utilities = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < sbar; ++s)
        for (int i = 0; i < n; ++i)
            sol.utilities(i) += economy.goods[s].alpha * std::log(sol.effective(s, i));
    sol.shadow = sol.mu.cwiseInverse();
    return sol;
}

ResidualReport verify_equilibrium(const MultiplexEconomy& economy, const EquilibriumSolution& candidate) {
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();
    if (candidate.allocation.rows() != sbar || candidate.allocation.cols() != n ||
        candidate.prices.size() != sbar || candidate.mu.size() != n)
        throw Error(ErrorCode::dimension_mismatch, "candidate dimensions do not match the economy");

    ResidualReport report;
    report.min_allocation = candidate.allocation.minCoeff();

    for (int s = 0; s < sbar; ++s) {
        const double wbar = economy.goods[s].aggregate_endowment();
        report.market_clearing =
            std::max(report.market_clearing, std::abs(candidate.allocation.row(s).sum() - wbar) / wbar);
    }

    const Eigen::MatrixXd w = economy.endowment_matrix();
    for (int i = 0; i < n; ++i) {
        const double spend = candidate.prices.dot(candidate.allocation.col(i));
        const double income = candidate.prices.dot(w.col(i));
        report.budget = std::max(report.budget, std::abs(spend - income) / std::max(1e-300, std::abs(income)));
    }

    // First-order conditions. For interior cells alpha^s mu_i / p^s must equal
    // effective consumption; at a corner (x = 0) only the inequality
    // alpha^s mu_i / p^s <= q^s_i has to hold.
    for (int s = 0; s < sbar; ++s) {
        const auto& g = economy.goods[s];
        for (int i = 0; i < n; ++i) {
            const double q = candidate.allocation(s, i) + g.phi * g.network.row(i).dot(candidate.allocation.row(s));
            const double demand = g.alpha * candidate.mu(i) / candidate.prices(s);
            const double scale = std::max({1e-300, std::abs(q), std::abs(demand)});
            const double residual = (candidate.allocation(s, i) > 1e-9)
                                        ? std::abs(demand - q) / scale
                                        : std::max(0.0, demand - q) / scale;
            report.foc = std::max(report.foc, residual);
        }
    }

    report.pass = report.market_clearing <= 1e-8 && report.budget <= 1e-8 && report.foc <= 1e-8 &&
                  report.min_allocation >= -1e-12;
    return report;
}

Eigen::VectorXd exogenous_price_mu(const MultiplexEconomy& economy, const Eigen::VectorXd& incomes) {
    validate_structure(economy);
    const int n = economy.consumer_count();
    if (incomes.size() != n)
        throw Error(ErrorCode::dimension_mismatch, "income vector length must equal consumer count");
    Eigen::MatrixXd aggregate = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < economy.good_count(); ++s)
        aggregate += economy.goods[s].alpha * leontief_inverse(economy.goods[s], s).M;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(aggregate);
    if (!(lu.rcond() > 1e-12))
        throw Error(ErrorCode::singular_aggregate, "sum of weighted influence matrices is singular");
    return lu.solve(incomes);
}

Eigen::VectorXd allocation_utilities(const MultiplexEconomy& economy, const Eigen::MatrixXd& allocation) {
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();
    if (allocation.rows() != sbar || allocation.cols() != n)
        throw Error(ErrorCode::dimension_mismatch, "allocation must be s̄ x n");
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        for (int s = 0; s < sbar; ++s) {
            const auto& g = economy.goods[s];
            const double q = allocation(s, i) + g.phi * g.network.row(i).dot(allocation.row(s));
            if (q <= 0.0) {
                u(i) = -std::numeric_limits<double>::infinity();
                break;
            }
            u(i) += g.alpha * std::log(q);
        }
    }
    return u;
}

} // namespace mpxeq
