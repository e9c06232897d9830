#include "mpxeq/compstat.hpp"

#include <cmath>

namespace mpxeq {

Perturbation Perturbation::endowment(std::vector<Eigen::VectorXd> tau) {
    Perturbation p;
    p.kind = Kind::endowment;
    p.tau = std::move(tau);
    return p;
}

Perturbation Perturbation::preference(Eigen::VectorXd tau) {
    Perturbation p;
    p.kind = Kind::preference;
    p.preference_tau = std::move(tau);
    return p;
}

Perturbation Perturbation::network(std::vector<Eigen::MatrixXd> gamma) {
    Perturbation p;
    p.kind = Kind::network;
    p.gamma = std::move(gamma);
    return p;
}

Perturbation Perturbation::phi(Eigen::VectorXd dphi) {
    Perturbation p;
    p.kind = Kind::phi;
    p.dphi = std::move(dphi);
    return p;
}

namespace {

void check_payload(const MultiplexEconomy& economy, const Perturbation& pert) {
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();
    switch (pert.kind) {
        case Perturbation::Kind::endowment:
            if (static_cast<int>(pert.tau.size()) != sbar)
                throw Error(ErrorCode::dimension_mismatch, "endowment payload needs one vector per good");
            for (const auto& v : pert.tau)
                if (v.size() != n)
                    throw Error(ErrorCode::dimension_mismatch, "endowment direction length must equal n");
            break;
        case Perturbation::Kind::preference: {
            if (pert.preference_tau.size() != sbar)
                throw Error(ErrorCode::dimension_mismatch, "preference payload length must equal good count");
            if (std::abs(pert.preference_tau.sum()) > 1e-12)
                throw Error(ErrorCode::validation_error, "preference direction must sum to zero",
                            "preference_tau");
            break;
        }
        case Perturbation::Kind::network:
            if (static_cast<int>(pert.gamma.size()) != sbar)
                throw Error(ErrorCode::dimension_mismatch, "network payload needs one matrix per good");
            for (int s = 0; s < sbar; ++s) {
                if (pert.gamma[s].rows() != n || pert.gamma[s].cols() != n)
                    throw Error(ErrorCode::dimension_mismatch, "network direction must be n x n");
                for (int i = 0; i < n; ++i)
                    if (pert.gamma[s](i, i) != 0.0)
                        throw Error(ErrorCode::validation_error, "network direction diagonal must be zero",
                                    "gamma[" + std::to_string(s) + "]");
            }
            break;
        case Perturbation::Kind::phi:
            if (pert.dphi.size() != sbar)
                throw Error(ErrorCode::dimension_mismatch, "phi payload length must equal good count");
            break;
    }
}

} // namespace

PerturbationResult perturb(const MultiplexEconomy& economy, const Perturbation& pert) {
    check_payload(economy, pert);
    EffectiveEndowment eff = solve_effective_endowment(economy);
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();
    if (!eff.unique)
        throw Error(ErrorCode::rank_deficient,
                    "the rank condition fails; marginal responses are not well defined");

    // Reference objects at l = 0.
    std::vector<double> wbar(static_cast<size_t>(sbar));
    std::vector<Eigen::VectorXd> eta(static_cast<size_t>(sbar));
    Eigen::VectorXd prices(sbar), aggregate_b(sbar);
    std::vector<Eigen::VectorXd> b_vec(static_cast<size_t>(sbar));
    for (int s = 0; s < sbar; ++s) {
        const auto& g = economy.goods[s];
        wbar[s] = g.aggregate_endowment();
        eta[s] = g.endowment_shares();
        b_vec[s] = eff.sys.layers[s].M * eff.mu;
        aggregate_b(s) = b_vec[s].sum();
        prices(s) = g.alpha * aggregate_b(s) / wbar[s];
    }

    // Right-hand side for mu_dot and the direct (non-mu) pieces per kind.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    std::vector<Eigen::VectorXd> mdot_mu(static_cast<size_t>(sbar), Eigen::VectorXd::Zero(n));
    const Eigen::RowVectorXd ones_row = Eigen::RowVectorXd::Ones(n);

    PerturbationResult out;
    switch (pert.kind) {
        case Perturbation::Kind::endowment:
            for (int s = 0; s < sbar; ++s)
                rhs += prices(s) * (pert.tau[s] - eta[s] * pert.tau[s].sum());
            break;
        case Perturbation::Kind::preference:
            for (int s = 0; s < sbar; ++s)
                rhs -= pert.preference_tau(s) *
                       ((Eigen::MatrixXd::Identity(n, n) - eta[s] * ones_row) * b_vec[s]);
            break;
        case Perturbation::Kind::network:
        case Perturbation::Kind::phi:
            for (int s = 0; s < sbar; ++s) {
                const auto& M = eff.sys.layers[s].M;
                if (pert.kind == Perturbation::Kind::network)
                    mdot_mu[s] = -economy.goods[s].phi * (M * (pert.gamma[s] * (M * eff.mu)));
                else
                    mdot_mu[s] = -pert.dphi(s) * (M * (economy.goods[s].network * (M * eff.mu)));
                rhs -= economy.goods[s].alpha *
                       ((Eigen::MatrixXd::Identity(n, n) - eta[s] * ones_row) * mdot_mu[s]);
            }
            break;
    }

    out.mu0 = eff.mu;
    out.mu_dot = eff.sys.H.partialPivLu().solve(rhs);

    Eigen::VectorXd R(sbar);  // d/dl ln b^s(mu(l)) including the direct network piece
    std::vector<Eigen::VectorXd> numerators(static_cast<size_t>(sbar));
    for (int s = 0; s < sbar; ++s) {
        numerators[s] = eff.sys.layers[s].M * out.mu_dot + mdot_mu[s];
        R(s) = numerators[s].sum() / aggregate_b(s);
    }

    out.price_log_derivative.resize(sbar);
    out.utility_derivative = out.mu_dot.cwiseQuotient(out.mu0);
    out.consumption_log_derivative.resize(sbar, n);
    double common = 0.0;
    for (int s = 0; s < sbar; ++s) common += economy.goods[s].alpha * R(s);
    out.utility_derivative.array() -= common;

    switch (pert.kind) {
        case Perturbation::Kind::endowment: {
            out.price_redistribution.resize(sbar);
            out.price_aggregate.resize(sbar);
            out.welfare_income = out.mu_dot.cwiseQuotient(out.mu0);
            out.welfare_price = common;
            out.welfare_aggregate = 0.0;
            out.pure_redistribution = true;
            for (int s = 0; s < sbar; ++s) {
                const double agg = pert.tau[s].sum() / wbar[s];
                if (std::abs(pert.tau[s].sum()) > 1e-12) out.pure_redistribution = false;
                out.welfare_aggregate += economy.goods[s].alpha * agg;
                out.price_redistribution(s) = R(s) - R(0);
                out.price_aggregate(s) = -agg + pert.tau[0].sum() / wbar[0];
                out.price_log_derivative(s) = out.price_redistribution(s) + out.price_aggregate(s);
                for (int i = 0; i < n; ++i)
                    out.consumption_log_derivative(s, i) = numerators[s](i) / b_vec[s](i) - R(s) + agg;
            }
            out.utility_derivative.array() += out.welfare_aggregate;
            break;
        }
        case Perturbation::Kind::preference: {
            for (int s = 0; s < sbar; ++s) {
                out.price_log_derivative(s) = R(s) - R(0) + pert.preference_tau(s) / economy.goods[s].alpha -
                                              pert.preference_tau(0) / economy.goods[0].alpha;
                for (int i = 0; i < n; ++i)
                    out.consumption_log_derivative(s, i) = numerators[s](i) / b_vec[s](i) - R(s);
            }
            for (int i = 0; i < n; ++i)
                for (int s = 0; s < sbar; ++s)
                    out.utility_derivative(i) +=
                        pert.preference_tau(s) * std::log(wbar[s] * out.mu0(i) / aggregate_b(s));
            break;
        }
        case Perturbation::Kind::network:
        case Perturbation::Kind::phi: {
            for (int s = 0; s < sbar; ++s) {
                out.price_log_derivative(s) = R(s) - R(0);
                for (int i = 0; i < n; ++i)
                    out.consumption_log_derivative(s, i) = numerators[s](i) / b_vec[s](i) - R(s);
            }
            break;
        }
    }
    return out;
}

TransferSign transfer_price_sign(const MultiplexEconomy& economy, int from, int to, int on_good, int watch_good) {
    const int n = economy.consumer_count();
    if (from < 0 || from >= n || to < 0 || to >= n)
        throw Error(ErrorCode::dimension_mismatch, "consumer index out of range");
    if (on_good < 0 || on_good >= economy.good_count())
        throw Error(ErrorCode::dimension_mismatch, "good index out of range");
    EffectiveEndowment eff = solve_effective_endowment(economy);
    if (!eff.unique)
        throw Error(ErrorCode::rank_deficient,
                    "the rank condition fails; marginal responses are not well defined");
    (void)on_good;  // the sign depends only on the watched good's centrality

    const Eigen::VectorXd c = influence_centrality(economy, eff.sys.H, watch_good);
    TransferSign result;
    result.c_from = c(from);
    result.c_to = c(to);
    const double diff = c(to) - c(from);
    result.margin = std::abs(diff);
    const double neutral = 1e-10 * std::max(1.0, c.cwiseAbs().maxCoeff());
    result.sign = result.margin <= neutral ? 0 : (diff > 0 ? 1 : -1);
    return result;
}

} // namespace mpxeq
