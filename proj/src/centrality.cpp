#include "mpxeq/centrality.hpp"
#include "mpxeq/jsonio.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace mpxeq {

namespace {
constexpr double kConditionLimit = 1e12;
} // namespace

double cosine_dissimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    double c = a.dot(b) / (na * nb);
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return 1.0 - c;
}

LayerInfluence leontief_inverse(const GoodLayer& layer, int good_index) {
    const int n = static_cast<int>(layer.endowments.size());
    LayerInfluence result;
    result.good = good_index;

    if (layer.phi == 0.0 || layer.network.isZero(0.0)) {
        result.M = Eigen::MatrixXd::Identity(n, n);
        result.tilde_b = Eigen::VectorXd::Ones(n);
        result.spectral_ok = true;
        return result;
    }

    const Eigen::MatrixXd scaled = layer.phi * layer.network;

    // fast path: row-sum bound guarantees the spectrum stays right of -1
    if (scaled.cwiseAbs().rowwise().sum().maxCoeff() < 1.0) {
        result.spectral_ok = true;
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> eig(scaled, /*computeEigenvectors=*/false);
        double min_real = 0.0;
        for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k)
            min_real = std::min(min_real, eig.eigenvalues()(k).real());
        result.spectral_ok = 1.0 + min_real > 0.0;
    }

    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) + scaled;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rc = lu.rcond();
    if (!(rc > 1.0 / kConditionLimit))
        throw Error(ErrorCode::singular_layer,
                    "layer influence matrix is numerically singular (rcond " + format_double(rc) + ")",
                    "goods[" + std::to_string(good_index) + "]");
    result.M = lu.solve(Eigen::MatrixXd::Identity(n, n));
    result.tilde_b = result.M.transpose() * Eigen::VectorXd::Ones(n);
    return result;
}

std::vector<LayerInfluence> layer_influences(const MultiplexEconomy& economy) {
    std::vector<LayerInfluence> out;
    out.reserve(economy.goods.size());
    for (int s = 0; s < economy.good_count(); ++s) out.push_back(leontief_inverse(economy.goods[s], s));
    return out;
}

KatzResult katz_centralities(const LayerInfluence& influence, const Eigen::VectorXd& z) {
    if (z.size() != influence.M.rows())
        throw Error(ErrorCode::dimension_mismatch, "weight vector length must equal consumer count");
    KatzResult r;
    r.b = influence.M * z;
    r.aggregate = r.b.sum();
    r.tilde_b = influence.tilde_b;
    return r;
}

ParallelVerdict check_parallel(const MultiplexEconomy& economy) {
    return check_parallel(economy, layer_influences(economy));
}

ParallelVerdict check_parallel(const MultiplexEconomy& economy,
                               const std::vector<LayerInfluence>& influences,
                               double tolerance) {
    const int n = economy.consumer_count();
    const int sbar = economy.good_count();
    ParallelVerdict verdict;
    verdict.tolerance = tolerance;

    verdict.regular.resize(sbar);
    for (int s = 0; s < sbar; ++s) {
        const Eigen::VectorXd indegree = economy.goods[s].network.transpose() * Eigen::VectorXd::Ones(n);
        verdict.regular[s] =
            indegree.norm() == 0.0 || cosine_dissimilarity(indegree, Eigen::VectorXd::Ones(n)) <= tolerance;
    }
    for (int s = 1; s < sbar && verdict.identical_layers; ++s) {
        const Eigen::MatrixXd diff =
            economy.goods[s].phi * economy.goods[s].network - economy.goods[0].phi * economy.goods[0].network;
        if (diff.cwiseAbs().maxCoeff() > 1e-12) verdict.identical_layers = false;
    }

    double worst = 0.0;
    for (int s = 0; s < sbar; ++s) {
        for (int t = s + 1; t < sbar; ++t) {
            const double d = cosine_dissimilarity(influences[s].tilde_b, influences[t].tilde_b);
            if (d > worst) {
                worst = d;
                verdict.worst_s = s;
                verdict.worst_t = t;
            }
        }
    }
    verdict.dissimilarity = worst;
    verdict.parallel = worst <= tolerance;
    return verdict;
}

Eigen::VectorXd influence_centrality(const MultiplexEconomy& economy, const Eigen::MatrixXd& H, int good) {
    if (good < 0 || good >= economy.good_count())
        throw Error(ErrorCode::dimension_mismatch, "good index out of range");
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(H.transpose());
    if (!(lu.rcond() > 1e-12))
        throw Error(ErrorCode::singular_h, "H is numerically singular");
    const LayerInfluence infl = leontief_inverse(economy.goods[good], good);
    return lu.solve(infl.tilde_b);
}

} // namespace mpxeq
