#include "mpxeq/linprog.hpp"

#include <cmath>
#include <limits>

#include "mpxeq/errors.hpp"

namespace mpxeq {

namespace {

constexpr double kTol = 1e-9;

struct Tableau {
    Eigen::MatrixXd A;  // m x N, kept as B^-1 A by pivoting
    Eigen::VectorXd b;  // m, kept as B^-1 b
    std::vector<int> basis;

    void pivot(int row, int col) {
        const double pivot_value = A(row, col);
        A.row(row) /= pivot_value;
        b(row) /= pivot_value;
        A(row, col) = 1.0;
        for (int i = 0; i < A.rows(); ++i) {
            if (i == row || A(i, col) == 0.0) continue;
            const double f = A(i, col);
            A.row(i) -= f * A.row(row);
            b(i) -= f * b(row);
            A(i, col) = 0.0;
        }
        basis[static_cast<size_t>(row)] = col;
    }
};

// Bland's rule simplex on the current tableau; maximizes cost over the
// allowed columns. Returns false on unboundedness.
bool run_simplex(Tableau& t, const Eigen::VectorXd& cost, const std::vector<bool>& allowed) {
    const int m = static_cast<int>(t.A.rows());
    const int N = static_cast<int>(t.A.cols());
    for (int iter = 0; iter < 20000; ++iter) {
        Eigen::VectorXd cb(m);
        for (int i = 0; i < m; ++i) cb(i) = cost(t.basis[static_cast<size_t>(i)]);
        int enter = -1;
        for (int j = 0; j < N; ++j) {
            if (!allowed[static_cast<size_t>(j)]) continue;
            const double reduced = cost(j) - cb.dot(t.A.col(j));
            if (reduced > kTol) {
                enter = j;
                break;  // Bland: smallest improving index
            }
        }
        if (enter < 0) return true;  // optimal

        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (t.A(i, enter) > kTol) {
                const double ratio = t.b(i) / t.A(i, enter);
                if (ratio < best_ratio - kTol ||
                    (ratio < best_ratio + kTol &&
                     (leave < 0 || t.basis[static_cast<size_t>(i)] < t.basis[static_cast<size_t>(leave)]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) return false;  // unbounded
        t.pivot(leave, enter);
    }
    return false;
}

} // namespace

LpResult solve_lp(const Eigen::VectorXd& c,
                  const Eigen::MatrixXd& A,
                  const std::vector<LpRelation>& relations,
                  const Eigen::VectorXd& b,
                  const Eigen::VectorXd& lower,
                  const Eigen::VectorXd& upper) {
    const int n = static_cast<int>(c.size());
    const int m0 = static_cast<int>(A.rows());
    if (A.cols() != n || b.size() != m0 || static_cast<int>(relations.size()) != m0 || lower.size() != n ||
        upper.size() != n)
        throw Error(ErrorCode::dimension_mismatch, "inconsistent LP dimensions");

    // Shift to y = x - lb >= 0 and turn finite upper bounds into rows.
    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    std::vector<LpRelation> rel;
    for (int i = 0; i < m0; ++i) {
        rows.emplace_back(A.row(i));
        rhs.push_back(b(i) - A.row(i).dot(lower));
        rel.push_back(relations[i]);
    }
    for (int j = 0; j < n; ++j) {
        if (std::isfinite(upper(j))) {
            Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
            r(j) = 1.0;
            rows.push_back(r);
            rhs.push_back(upper(j) - lower(j));
            rel.push_back(LpRelation::less_equal);
        }
    }
    const int m = static_cast<int>(rows.size());

    // Count slack/artificial columns.
    int nslack = 0, nart = 0;
    for (int i = 0; i < m; ++i) {
        double r = rhs[static_cast<size_t>(i)];
        LpRelation q = rel[static_cast<size_t>(i)];
        if (r < 0.0) q = (q == LpRelation::less_equal)   ? LpRelation::greater_equal
                         : (q == LpRelation::greater_equal) ? LpRelation::less_equal
                                                            : LpRelation::equal;
        if (q != LpRelation::equal) ++nslack;
        if (q != LpRelation::less_equal) ++nart;  // >= and = need artificials
    }
    const int N = n + nslack + nart;

    Tableau t;
    t.A = Eigen::MatrixXd::Zero(m, N);
    t.b = Eigen::VectorXd::Zero(m);
    t.basis.assign(static_cast<size_t>(m), -1);
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(N);
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(N);
    phase2.head(n) = c;
    std::vector<bool> is_artificial(static_cast<size_t>(N), false);

    int slack_at = n, art_at = n + nslack;
    for (int i = 0; i < m; ++i) {
        Eigen::RowVectorXd row = rows[static_cast<size_t>(i)];
        double r = rhs[static_cast<size_t>(i)];
        LpRelation q = rel[static_cast<size_t>(i)];
        if (r < 0.0) {
            row = -row;
            r = -r;
            q = (q == LpRelation::less_equal)   ? LpRelation::greater_equal
                : (q == LpRelation::greater_equal) ? LpRelation::less_equal
                                                   : LpRelation::equal;
        }
        t.A.row(i).head(n) = row;
        t.b(i) = r;
        if (q == LpRelation::less_equal) {
            t.A(i, slack_at) = 1.0;
            t.basis[static_cast<size_t>(i)] = slack_at++;
        } else {
            if (q == LpRelation::greater_equal) t.A(i, slack_at++) = -1.0;
            t.A(i, art_at) = 1.0;
            phase1(art_at) = -1.0;  // maximize -(sum of artificials)
            is_artificial[static_cast<size_t>(art_at)] = true;
            t.basis[static_cast<size_t>(i)] = art_at++;
        }
    }

    LpResult result;
    std::vector<bool> all(static_cast<size_t>(N), true);
    if (nart > 0) {
        if (!run_simplex(t, phase1, all)) return result;
        double infeasibility = 0.0;
        for (int i = 0; i < m; ++i)
            if (is_artificial[static_cast<size_t>(t.basis[static_cast<size_t>(i)])]) infeasibility += t.b(i);
        if (infeasibility > 1e-7) return result;  // infeasible
        // Drive any zero-valued artificial out of the basis.
        for (int i = 0; i < m; ++i) {
            if (!is_artificial[static_cast<size_t>(t.basis[static_cast<size_t>(i)])]) continue;
            int piv = -1;
            for (int j = 0; j < n + nslack; ++j)
                if (std::abs(t.A(i, j)) > 1e-7) {
                    piv = j;
                    break;
                }
            if (piv >= 0) t.pivot(i, piv);
            // else: redundant row; the artificial stays basic at zero
        }
    }
    result.feasible = true;

    std::vector<bool> allowed(static_cast<size_t>(N), true);
    for (int j = 0; j < N; ++j) allowed[static_cast<size_t>(j)] = !is_artificial[static_cast<size_t>(j)];
    if (!run_simplex(t, phase2, allowed)) return result;  // unbounded: feasible but not optimal

    result.optimal = true;
    result.x = lower;
    for (int i = 0; i < m; ++i) {
        const int j = t.basis[static_cast<size_t>(i)];
        if (j < n) result.x(j) += t.b(i);
    }
    result.value = c.dot(result.x);
    return result;
}

} // namespace mpxeq
