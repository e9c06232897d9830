#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mpxeq {

enum class LpRelation { less_equal, equal, greater_equal };

struct LpResult {
    bool optimal = false;
    bool feasible = false;
    double value = 0.0;
    Eigen::VectorXd x;
};

// Dense two-phase simplex (Bland's rule) for the small feasibility programs
// this toolkit needs: maximize c'x subject to A x {<=,=,>=} b and
// lb <= x <= ub. Problems here have at most a few dozen rows.
LpResult solve_lp(const Eigen::VectorXd& c,
                  const Eigen::MatrixXd& A,
                  const std::vector<LpRelation>& relations,
                  const Eigen::VectorXd& b,
                  const Eigen::VectorXd& lower,
                  const Eigen::VectorXd& upper);

} // namespace mpxeq
