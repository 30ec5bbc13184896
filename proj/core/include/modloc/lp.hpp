#pragma once

// Small dense linear programs: maximize c^T x subject to A x <= b, x free.
// Two-phase tableau simplex with Bland's rule; intended for a few dozen rows.

#include <Eigen/Dense>

namespace modloc {

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Eigen::VectorXd x;
};

LpResult lp_maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                     double eps = 1e-10);

bool lp_feasible(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double eps = 1e-10);

}  // namespace modloc
