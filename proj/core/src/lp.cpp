#include "modloc/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace modloc {
namespace {

struct Tableau {
    Eigen::MatrixXd t;  // rows 0..m-1 constraints, row m objective; last column rhs
    std::vector<int> basis;
    int m = 0;
    int cols = 0;

    void pivot(int row, int col) {
        t.row(row) /= t(row, col);
        for (int r = 0; r <= m; ++r) {
            if (r == row) continue;
            const double f = t(r, col);
            if (f != 0.0) t.row(r) -= f * t.row(row);
        }
        basis[row] = col;
    }

    // Returns false when unbounded. Columns >= allowed are never entered.
    bool optimize(int allowed, double eps) {
        for (int iter = 0; iter < 50000; ++iter) {
            int enter = -1;
            for (int j = 0; j < allowed; ++j) {
                if (t(m, j) < -eps) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int r = 0; r < m; ++r) {
                const double a = t(r, enter);
                if (a <= eps) continue;
                const double ratio = t(r, cols) / a;
                if (ratio < best - 1e-14 ||
                    (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis[r] < basis[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
        return true;
    }
};

}  // namespace

LpResult lp_maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                     double eps) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    LpResult result;
    result.x = Eigen::VectorXd::Zero(n);
    if (m == 0) {
        if (c.cwiseAbs().maxCoeff() > eps) {
            result.status = LpStatus::Unbounded;
            result.value = std::numeric_limits<double>::infinity();
        } else {
            result.status = LpStatus::Optimal;
        }
        return result;
    }

    int n_art = 0;
    for (int i = 0; i < m; ++i) n_art += b(i) < 0.0 ? 1 : 0;
    const int structural = 2 * n + m;
    const int cols = structural + n_art;

    Tableau tab;
    tab.m = m;
    tab.cols = cols;
    tab.t = Eigen::MatrixXd::Zero(m + 1, cols + 1);
    tab.basis.assign(m, -1);
    int art = structural;
    for (int i = 0; i < m; ++i) {
        const double sgn = b(i) < 0.0 ? -1.0 : 1.0;
        tab.t.block(i, 0, 1, n) = sgn * a.row(i);
        tab.t.block(i, n, 1, n) = -sgn * a.row(i);
        tab.t(i, 2 * n + i) = sgn;
        tab.t(i, cols) = sgn * b(i);
        if (sgn < 0.0) {
            tab.t(i, art) = 1.0;
            tab.basis[i] = art++;
        } else {
            tab.basis[i] = 2 * n + i;
        }
    }

    if (n_art > 0) {
        // Phase 1: maximize -sum(artificials).
        for (int j = structural; j < cols; ++j) tab.t(m, j) = 1.0;
        for (int i = 0; i < m; ++i) {
            if (tab.basis[i] >= structural) tab.t.row(m) -= tab.t.row(i);
        }
        tab.optimize(cols, eps);
        const double scale = 1.0 + b.cwiseAbs().maxCoeff();
        if (tab.t(m, cols) < -1e-9 * scale) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        for (int i = 0; i < m; ++i) {
            if (tab.basis[i] < structural) continue;
            for (int j = 0; j < structural; ++j) {
                if (std::abs(tab.t(i, j)) > 1e-9) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
    }

    // Phase 2.
    tab.t.row(m).setZero();
    tab.t.block(m, 0, 1, n) = -c.transpose();
    tab.t.block(m, n, 1, n) = c.transpose();
    for (int i = 0; i < m; ++i) {
        const int bj = tab.basis[i];
        if (bj < cols && tab.t(m, bj) != 0.0) tab.t.row(m) -= tab.t(m, bj) * tab.t.row(i);
    }
    if (!tab.optimize(structural, eps)) {
        result.status = LpStatus::Unbounded;
        result.value = std::numeric_limits<double>::infinity();
        return result;
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols);
    for (int i = 0; i < m; ++i) y(tab.basis[i]) = tab.t(i, cols);
    result.x = y.head(n) - y.segment(n, n);
    result.value = c.dot(result.x);
    result.status = LpStatus::Optimal;
    return result;
}

bool lp_feasible(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double eps) {
    return lp_maximize(a, b, Eigen::VectorXd::Zero(a.cols()), eps).status != LpStatus::Infeasible;
}

}  // namespace modloc
