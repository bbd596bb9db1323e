#include "subrad/linprog.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace subrad::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;
constexpr int kMaxIter = 20000;

// Standard-form tableau: min c.y s.t. T y = rhs, y >= 0, with the basis
// columns of T kept at identity by pivoting. Free original variables are
// split x = y+ - y-.
struct Tableau {
  Mat T;
  Vec rhs;
  Vec cost;
  std::vector<int> basis;
  int enter_limit = -1;  // columns >= enter_limit may not enter (phase 2)

  int m() const { return int(T.rows()); }
  int n() const { return int(T.cols()); }
  int n_enter() const { return enter_limit < 0 ? n() : enter_limit; }

  Vec reduced_costs() const {
    Vec cb(m());
    for (int i = 0; i < m(); ++i) cb[i] = cost[basis[i]];
    return cost - T.transpose() * cb;
  }

  double objective() const {
    double v = 0;
    for (int i = 0; i < m(); ++i) v += cost[basis[i]] * rhs[i];
    return v;
  }

  void pivot(int row, int col) {
    double piv = T(row, col);
    T.row(row) /= piv;
    rhs[row] /= piv;
    for (int i = 0; i < m(); ++i) {
      if (i == row) continue;
      double f = T(i, col);
      if (f != 0.0) {
        T.row(i) -= f * T.row(row);
        rhs[i] -= f * rhs[row];
      }
    }
    basis[row] = col;
  }

  Status iterate() {
    for (int it = 0; it < kMaxIter; ++it) {
      Vec rc = reduced_costs();
      int enter = -1;
      for (int j = 0; j < n_enter(); ++j)
        if (rc[j] < -kPivotTol) { enter = j; break; }  // Bland's rule
      if (enter < 0) return Status::Optimal;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m(); ++i) {
        double a = T(i, enter);
        if (a > kPivotTol) {
          double ratio = rhs[i] / a;
          if (ratio < best_ratio - 1e-15 ||
              (ratio < best_ratio + 1e-15 &&
               (leave < 0 || basis[i] < basis[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return Status::Unbounded;
      pivot(leave, enter);
    }
    return Status::IterationLimit;
  }
};

}  // namespace

Result solve(const Vec& c, const Mat& A_ub, const Vec& b_ub, const Mat& A_eq,
             const Vec& b_eq) {
  const int nx = int(c.size());
  const int mu = int(A_ub.rows());
  const int me = int(A_eq.rows());
  const int m = mu + me;
  const int nsplit = 2 * nx;
  const int ncols = nsplit + mu;  // + slacks on <= rows

  if (m == 0) {
    // Unconstrained: bounded only for c = 0.
    if (c.lpNorm<Eigen::Infinity>() <= kPivotTol)
      return {Status::Optimal, Vec::Zero(nx), 0.0};
    return {Status::Unbounded, {}, 0};
  }

  Mat A(m, ncols);
  A.setZero();
  Vec b(m);
  for (int i = 0; i < mu; ++i) {
    A.block(i, 0, 1, nx) = A_ub.row(i);
    A.block(i, nx, 1, nx) = -A_ub.row(i);
    A(i, nsplit + i) = 1.0;
    b[i] = b_ub[i];
  }
  for (int i = 0; i < me; ++i) {
    A.block(mu + i, 0, 1, nx) = A_eq.row(i);
    A.block(mu + i, nx, 1, nx) = -A_eq.row(i);
    b[mu + i] = b_eq[i];
  }
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) {
      A.row(i) = -A.row(i);
      b[i] = -b[i];
    }
  }

  // Phase 1: artificial variable on every row.
  Tableau tab;
  tab.T.resize(m, ncols + m);
  tab.T << A, Mat::Identity(m, m);
  tab.rhs = b;
  tab.cost = Vec::Zero(ncols + m);
  tab.cost.tail(m).setOnes();
  tab.basis.resize(m);
  for (int i = 0; i < m; ++i) tab.basis[i] = ncols + i;

  Status s1 = tab.iterate();
  if (s1 != Status::Optimal) return {Status::IterationLimit, {}, 0};
  if (tab.objective() > kFeasTol) return {Status::Infeasible, {}, 0};

  // Drive leftover artificials out of the basis; rows where that is not
  // possible are redundant and keep a zero-level artificial pinned in place.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] >= ncols) {
      for (int j = 0; j < ncols; ++j) {
        if (std::abs(tab.T(i, j)) > 1e-8) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2: real costs; artificial columns are barred from entering and any
  // still in the basis sit at zero level on redundant rows.
  tab.cost.setZero();
  tab.cost.head(nx) = c;
  tab.cost.segment(nx, nx) = -c;
  tab.enter_limit = ncols;

  Status s2 = tab.iterate();
  if (s2 == Status::Unbounded) return {Status::Unbounded, {}, 0};
  if (s2 != Status::Optimal) return {Status::IterationLimit, {}, 0};

  Vec y = Vec::Zero(tab.n());
  for (int i = 0; i < m; ++i) y[tab.basis[i]] = tab.rhs[i];
  Vec x(nx);
  for (int j = 0; j < nx; ++j) x[j] = y[j] - y[nx + j];
  return {Status::Optimal, x, c.dot(x)};
}

Result feasible_point(const Mat& A_ub, const Vec& b_ub, const Mat& A_eq,
                      const Vec& b_eq) {
  int nx = int(A_ub.cols() > 0 ? A_ub.cols() : A_eq.cols());
  return solve(Vec::Zero(nx), A_ub, b_ub, A_eq, b_eq);
}

}  // namespace subrad::lp
