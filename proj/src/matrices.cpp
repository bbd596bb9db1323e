#include "subrad/matrices.hpp"

#include <cmath>
#include <stdexcept>

namespace subrad::matrices {

bool Witness::unit_invariants(double tol) const {
  return std::abs(vec_norm(u, norm) - 1.0) <= tol &&
         std::abs(dual_norm(vstar, norm) - 1.0) <= tol;
}

bool Witness::compatible(double tol) const {
  return std::abs(ustar.dot(u) - vstar.dot(v)) <= tol;
}

double Witness::constraint_residual(const Mat& candidate) const {
  double r1 = (candidate * u - v).lpNorm<Eigen::Infinity>();
  double r2 = (candidate.transpose() * vstar - ustar).lpNorm<Eigen::Infinity>();
  return std::max(r1, r2);
}

Mat compatible_matrix(const Witness& w) {
  if (!w.unit_invariants())
    throw std::invalid_argument(
        "compatible_matrix: unit-sphere invariants violated (need ||u||_p = "
        "||v*||_q = 1)");
  if (!w.compatible())
    throw std::invalid_argument(
        "compatible_matrix: compatibility violated (need u*^T u = v*^T v)");
  // z* pairs with u in the dual norm, w pairs with v* in the primal norm.
  Vec zstar = dual_attainer(w.u, w.norm);
  Vec wvec = dual_attainer(w.vstar, w.norm.dual());
  double uu = w.ustar.dot(w.u);
  Mat B = w.v * zstar.transpose() + wvec * w.ustar.transpose() -
          uu * (wvec * zstar.transpose());
  if (w.constraint_residual(B) > 1e-10)
    throw std::logic_error("compatible_matrix: construction residual too large");
  return B;
}

FrobeniusResult frobenius_min_matrix(const Witness& w) {
  if (w.norm.p != PExp::Two)
    throw std::invalid_argument("frobenius_min_matrix: Euclidean norm required");
  if (!w.unit_invariants())
    throw std::invalid_argument(
        "frobenius_min_matrix: need ||u||_2 = ||v*||_2 = 1");
  if (!w.compatible())
    throw std::invalid_argument("frobenius_min_matrix: need u*^T u = v*^T v");
  double uu = w.ustar.dot(w.u);
  Mat B = w.vstar * w.ustar.transpose() + w.v * w.u.transpose() -
          uu * (w.vstar * w.u.transpose());
  double fro = frobenius_norm(B);
  double predicted =
      std::sqrt(std::max(0.0, w.ustar.squaredNorm() + w.v.squaredNorm() - uu * uu));
  if (std::abs(fro - predicted) > 1e-10 * (1.0 + predicted))
    throw std::logic_error("frobenius_min_matrix: norm identity residual too large");
  if (w.constraint_residual(B) > 1e-10)
    throw std::logic_error("frobenius_min_matrix: constraint residual too large");
  return {B, fro};
}

namespace {

// Orthonormal basis of the hyperplane orthogonal to x (n x (n-1)).
Mat orth_complement_of_vector(const Vec& x) {
  const int n = int(x.size());
  Eigen::JacobiSVD<Mat> svd(x.transpose(), Eigen::ComputeFullV);
  return svd.matrixV().rightCols(n - 1);
}

double objective_norm(const Mat& B, NormSpec n, SearchObjective obj) {
  return obj == SearchObjective::Frobenius ? frobenius_norm(B)
                                           : operator_norm(B, n);
}

}  // namespace

MinOpNormResult min_opnorm_matrix(const Witness& w, NormSpec n,
                                  const MinOpNormConfig& cfg,
                                  SearchObjective obj) {
  if (!w.compatible() || !w.unit_invariants())
    throw std::invalid_argument(
        "min_opnorm_matrix: witness must be compatible with unit invariants");
  const int nn = int(w.u.size());
  const int mm = int(w.v.size());
  Mat B0 = (n.p == PExp::Two) ? frobenius_min_matrix(w).B : compatible_matrix(w);
  Mat P = orth_complement_of_vector(w.u);      // n x (n-1)
  Mat Q = orth_complement_of_vector(w.vstar);  // m x (m-1)
  const int k = (nn - 1) * (mm - 1);

  double lower = std::max(vec_norm(w.v, n), dual_norm(w.ustar, n));
  auto eval = [&](const Vec& params) {
    Mat C = Eigen::Map<const Mat>(params.data(), mm - 1, nn - 1);
    Mat B = B0 + Q * C * P.transpose();
    return objective_norm(B, n, obj);
  };

  if (k == 0) {
    double val = objective_norm(B0, n, obj);
    return {B0, val, lower};
  }

  Vec best_params = Vec::Zero(k);
  double best_val = eval(best_params);
  std::vector<Vec> starts;
  starts.push_back(Vec::Zero(k));
  {
    Mat C0 = -(Q.transpose() * B0 * P);
    starts.push_back(Eigen::Map<Vec>(C0.data(), k));
  }
  for (int s = 0; s < cfg.starts && int(starts.size()) < cfg.starts + 2; ++s)
    starts.push_back(Vec::Constant(k, (s % 2 ? -1.0 : 1.0) * (1.0 + s)));

  if (k == 1) {
    // Convex in a single parameter: bracket then golden-section.
    auto f = [&](double t) { return eval(Vec::Constant(1, t)); };
    double lo = -1.0, hi = 1.0;
    while (f(lo) < f(lo + 1e-6) && lo > -1e8) lo *= 2.0;
    while (f(hi) < f(hi - 1e-6) && hi < 1e8) hi *= 2.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = f(c1), f2 = f(c2);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
      if (f1 <= f2) {
        b = c2;
        c2 = c1;
        f2 = f1;
        c1 = b - gr * (b - a);
        f1 = f(c1);
      } else {
        a = c1;
        c1 = c2;
        f1 = f2;
        c2 = a + gr * (b - a);
        f2 = f(c2);
      }
    }
    double t = 0.5 * (a + b);
    if (f(t) < best_val) {
      best_val = f(t);
      best_params = Vec::Constant(1, t);
    }
  } else {
    // Compass search with axis and diagonal moves from each start.
    std::vector<Vec> dirs;
    for (int i = 0; i < k; ++i) {
      dirs.push_back(Vec::Unit(k, i));
      dirs.push_back(-Vec::Unit(k, i));
    }
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        Vec d = (Vec::Unit(k, i) + Vec::Unit(k, j)).normalized();
        dirs.push_back(d);
        dirs.push_back(-d);
        Vec e = (Vec::Unit(k, i) - Vec::Unit(k, j)).normalized();
        dirs.push_back(e);
        dirs.push_back(-e);
      }
    for (const Vec& s0 : starts) {
      Vec x = s0;
      double fx = eval(x);
      double step = cfg.init_step;
      int iters = 0;
      while (step > cfg.min_step && iters < cfg.max_iters) {
        bool improved = false;
        for (const Vec& d : dirs) {
          Vec y = x + step * d;
          double fy = eval(y);
          ++iters;
          if (fy < fx - 1e-15) {
            x = y;
            fx = fy;
            improved = true;
            break;
          }
        }
        if (!improved) step *= cfg.shrink;
      }
      if (fx < best_val) {
        best_val = fx;
        best_params = x;
      }
    }
  }

  Mat C = Eigen::Map<const Mat>(best_params.data(), mm - 1, nn - 1);
  Mat B = B0 + Q * C * P.transpose();
  if (w.constraint_residual(B) > 1e-10)
    throw std::logic_error("min_opnorm_matrix: feasibility lost in search");
  // The true norm of any feasible matrix dominates `lower`; clamp so the
  // numerically evaluated upper never dips below it.
  double upper = std::max(objective_norm(B, n, obj),
                          obj == SearchObjective::OperatorP ? lower : 0.0);
  return {B, upper, lower};
}

}  // namespace subrad::matrices
