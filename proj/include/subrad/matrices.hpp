#pragma once

#include <optional>

#include "subrad/norms.hpp"

namespace subrad::matrices {

/// Critical tuple (u, v, u*, v*), optionally carrying a matrix B with
/// B u = v and B^T v* = u*. Norm invariants: ||u||_p = 1 and ||v*||_q = 1.
struct Witness {
  Vec u;
  Vec v;
  Vec ustar;
  Vec vstar;
  std::optional<Mat> B;
  NormSpec norm;

  bool unit_invariants(double tol = 1e-9) const;
  /// u*^T u == v*^T v within tol.
  bool compatible(double tol = 1e-9) const;
  /// Residual of the two linear constraints for a candidate matrix.
  double constraint_residual(const Mat& candidate) const;
};

/// Matrix from the constructive compatibility proof:
///   B = v z*^T + w u*^T - (u*^T u) w z*^T
/// with (z*, w) the deterministic norming attainers for (u, v*).
/// Requires compatibility; throws naming the violated identity.
Mat compatible_matrix(const Witness& w);

/// Closed-form Frobenius-minimal matrix (Euclidean norms only):
///   Bbar = v* u*^T + v u^T - (u*^T u) v* u^T,
///   ||Bbar||_F^2 = ||u*||^2 + ||v||^2 - (u*^T u)^2.
struct FrobeniusResult {
  Mat B;
  double fro_norm;
};
FrobeniusResult frobenius_min_matrix(const Witness& w);

enum class SearchObjective { OperatorP, Frobenius };

struct MinOpNormConfig {
  int starts = 4;
  double init_step = 1.0;
  double shrink = 0.5;
  double min_step = 1e-9;
  int max_iters = 4000;
};

struct MinOpNormResult {
  Mat B;
  double upper;  // achieved norm
  double lower;  // max(||v||_p, ||u*||_q), a bound every feasible B obeys
};

/// Numerically minimal operator-norm matrix over the affine family
/// {B : Bu = v, B^T v* = u*}, parametrized through the (n-1)(m-1)-dimensional
/// null space; deterministic multi-start compass search (exact golden-section
/// in the one-parameter case).
MinOpNormResult min_opnorm_matrix(const Witness& w, NormSpec n,
                                  const MinOpNormConfig& cfg = {},
                                  SearchObjective obj = SearchObjective::OperatorP);

}  // namespace subrad::matrices
