#pragma once

#include <cstdint>
#include <optional>

#include "subrad/perturbations.hpp"
#include "subrad/polyhedral.hpp"

namespace subrad::sys {

/// First-order local model of g at xbar: value g(xbar) and Jacobian; the
/// affine flag promotes it to the global map x -> g0 + G (x - xbar).
struct LocalMap {
  Vec g0;
  Mat G;
  bool affine = true;

  Vec eval(const Vec& x, const Vec& xbar) const;
};

/// Constraint system x in D, g(x) in K with base point xbar; induces the
/// feasibility mapping F(x) = K - g(x) on D (empty off D) with ybar = 0.
struct ConstraintSystem {
  poly::PolyUnion D;
  poly::PolyUnion K;
  LocalMap g;
  Vec xbar;
  NormSpec norm;

  int n() const { return int(xbar.size()); }
  int m() const { return int(g.g0.size()); }
  /// Throws unless xbar is in D and g(xbar) is in K.
  void validate() const;
};

/// One product sign cell: a direction class of D at xbar paired with one of
/// K at g(xbar), each carrying its constant normal cone.
struct Piece {
  poly::ConvexCone d_cell;
  poly::ConvexCone d_normal;
  poly::ConvexCone k_cell;
  poly::ConvexCone k_normal;
};

std::vector<Piece> enumerate_pieces(const ConstraintSystem& sys);

/// d(g(x), K) for x in D, +inf otherwise. Needs the affine flag away from xbar.
double residual(const ConstraintSystem& sys, const Vec& x);

/// F^{-1}(0) as a union of convex polyhedra (affine g only).
poly::PolyUnion solution_set(const ConstraintSystem& sys);

/// v in DF(xbar,0)(u), i.e. u tangent to D and v + Gu tangent to K.
bool graphical_derivative_contains(const ConstraintSystem& sys, const Vec& u,
                                   const Vec& v);

/// The set of u* in the directional limiting coderivative
/// D*F((xbar,0);(u,v))(v*) = Ndir_D(xbar;u) - G^T v*, empty unless
/// -v* in Ndir_K(g(xbar); v + Gu).
struct OffsetCone {
  poly::Cone cone;  // empty marker allowed
  Vec offset;

  bool is_empty() const { return cone.is_empty(); }
  bool contains(const Vec& x, double tol = 1e-9) const {
    return cone.contains(x - offset, tol);
  }
};

OffsetCone dir_coderivative(const ConstraintSystem& sys, const Vec& u,
                            const Vec& v, const Vec& vstar);

/// (u*, v) in the primal-dual derivative image at (u, v*).
bool pdd_contains(const ConstraintSystem& sys, const Vec& u, const Vec& vstar,
                  const Vec& ustar, const Vec& v);

/// True iff the computed regularity constant rg falls below tol, i.e. a
/// witness with u* ~ 0 and v ~ 0 exists ((0,0) in the critical limit set).
bool critical_zero(const ConstraintSystem& sys, double tol = 1e-6);

struct SubregRatio {
  double max_ratio = 0;  // +inf when some sampled point has empty solution set
  int samples_used = 0;
  int samples_skipped = 0;
};

/// Empirical subregularity check: max over sampled x in the p-ball of radius
/// r around xbar of d(x, (F+h)^{-1}(0)) / d(0, (F+h)(x)), skipping points
/// outside D and residual-zero points. Deterministic under seed.
/// Supported: polyhedral path (no perturbation, or linear ones, affine g) and
/// the 1-D analytic path (quadratic / zigzag / staircase / piecewise-random
/// with n = m = 1, K = {0}).
SubregRatio subreg_ratio(const ConstraintSystem& sys,
                         const perturb::PerturbationSpec& h, double radius,
                         int n_samples, std::uint64_t seed);

}  // namespace subrad::sys
