#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "subrad/norms.hpp"

namespace subrad::poly {

/// One convex H-polyhedron {x : A x <= b, E x = d}.
struct ConvexPoly {
  Mat A;  // may have zero rows
  Vec b;
  Mat E;  // may have zero rows
  Vec d;

  int dim() const;
  bool contains(const Vec& x, double tol = 1e-9) const;
  /// Indices of inequality rows active at x within tol.
  std::vector<int> active_rows(const Vec& x, double tol = 1e-9) const;
  static ConvexPoly whole_space(int n);
};

/// Finite union of convex polyhedra; membership means membership in a piece.
struct PolyUnion {
  std::vector<ConvexPoly> pieces;

  int dim() const;
  bool contains(const Vec& x, double tol = 1e-9) const;
};

struct HRep {
  Mat M;   // M x <= 0
  Mat Eq;  // Eq x = 0
};

struct GenRep {
  Mat rays;   // columns; conic coefficients >= 0
  Mat lines;  // columns; free coefficients
};

/// Convex polyhedral cone with both representations cached on demand.
/// Conversions use subset enumeration, exact for the dimensions (<= 4)
/// this library targets.
class ConvexCone {
 public:
  static ConvexCone from_hrep(Mat M, Mat Eq, int dim);
  static ConvexCone from_generators(Mat rays, Mat lines, int dim);
  static ConvexCone zero(int dim);
  static ConvexCone whole(int dim);

  int dim() const { return dim_; }
  const HRep& hrep() const;
  const GenRep& gen() const;

  bool contains(const Vec& x, double tol = 1e-9) const;
  ConvexCone polar() const;
  /// The reflected cone -C.
  ConvexCone negate() const;
  /// Intersection, computed by concatenating H-representations.
  ConvexCone intersect(const ConvexCone& other) const;
  /// True iff the cone is exactly {0}.
  bool is_zero(double tol = 1e-9) const;
  /// All generators (rays plus +-lines) as columns, l2-normalized.
  Mat all_generators() const;

 private:
  int dim_ = 0;
  mutable std::optional<HRep> h_;
  mutable std::optional<GenRep> g_;
};

/// Union-of-convex-cones with an explicit empty state. The empty marker
/// mirrors the convention that normal cones at points outside the set (or in
/// unreachable directions) are empty rather than an error.
struct Cone {
  std::vector<ConvexCone> parts;

  static Cone empty() { return Cone{}; }
  bool is_empty() const { return parts.empty(); }
  bool contains(const Vec& x, double tol = 1e-9) const;
};

Cone tangent_cone(const PolyUnion& U, const Vec& xbar, double tol = 1e-9);
Cone tangent_cone(const ConvexPoly& P, const Vec& xbar, double tol = 1e-9);

/// Polar of a convex cone (single H-rep or generator piece).
/// Throws on a non-convex (multi-part) input.
Cone polar(const Cone& C);

/// Frechet normal cone: intersection over pieces containing x of the polars
/// of their tangent cones. Single convex part (or empty marker).
Cone frechet_normal_cone(const PolyUnion& U, const Vec& x, double tol = 1e-9);

/// One sign cell of the local hyperplane arrangement at xbar, restricted to
/// directions realizable inside U. `closed_cell` is the closure of the cell in
/// direction space, `normal` the (constant) Frechet normal cone of U at points
/// xbar + t d, d in the open cell, t small.
struct DirCell {
  ConvexCone closed_cell;
  ConvexCone normal;
  std::vector<int> sign_vector;  // per deduped hyperplane, in {-1,0,+1}
};

/// All sign cells of U at xbar (cells realized by points of U arbitrarily
/// close to xbar). Throws if dim > 3 or more than `max_hyperplanes` distinct
/// active hyperplanes are present.
std::vector<DirCell> direction_cells(const PolyUnion& U, const Vec& xbar,
                                     double tol = 1e-9,
                                     int max_hyperplanes = 12);

/// Directional limiting normal cone of U at xbar in direction u.
/// Returns the empty marker when u is not tangent to U at xbar (and for
/// xbar outside U). At u = 0 this is the full limiting normal cone.
Cone dir_limiting_normal_cone(const PolyUnion& U, const Vec& xbar, const Vec& u,
                              double tol = 1e-9);

/// Limiting normal cone via the union over all direction classes.
Cone limiting_normal_cone(const PolyUnion& U, const Vec& xbar,
                          double tol = 1e-9);

struct MinNormResult {
  double distance = 0;        // +inf for empty target
  std::optional<Vec> point;   // attaining point when finite
  bool finite() const { return point.has_value(); }
};

MinNormResult min_norm_point(const Vec& z, const ConvexPoly& P, NormSpec n);
MinNormResult min_norm_point(const Vec& z, const PolyUnion& U, NormSpec n);
MinNormResult min_norm_point(const Vec& z, const ConvexCone& C, NormSpec n);
MinNormResult min_norm_point(const Vec& z, const Cone& C, NormSpec n);

/// Test-support equality: double inclusion checked on generators and sampled
/// conic combinations.
bool cone_subset_sampled(const Cone& A, const Cone& B, double tol = 1e-7);
bool cone_equal_sampled(const Cone& A, const Cone& B, double tol = 1e-7);

}  // namespace subrad::poly
