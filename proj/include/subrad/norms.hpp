#pragma once

#include <Eigen/Dense>
#include <vector>

namespace subrad {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Supported norm exponents. Everything in this library is built for
/// p in {1, 2, inf}; other exponents are rejected at parse time.
enum class PExp { One, Two, Inf };

struct NormSpec {
  PExp p = PExp::Two;

  NormSpec() = default;
  explicit NormSpec(PExp e) : p(e) {}

  /// Dual exponent: 1 <-> inf, 2 <-> 2.
  NormSpec dual() const;

  bool operator==(const NormSpec&) const = default;
};

NormSpec norm_spec_from_string(const std::string& s);
std::string to_string(NormSpec n);

double vec_norm(const Vec& x, NormSpec n);
/// Norm in the dual space pairing with `n` (i.e. vec_norm with the dual exponent).
double dual_norm(const Vec& x, NormSpec n);

/// Induced operator norm p->p. p=1: max column l1 sum; p=inf: max row l1 sum;
/// p=2: largest singular value by power iteration on M^T M (deterministic
/// all-ones start, 1e-12 relative tolerance, 1e4 iteration cap).
double operator_norm(const Mat& M, NormSpec n);

double frobenius_norm(const Mat& M);

/// A vector z* with ||z*||_q = 1 and z*^T x = ||x||_p (q dual to p).
/// Ties on the attaining index are broken towards the lowest index.
Vec dual_attainer(const Vec& x, NormSpec n);

/// Evenly spread points on the unit p-sphere, dim in {1,2,3}.
/// Always contains all +-coordinate vectors. resolution >= 4.
std::vector<Vec> sphere_points(NormSpec n, int dim, int resolution);

}  // namespace subrad
