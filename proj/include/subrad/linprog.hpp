#pragma once

#include "subrad/norms.hpp"

namespace subrad::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
  Status status = Status::Infeasible;
  Vec x;             // primal solution (original variables), valid when Optimal
  double value = 0;  // objective value, valid when Optimal
  bool ok() const { return status == Status::Optimal; }
};

/// Minimize c.x subject to A_ub x <= b_ub and A_eq x = b_eq, variables free.
/// Dense two-phase simplex with Bland's rule; intended for the small (tens of
/// rows/cols) problems arising from cone and sphere-facet decompositions.
Result solve(const Vec& c, const Mat& A_ub, const Vec& b_ub, const Mat& A_eq,
             const Vec& b_eq);

/// Feasibility of {A_ub x <= b_ub, A_eq x = b_eq}; on success x holds a point.
Result feasible_point(const Mat& A_ub, const Vec& b_ub, const Mat& A_eq,
                      const Vec& b_eq);

}  // namespace subrad::lp
