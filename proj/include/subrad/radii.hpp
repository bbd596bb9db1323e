#pragma once

#include <string>

#include "subrad/constants.hpp"

namespace subrad::radii {

/// Radius bounds assembled from the regularity constants. The Lipschitz
/// radius is only ever an interval; the semismooth / C1 radius equals the
/// operator-norm constant and inherits its interval when the matrix
/// subproblem is numeric.
struct RadiusReport {
  double rad_lip_lower = constants::kInf;  // = rg
  double rad_lip_upper = constants::kInf;  // = min(rg_over, rg_circ upper)
  constants::Interval rad_ss;              // = rg_circ interval
  constants::Interval rad_c1;              // identical to rad_ss
  bool euclidean = false;
  constants::Interval dagger_sandwich;     // [rg_dagger/sqrt(2), rg_dagger]
  std::string provenance_lip_lower;
  std::string provenance_lip_upper;
  std::string provenance_ss;
  constants::ConstantsReport constants;
};

RadiusReport radius_report(const sys::ConstraintSystem& s,
                           const constants::SolverConfig& cfg = {});
RadiusReport radius_report_from(const constants::ConstantsReport& rep);

struct EckartYoungResult {
  double radius = 0;  // 1 / ||A^{-1}||_2, 0 for singular input
  Mat B;              // rank-one perturbation making A + B singular
};

/// Distance from a square matrix to singularity with the rank-one witness
/// -sigma_min u_min v_min^T.
EckartYoungResult eckart_young(const Mat& A, double tol = 1e-12);

}  // namespace subrad::radii
