#include "subrad/radii.hpp"

#include <cmath>

namespace subrad::radii {

RadiusReport radius_report_from(const constants::ConstantsReport& rep) {
  RadiusReport out;
  out.constants = rep;
  out.rad_lip_lower = rep.rg.value;
  out.provenance_lip_lower = "rg";
  if (rep.rg_over.value <= rep.rg_circ.upper) {
    out.rad_lip_upper = rep.rg_over.value;
    out.provenance_lip_upper = "rg_over";
  } else {
    out.rad_lip_upper = rep.rg_circ.upper;
    out.provenance_lip_upper = "rg_circ.upper";
  }
  out.rad_ss = rep.rg_circ;
  out.rad_c1 = rep.rg_circ;
  out.provenance_ss = "rg_circ interval";
  if (rep.rg_dagger_applicable && std::isfinite(rep.rg_dagger.value)) {
    out.euclidean = true;
    out.dagger_sandwich =
        constants::Interval{rep.rg_dagger.value / std::sqrt(2.0), rep.rg_dagger.value};
  }
  return out;
}

RadiusReport radius_report(const sys::ConstraintSystem& s,
                           const constants::SolverConfig& cfg) {
  return radius_report_from(constants::compute_constants(s, cfg));
}

EckartYoungResult eckart_young(const Mat& A, double tol) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("eckart_young: square matrix required");
  const int n = int(A.rows());
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  double smin = sv[n - 1];
  double smax = sv[0];
  EckartYoungResult out;
  if (smin <= tol * std::max(1.0, smax)) {
    out.radius = 0;
    out.B = Mat::Zero(n, n);
    return out;
  }
  out.radius = smin;
  out.B = -smin * svd.matrixU().col(n - 1) * svd.matrixV().col(n - 1).transpose();
  return out;
}

}  // namespace subrad::radii
