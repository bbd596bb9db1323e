#include "subrad/verify.hpp"

#include <cmath>
#include <sstream>

namespace subrad::verify {

using matrices::Witness;

sys::ConstraintSystem cone_example(NormSpec p) {
  sys::ConstraintSystem s;
  const int n = 2;
  poly::ConvexPoly D;  // |x2| <= x1
  D.A.resize(2, n);
  D.A << -1, 1, -1, -1;
  D.b = Vec::Zero(2);
  D.E = Mat(0, n);
  D.d = Vec(0);
  s.D.pieces.push_back(D);
  poly::ConvexPoly K1;  // ray R+ x {0}
  K1.A.resize(1, n);
  K1.A << -1, 0;
  K1.b = Vec::Zero(1);
  K1.E.resize(1, n);
  K1.E << 0, 1;
  K1.d = Vec::Zero(1);
  poly::ConvexPoly K2;  // ray {0} x R+
  K2.A.resize(1, n);
  K2.A << 0, -1;
  K2.b = Vec::Zero(1);
  K2.E.resize(1, n);
  K2.E << 1, 0;
  K2.d = Vec::Zero(1);
  s.K.pieces = {K1, K2};
  s.g.g0 = Vec::Zero(2);
  s.g.G = Mat::Identity(2, 2);
  s.g.affine = true;
  s.xbar = Vec::Zero(2);
  s.norm = p;
  return s;
}

sys::ConstraintSystem zero_map_example() {
  sys::ConstraintSystem s;
  s.D.pieces.push_back(poly::ConvexPoly::whole_space(1));
  poly::ConvexPoly K;
  K.A = Mat(0, 1);
  K.b = Vec(0);
  K.E = Mat::Identity(1, 1);
  K.d = Vec::Zero(1);
  s.K.pieces.push_back(K);
  s.g.g0 = Vec::Zero(1);
  s.g.G = Mat::Zero(1, 1);
  s.g.affine = true;
  s.xbar = Vec::Zero(1);
  s.norm = NormSpec(PExp::Two);
  return s;
}

sys::ConstraintSystem linear_example(const Mat& A, NormSpec p) {
  const int n = int(A.cols());
  const int m = int(A.rows());
  sys::ConstraintSystem s;
  s.D.pieces.push_back(poly::ConvexPoly::whole_space(n));
  poly::ConvexPoly K;
  K.A = Mat(0, m);
  K.b = Vec(0);
  K.E = Mat::Identity(m, m);
  K.d = Vec::Zero(m);
  s.K.pieces.push_back(K);
  s.g.g0 = Vec::Zero(m);
  s.g.G = A;
  s.g.affine = true;
  s.xbar = Vec::Zero(n);
  s.norm = p;
  return s;
}

sys::ConstraintSystem staircase_example(const perturb::StaircaseSpec& spec, int k) {
  perturb::Staircase st(spec);
  sys::ConstraintSystem s = zero_map_example();
  s.xbar = Vec::Constant(1, st.a(k));
  return s;
}

Witness random_compatible_witness(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Witness w;
  w.norm = NormSpec(PExp::Two);
  auto rand_vec = [&](int d) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = unif(rng);
    return v;
  };
  Vec u = rand_vec(n);
  while (u.norm() < 1e-3) u = rand_vec(n);
  w.u = u / u.norm();
  Vec vs = rand_vec(m);
  while (vs.norm() < 1e-3) vs = rand_vec(m);
  w.vstar = vs / vs.norm();
  w.ustar = 2.0 * rand_vec(n);
  Vec v0 = 2.0 * rand_vec(m);
  // project v0 so that v*.v = u*.u (||v*||_2 = 1)
  w.v = v0 + (w.ustar.dot(w.u) - w.vstar.dot(v0)) * w.vstar;
  return w;
}

SuiteResult verify_frobenius(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int t = 0; t < trials; ++t) {
    int n = dim(rng), m = dim(rng);
    Witness w = random_compatible_witness(rng, n, m);
    auto fr = matrices::frobenius_min_matrix(w);
    double uu = w.ustar.dot(w.u);
    double predicted2 = w.ustar.squaredNorm() + w.v.squaredNorm() - uu * uu;
    if (std::abs(fr.fro_norm * fr.fro_norm - predicted2) > 1e-10) {
      std::ostringstream os;
      os << "trial " << t << ": norm identity residual "
         << std::abs(fr.fro_norm * fr.fro_norm - predicted2);
      return {false, os.str()};
    }
    if (w.constraint_residual(fr.B) > 1e-10) {
      std::ostringstream os;
      os << "trial " << t << ": constraint residual "
         << w.constraint_residual(fr.B);
      return {false, os.str()};
    }
    // The numeric search on the Frobenius objective must not beat the
    // closed form by more than 1e-8.
    auto searched = matrices::min_opnorm_matrix(
        w, w.norm, {}, matrices::SearchObjective::Frobenius);
    if (searched.upper < fr.fro_norm - 1e-8) {
      std::ostringstream os;
      os << "trial " << t << ": search found " << searched.upper
         << " beating closed form " << fr.fro_norm;
      return {false, os.str()};
    }
  }
  return {true, std::to_string(trials) + " witnesses checked"};
}

SuiteResult verify_eckart_young(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    Mat A(5, 5);
    double smin = 0;
    do {
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) A(i, j) = unif(rng);
      Eigen::JacobiSVD<Mat> svd(A);
      smin = svd.singularValues()[4];
    } while (smin < 0.05);
    auto ey = radii::eckart_young(A);
    double det_a = A.determinant();
    double det_pert = Mat(A + ey.B).determinant();
    if (std::abs(det_pert) > 1e-8 * std::abs(det_a)) {
      std::ostringstream os;
      os << "trial " << t << ": relative determinant residual "
         << std::abs(det_pert / det_a);
      return {false, os.str()};
    }
    // Independent route: power iteration on the explicit inverse.
    double inv_norm = operator_norm(A.inverse(), NormSpec(PExp::Two));
    double bnorm = operator_norm(ey.B, NormSpec(PExp::Two));
    if (std::abs(bnorm - 1.0 / inv_norm) > 1e-10) {
      std::ostringstream os;
      os << "trial " << t << ": |B| = " << bnorm << " vs 1/|A^-1| = "
         << 1.0 / inv_norm;
      return {false, os.str()};
    }
  }
  // Radii agreement for small linear systems (dimension capped at 3 by the
  // cone enumeration).
  for (int t = 0; t < 10; ++t) {
    int n = 2 + (t % 2);
    Mat A(n, n);
    double smin = 0;
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = unif(rng);
      Eigen::JacobiSVD<Mat> svd(A);
      smin = svd.singularValues()[n - 1];
    } while (smin < 0.2);
    auto ey = radii::eckart_young(A);
    auto rad = radii::radius_report(linear_example(A));
    double mid = rad.rad_ss.mid();
    if (std::abs(mid - ey.radius) > 5e-3) {
      std::ostringstream os;
      os << "linear system trial " << t << ": rad_ss " << mid
         << " vs eckart-young " << ey.radius;
      return {false, os.str()};
    }
  }
  return {true, std::to_string(trials) + " matrices checked"};
}

SuiteResult verify_zigzag() {
  perturb::Zigzag chi({0.5, 0.5, 60});  // tau_k = 2^{-k}
  for (int k = 1; k <= 30; ++k) {
    double tk = chi.tau(k);
    double v = chi.value_at_tau(k);
    if (!(v < tk) || !(v > tk * (1.0 - 1.0 / (k + 1)))) {
      std::ostringstream os;
      os << "k=" << k << ": chi(tau_k)=" << v << " outside (tau_k(1-1/(k+1)), tau_k)";
      return {false, os.str()};
    }
  }
  auto fn = [&](const Vec& x) { return Vec::Constant(1, chi.eval_extended(x[0])); };
  double est = perturb::lip_estimate(fn, Vec::Zero(1), 0.4, 4000, 11);
  if (!(est > 0.9 && est <= 1.0 + 1e-12)) {
    std::ostringstream os;
    os << "lipschitz estimate " << est << " outside (0.9, 1]";
    return {false, os.str()};
  }
  return {true, "30 breakpoints, lip estimate " + std::to_string(est)};
}

sys::ConstraintSystem random_system_2x2(std::uint64_t seed, NormSpec norm) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> count(1, 2);
  auto rand_union = [&](int dim) {
    poly::PolyUnion u;
    int pieces = count(rng);
    for (int p = 0; p < pieces; ++p) {
      poly::ConvexPoly piece;
      int rows = count(rng);
      piece.A.resize(rows, dim);
      piece.b = Vec::Zero(rows);
      for (int i = 0; i < rows; ++i) {
        Vec a(dim);
        do {
          for (int j = 0; j < dim; ++j) a[j] = unif(rng);
        } while (a.norm() < 0.3);
        piece.A.row(i) = a.transpose();
      }
      piece.E = Mat(0, dim);
      piece.d = Vec(0);
      u.pieces.push_back(std::move(piece));
    }
    return u;
  };
  sys::ConstraintSystem s;
  s.D = rand_union(2);
  s.K = rand_union(2);
  s.g.g0 = Vec::Zero(2);
  s.g.G.resize(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s.g.G(i, j) = 2.0 * unif(rng);
  s.g.affine = true;
  s.xbar = Vec::Zero(2);
  s.norm = norm;
  return s;
}

std::string check_chain(const constants::ConstantsReport& rep,
                        const radii::RadiusReport& rad) {
  std::ostringstream os;
  const double tol = 1e-6;
  auto le = [&](double a, double b) {
    if (std::isinf(a) && std::isinf(b)) return true;
    return a <= b + tol;
  };
  if (!le(rep.rg.value, rep.rg_diamond.value))
    os << "rg > rg_diamond; ";
  if (!le(rep.rg_diamond.value, rep.rg_circ.upper))
    os << "rg_diamond > rg_circ.upper; ";
  if (!le(rep.rg_circ.lower, rep.rg_circ.upper))
    os << "rg_circ interval inverted; ";
  if (!le(rep.rg.value, rep.rg_over.value))
    os << "rg > rg_over; ";
  if (!le(rep.rg_over.value, 2.0 * rep.rg.value))
    os << "rg_over > 2 rg; ";
  if (!le(rep.mr_bound, rep.rg.value))
    os << "mr_bound > rg; ";
  if (!le(rep.ssr_bound, rep.rg.value))
    os << "ssr_bound > rg; ";
  if (rep.rg_dagger_applicable) {
    if (!le(rep.rg_circ.lower, rep.rg_dagger.value))
      os << "rg_circ.lower > rg_dagger; ";
    if (!le(rep.rg_dagger.value, std::sqrt(2.0) * rep.rg_circ.upper * (1 + tol)))
      os << "rg_dagger > sqrt(2) rg_circ.upper; ";
  }
  if (!le(rad.rad_lip_lower, rad.rad_lip_upper))
    os << "rad_lip interval inverted; ";
  if (!le(rad.rad_lip_upper, rad.rad_ss.upper))
    os << "rad_lip.upper > rad_ss.upper; ";
  if (std::isfinite(rad.rad_lip_lower) && std::isfinite(rad.rad_lip_upper) &&
      rad.rad_lip_lower > 0 &&
      rad.rad_lip_upper / rad.rad_lip_lower > 2.0 + 1e-6)
    os << "rad_lip bounds differ by more than 2x; ";
  return os.str();
}

SuiteResult verify_chain(int random_trials, std::uint64_t seed) {
  std::vector<std::pair<std::string, sys::ConstraintSystem>> systems;
  for (PExp p : {PExp::One, PExp::Two, PExp::Inf})
    systems.emplace_back("cone p=" + to_string(NormSpec(p)), cone_example(NormSpec(p)));
  systems.emplace_back("zero_map", zero_map_example());
  {
    Mat A(2, 2);
    A << 2, 0, 0, 1;
    systems.emplace_back("linear diag(2,1)", linear_example(A));
  }
  for (int t = 0; t < random_trials; ++t) {
    NormSpec p((t % 3 == 0) ? PExp::Two : (t % 3 == 1 ? PExp::One : PExp::Inf));
    systems.emplace_back("random seed " + std::to_string(seed + t),
                         random_system_2x2(seed + t, p));
  }
  constants::SolverConfig cfg;
  cfg.resolution = 360;
  cfg.pair_resolution = 48;
  for (auto& [name, s] : systems) {
    auto rep = constants::compute_constants(s, cfg);
    auto rad = radii::radius_report_from(rep);
    std::string err = check_chain(rep, rad);
    if (!err.empty()) return {false, name + ": " + err};
  }
  return {true, std::to_string(systems.size()) + " systems checked"};
}

}  // namespace subrad::verify
