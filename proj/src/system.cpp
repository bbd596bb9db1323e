#include "subrad/system.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "subrad/linprog.hpp"

namespace subrad::sys {

Vec LocalMap::eval(const Vec& x, const Vec& xbar) const {
  if (!affine && (x - xbar).lpNorm<Eigen::Infinity>() > 1e-12)
    throw std::runtime_error(
        "LocalMap: evaluation away from xbar requires the affine flag");
  return g0 + G * (x - xbar);
}

void ConstraintSystem::validate() const {
  if (!D.contains(xbar)) throw std::runtime_error("infeasible: xbar not in D");
  if (!K.contains(g.g0)) throw std::runtime_error("infeasible: g(xbar) not in K");
  if (g.G.rows() != m() || g.G.cols() != n())
    throw std::runtime_error("jacobian dimensions do not match n, m");
}

std::vector<Piece> enumerate_pieces(const ConstraintSystem& sys) {
  auto d_cells = poly::direction_cells(sys.D, sys.xbar);
  auto k_cells = poly::direction_cells(sys.K, sys.g.g0);
  std::vector<Piece> pieces;
  pieces.reserve(d_cells.size() * k_cells.size());
  for (const auto& dc : d_cells)
    for (const auto& kc : k_cells)
      pieces.push_back(Piece{dc.closed_cell, dc.normal, kc.closed_cell, kc.normal});
  return pieces;
}

double residual(const ConstraintSystem& sys, const Vec& x) {
  if (!sys.D.contains(x)) return std::numeric_limits<double>::infinity();
  Vec gx = sys.g.eval(x, sys.xbar);
  return poly::min_norm_point(gx, sys.K, sys.norm).distance;
}

poly::PolyUnion solution_set(const ConstraintSystem& sys) {
  if (!sys.g.affine)
    throw std::runtime_error("solution_set: affine g required");
  // {x in D-piece : g0 + G(x - xbar) in K-piece}, one polyhedron per pair.
  poly::PolyUnion out;
  const Vec shift = sys.g.g0 - sys.g.G * sys.xbar;
  for (const auto& dp : sys.D.pieces) {
    for (const auto& kp : sys.K.pieces) {
      poly::ConvexPoly cand;
      int rowsA = int(dp.A.rows() + kp.A.rows());
      int rowsE = int(dp.E.rows() + kp.E.rows());
      cand.A.resize(rowsA, sys.n());
      cand.b.resize(rowsA);
      cand.E.resize(rowsE, sys.n());
      cand.d.resize(rowsE);
      cand.A.topRows(dp.A.rows()) = dp.A;
      cand.b.head(dp.A.rows()) = dp.b;
      cand.A.bottomRows(kp.A.rows()) = kp.A * sys.g.G;
      cand.b.tail(kp.A.rows()) = kp.b - kp.A * shift;
      cand.E.topRows(dp.E.rows()) = dp.E;
      cand.d.head(dp.E.rows()) = dp.d;
      cand.E.bottomRows(kp.E.rows()) = kp.E * sys.g.G;
      cand.d.tail(kp.E.rows()) = kp.d - kp.E * shift;
      auto feas = lp::feasible_point(cand.A, cand.b, cand.E, cand.d);
      if (feas.ok()) out.pieces.push_back(std::move(cand));
    }
  }
  return out;
}

bool graphical_derivative_contains(const ConstraintSystem& sys, const Vec& u,
                                   const Vec& v) {
  poly::Cone td = poly::tangent_cone(sys.D, sys.xbar);
  if (!td.contains(u)) return false;
  poly::Cone tk = poly::tangent_cone(sys.K, sys.g.g0);
  return tk.contains(v + sys.g.G * u);
}

OffsetCone dir_coderivative(const ConstraintSystem& sys, const Vec& u,
                            const Vec& v, const Vec& vstar) {
  Vec w = v + sys.g.G * u;
  poly::Cone nk = poly::dir_limiting_normal_cone(sys.K, sys.g.g0, w);
  Vec offset = -sys.g.G.transpose() * vstar;
  if (!nk.contains(-vstar)) return OffsetCone{poly::Cone::empty(), offset};
  poly::Cone nd = poly::dir_limiting_normal_cone(sys.D, sys.xbar, u);
  return OffsetCone{nd, offset};
}

bool pdd_contains(const ConstraintSystem& sys, const Vec& u, const Vec& vstar,
                  const Vec& ustar, const Vec& v) {
  OffsetCone oc = dir_coderivative(sys, u, v, vstar);
  if (oc.is_empty()) return false;
  return oc.contains(ustar);
}

namespace {

// 1-D analytic residual path: effective scalar map gtilde with K = {0}.
struct Scalar1D {
  std::function<double(double)> gt;
  double xbar;
};

std::optional<Scalar1D> make_scalar_path(const ConstraintSystem& sys,
                                         const perturb::PerturbationSpec& h) {
  using Kind = perturb::PerturbationSpec::Kind;
  if (sys.n() != 1 || sys.m() != 1) return std::nullopt;
  // Require K = {0} for the root-scan path.
  bool k_is_zero = sys.K.contains(Vec::Zero(1)) &&
                   !sys.K.contains(Vec::Constant(1, 1e-3)) &&
                   !sys.K.contains(Vec::Constant(1, -1e-3));
  if (!k_is_zero) return std::nullopt;
  const double xb = sys.xbar[0];
  const double g0 = sys.g.g0[0];
  const double G = sys.g.G(0, 0);
  auto base = [=](double x) { return g0 + G * (x - xb); };
  switch (h.kind) {
    case Kind::Quadratic:
      return Scalar1D{[=](double x) { return base(x) - (x - xb) * (x - xb); }, xb};
    case Kind::Staircase: {
      auto st = std::make_shared<perturb::Staircase>(h.stair);
      // g - h with h = -(f - f(xbar)) relative to the base model.
      double fb = st->f(xb);
      return Scalar1D{[=](double x) { return base(x) + (st->f(x) - fb); }, xb};
    }
    case Kind::Zigzag: {
      if (!h.witness) return std::nullopt;
      auto z = std::make_shared<perturb::Step2Perturbation>(*h.witness, sys.xbar,
                                                            h.zig);
      return Scalar1D{
          [=](double x) { return base(x) - (*z)(Vec::Constant(1, x))[0]; }, xb};
    }
    case Kind::PiecewiseRandom: {
      auto fn = perturb::piecewise_random_1d(h.pr_lip, h.pr_seed);
      return Scalar1D{[=](double x) { return base(x) - fn(x - xb); }, xb};
    }
    case Kind::Linear:
      return Scalar1D{
          [=, B = h.linear_B(0, 0)](double x) { return base(x) - B * (x - xb); },
          xb};
    case Kind::None:
      return Scalar1D{base, xb};
  }
  return std::nullopt;
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double lo,
                               double hi, int grid) {
  std::vector<double> roots;
  double prev_x = lo, prev_f = f(lo);
  for (int i = 1; i <= grid; ++i) {
    double x = lo + (hi - lo) * i / grid;
    double fx = f(x);
    if (std::abs(prev_f) < 1e-14) roots.push_back(prev_x);
    if (prev_f * fx < 0) {
      double a = prev_x, b = x, fa = prev_f;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (a + b);
        double fm = f(mid);
        if (fa * fm <= 0)
          b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_f = fx;
  }
  if (std::abs(prev_f) < 1e-14) roots.push_back(prev_x);
  return roots;
}

}  // namespace

SubregRatio subreg_ratio(const ConstraintSystem& sys,
                         const perturb::PerturbationSpec& h, double radius,
                         int n_samples, std::uint64_t seed) {
  using Kind = perturb::PerturbationSpec::Kind;
  SubregRatio out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int n = sys.n();

  auto sample_point = [&]() {
    for (;;) {
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = radius * unif(rng);
      if (vec_norm(x, sys.norm) <= radius) return Vec(sys.xbar + x);
    }
  };

  const bool analytic_kind =
      h.kind == Kind::Quadratic || h.kind == Kind::Staircase ||
      h.kind == Kind::Zigzag || h.kind == Kind::PiecewiseRandom;
  const bool needs_scalar = analytic_kind || !sys.g.affine;

  std::optional<Scalar1D> sc;
  if (needs_scalar) sc = make_scalar_path(sys, h);
  if (needs_scalar && !sc)
    throw std::runtime_error(
        "subreg_ratio: perturbation not evaluable for this system (needs the "
        "polyhedral path or a 1-D analytic path)");
  if (sc) {
    double window = std::max(8.0 * radius, 1e-6);
    auto roots = scan_roots(sc->gt, sc->xbar - window, sc->xbar + window, 16384);
    for (int s = 0; s < n_samples; ++s) {
      Vec x = sample_point();
      if (!sys.D.contains(x)) { ++out.samples_skipped; continue; }
      double res = std::abs(sc->gt(x[0]));
      double dist = std::numeric_limits<double>::infinity();
      for (double r : roots) dist = std::min(dist, std::abs(x[0] - r));
      // Skip solution points (residual-zero up to underflow, or both the
      // residual and the distance at rounding level).
      if (res < 1e-250 || (res < 1e-13 && dist < 1e-10 * radius)) {
        ++out.samples_skipped;
        continue;
      }
      ++out.samples_used;
      out.max_ratio = std::max(out.max_ratio, dist / res);
    }
    return out;
  }

  ConstraintSystem pert = sys;
  if (h.kind == Kind::Linear) pert.g.G = sys.g.G - h.linear_B;
  poly::PolyUnion sol = solution_set(pert);
  for (int s = 0; s < n_samples; ++s) {
    Vec x = sample_point();
    double res = residual(pert, x);
    if (!std::isfinite(res) || res < 1e-13) { ++out.samples_skipped; continue; }
    auto d = poly::min_norm_point(x, sol, sys.norm);
    ++out.samples_used;
    out.max_ratio = std::max(out.max_ratio, d.distance / res);
  }
  return out;
}

}  // namespace subrad::sys
