#include "subrad/constants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "subrad/linprog.hpp"

namespace subrad::constants {

using matrices::Witness;
using poly::ConvexCone;
using sys::ConstraintSystem;

namespace {

constexpr double kMemberTol = 1e-9;

// ---------------------------------------------------------------------------
// Sphere facets for p in {1, inf}

struct Facet {
  Mat A_ub;
  Vec b_ub;
  Mat A_eq;
  Vec b_eq;
};

std::vector<Facet> sphere_facets(NormSpec r, int dim) {
  std::vector<Facet> out;
  if (r.p == PExp::One) {
    for (int mask = 0; mask < (1 << dim); ++mask) {
      Facet f;
      f.A_eq.resize(1, dim);
      f.b_eq = Vec::Ones(1);
      f.A_ub.resize(dim, dim);
      f.A_ub.setZero();
      f.b_ub = Vec::Zero(dim);
      for (int i = 0; i < dim; ++i) {
        double s = (mask >> i) & 1 ? -1.0 : 1.0;
        f.A_eq(0, i) = s;
        f.A_ub(i, i) = -s;  // s_i x_i >= 0
      }
      out.push_back(std::move(f));
    }
  } else if (r.p == PExp::Inf) {
    for (int i = 0; i < dim; ++i) {
      for (double s : {1.0, -1.0}) {
        Facet f;
        f.A_eq.resize(1, dim);
        f.A_eq.setZero();
        f.A_eq(0, i) = s;
        f.b_eq = Vec::Ones(1);
        f.A_ub.resize(2 * dim, dim);
        f.A_ub.setZero();
        f.b_ub = Vec::Ones(2 * dim);
        for (int j = 0; j < dim; ++j) {
          f.A_ub(2 * j, j) = 1.0;
          f.A_ub(2 * j + 1, j) = -1.0;
        }
        out.push_back(std::move(f));
      }
    }
  } else {
    throw std::logic_error("sphere_facets: p=2 has no facet decomposition");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vertices of {A_ub x <= b_ub, A_eq x = b_eq}

std::vector<Vec> polytope_vertices(const Mat& A_ub, const Vec& b_ub,
                                   const Mat& A_eq, const Vec& b_eq) {
  const int n = int(A_ub.cols() > 0 ? A_ub.cols() : A_eq.cols());
  const int ma = int(A_ub.rows());
  std::vector<Vec> verts;
  auto try_system = [&](const Mat& C, const Vec& e) {
    if (C.rows() < n) return;
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(C);
    if (cod.rank() < n) return;
    Vec x = cod.solve(e);
    if ((C * x - e).lpNorm<Eigen::Infinity>() > 1e-8) return;
    for (int i = 0; i < ma; ++i)
      if (A_ub.row(i).dot(x) > b_ub[i] + 1e-8) return;
    for (const Vec& v : verts)
      if ((v - x).lpNorm<Eigen::Infinity>() < 1e-8) return;
    verts.push_back(x);
  };
  const int me = int(A_eq.rows());
  int need = std::max(0, n - me);
  for (unsigned mask = 0; mask < (1u << ma); ++mask) {
    if (__builtin_popcount(mask) != need) continue;
    Mat C(me + need, n);
    Vec e(me + need);
    C.topRows(me) = A_eq;
    e.head(me) = b_eq;
    int r = me;
    for (int i = 0; i < ma; ++i)
      if (mask & (1u << i)) {
        C.row(r) = A_ub.row(i);
        e[r++] = b_ub[i];
      }
    try_system(C, e);
  }
  return verts;
}

// ---------------------------------------------------------------------------
// Side problem: minimize d_r(M x, T) over x in X with ||x||_r = 1.

struct SideResult {
  double value = kInf;
  Vec x;
  Vec t;  // nearest point of T to M x
};

// One LP on a sphere facet: variables (x, w, lifts).
SideResult side_facet_lp(const ConvexCone& X, const Mat& M, const ConvexCone& T,
                         NormSpec r, const Facet& facet) {
  const int dx = X.dim();
  const int dt = T.dim();
  const bool inf_norm = r.p == PExp::Inf;
  const int ls = inf_norm ? 1 : dt;
  const int nv = dx + dt + ls;
  const poly::HRep& hx = X.hrep();
  const poly::HRep& ht = T.hrep();

  std::vector<Vec> ub;
  std::vector<double> rhs;
  std::vector<Vec> eq;
  std::vector<double> erhs;
  auto add_ub = [&](const Vec& row, double b) {
    ub.push_back(row);
    rhs.push_back(b);
  };
  auto add_eq = [&](const Vec& row, double b) {
    eq.push_back(row);
    erhs.push_back(b);
  };
  // X membership
  for (int i = 0; i < hx.M.rows(); ++i) {
    Vec row = Vec::Zero(nv);
    row.head(dx) = hx.M.row(i).transpose();
    add_ub(row, 0.0);
  }
  for (int i = 0; i < hx.Eq.rows(); ++i) {
    Vec row = Vec::Zero(nv);
    row.head(dx) = hx.Eq.row(i).transpose();
    add_eq(row, 0.0);
  }
  // facet membership
  for (int i = 0; i < facet.A_ub.rows(); ++i) {
    Vec row = Vec::Zero(nv);
    row.head(dx) = facet.A_ub.row(i).transpose();
    add_ub(row, facet.b_ub[i]);
  }
  for (int i = 0; i < facet.A_eq.rows(); ++i) {
    Vec row = Vec::Zero(nv);
    row.head(dx) = facet.A_eq.row(i).transpose();
    add_eq(row, facet.b_eq[i]);
  }
  // T membership for w
  for (int i = 0; i < ht.M.rows(); ++i) {
    Vec row = Vec::Zero(nv);
    row.segment(dx, dt) = ht.M.row(i).transpose();
    add_ub(row, 0.0);
  }
  for (int i = 0; i < ht.Eq.rows(); ++i) {
    Vec row = Vec::Zero(nv);
    row.segment(dx, dt) = ht.Eq.row(i).transpose();
    add_eq(row, 0.0);
  }
  // lifts: |(M x - w)_i| <= s
  for (int i = 0; i < dt; ++i) {
    int slot = dx + dt + (inf_norm ? 0 : i);
    Vec row = Vec::Zero(nv);
    row.head(dx) = M.row(i).transpose();
    row[dx + i] = -1.0;
    row[slot] = -1.0;
    add_ub(row, 0.0);
    Vec row2 = Vec::Zero(nv);
    row2.head(dx) = -M.row(i).transpose();
    row2[dx + i] = 1.0;
    row2[slot] = -1.0;
    add_ub(row2, 0.0);
  }
  Mat A_ub(int(ub.size()), nv);
  Vec b_ub(int(ub.size()));
  for (size_t i = 0; i < ub.size(); ++i) {
    A_ub.row(int(i)) = ub[i].transpose();
    b_ub[int(i)] = rhs[i];
  }
  Mat A_eq(int(eq.size()), nv);
  Vec b_eq(int(eq.size()));
  for (size_t i = 0; i < eq.size(); ++i) {
    A_eq.row(int(i)) = eq[i].transpose();
    b_eq[int(i)] = erhs[i];
  }
  Vec c = Vec::Zero(nv);
  c.tail(ls).setOnes();
  auto res = lp::solve(c, A_ub, b_ub, A_eq, b_eq);
  if (!res.ok()) return SideResult{};
  return SideResult{std::max(0.0, res.value), res.x.head(dx),
                    res.x.segment(dx, dt)};
}

// p = 2 helper: evaluate the distance at a unit vector.
double side_eval2(const Vec& x, const Mat& M, const ConvexCone& T, NormSpec r,
                  Vec* tpoint = nullptr) {
  auto mn = poly::min_norm_point(Vec(M * x), T, r);
  if (tpoint && mn.point) *tpoint = *mn.point;
  return mn.distance;
}

SideResult solve_side(const ConvexCone& X, const Mat& M, const ConvexCone& T,
                      NormSpec r, const SolverConfig& cfg) {
  SideResult best;
  if (X.is_zero()) return best;  // no unit vector in X
  const int dx = X.dim();
  if (r.p != PExp::Two) {
    for (const Facet& f : sphere_facets(r, dx)) {
      SideResult cand = side_facet_lp(X, M, T, r, f);
      if (cand.value < best.value) best = cand;
    }
    return best;
  }
  // p = 2: generator candidates + angular grid + window refinement.
  std::vector<Vec> cands;
  Mat gens = X.all_generators();
  for (int j = 0; j < gens.cols(); ++j) cands.push_back(gens.col(j));
  for (const Vec& s : sphere_points(r, dx, cfg.resolution))
    if (X.contains(s, kMemberTol)) cands.push_back(s);
  for (const Vec& x : cands) {
    Vec t;
    double v = side_eval2(x, M, T, r, &t);
    if (v < best.value) best = SideResult{v, x, t};
  }
  if (!best.x.size()) return best;
  if (dx == 2) {
    double theta = std::atan2(best.x[1], best.x[0]);
    double step = 2.0 * std::numbers::pi / cfg.resolution;
    while (step > cfg.refine_tol * 1e-2) {
      double lo = theta - step, hi = theta + step;
      for (int i = 0; i <= 16; ++i) {
        double th = lo + (hi - lo) * i / 16.0;
        Vec x(2);
        x << std::cos(th), std::sin(th);
        if (!X.contains(x, kMemberTol)) continue;
        Vec t;
        double v = side_eval2(x, M, T, r, &t);
        if (v < best.value) {
          best = SideResult{v, x, t};
          theta = th;
        }
      }
      step *= 0.35;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Coupled inner problem (fixed unit u, v*):
//   minimize   obj(n - c1, w - c2)
//   subject to n in Ntau, w in Ckappa, u.n = v*.w
// with c1 = G^T v*, c2 = G u. For p in {1, inf} this is a single LP with the
// max-norm objective; for p = 2 it is solved exactly by enumerating faces of
// the two cones and minimizing over the shared coupling scalar s.

enum class CoupledObjective { DiamondMax, DaggerSum };

struct CoupledResult {
  double value = kInf;
  Vec n, w;
};

CoupledResult coupled_lp(const ConvexCone& Ntau, const ConvexCone& Ckap,
                         const Vec& u, const Vec& vstar, const Vec& c1,
                         const Vec& c2, NormSpec p) {
  const int dn = Ntau.dim();
  const int dw = Ckap.dim();
  NormSpec q = p.dual();
  const bool q_inf = q.p == PExp::Inf;
  const bool p_inf = p.p == PExp::Inf;
  const int ls1 = q_inf ? 0 : dn;
  const int ls2 = p_inf ? 0 : dw;
  // vars: n (dn), w (dw), s1 (ls1), s2 (ls2), t (1)
  const int nv = dn + dw + ls1 + ls2 + 1;
  const int it = nv - 1;
  std::vector<Vec> ub;
  std::vector<double> rhs;
  std::vector<Vec> eq;
  std::vector<double> erhs;
  auto add_ub = [&](const Vec& row, double b) {
    ub.push_back(row);
    rhs.push_back(b);
  };
  const poly::HRep& hn = Ntau.hrep();
  const poly::HRep& hw = Ckap.hrep();
  for (int i = 0; i < hn.M.rows(); ++i) {
    Vec row = Vec::Zero(nv);
    row.head(dn) = hn.M.row(i).transpose();
    add_ub(row, 0.0);
  }
  for (int i = 0; i < hn.Eq.rows(); ++i) {
    Vec row = Vec::Zero(nv);
    row.head(dn) = hn.Eq.row(i).transpose();
    eq.push_back(row);
    erhs.push_back(0.0);
  }
  for (int i = 0; i < hw.M.rows(); ++i) {
    Vec row = Vec::Zero(nv);
    row.segment(dn, dw) = hw.M.row(i).transpose();
    add_ub(row, 0.0);
  }
  for (int i = 0; i < hw.Eq.rows(); ++i) {
    Vec row = Vec::Zero(nv);
    row.segment(dn, dw) = hw.Eq.row(i).transpose();
    eq.push_back(row);
    erhs.push_back(0.0);
  }
  {  // coupling u.n - v*.w = 0
    Vec row = Vec::Zero(nv);
    row.head(dn) = u;
    row.segment(dn, dw) = -vstar;
    eq.push_back(row);
    erhs.push_back(0.0);
  }
  // ||n - c1||_q <= t
  for (int i = 0; i < dn; ++i) {
    int slot = q_inf ? it : dn + dw + i;
    Vec r1 = Vec::Zero(nv), r2 = Vec::Zero(nv);
    r1[i] = 1.0;
    r1[slot] = -1.0;
    add_ub(r1, c1[i]);
    r2[i] = -1.0;
    r2[slot] = -1.0;
    add_ub(r2, -c1[i]);
  }
  if (!q_inf) {  // sum s1 <= t
    Vec row = Vec::Zero(nv);
    row.segment(dn + dw, dn).setOnes();
    row[it] = -1.0;
    add_ub(row, 0.0);
  }
  // ||w - c2||_p <= t
  for (int i = 0; i < dw; ++i) {
    int slot = p_inf ? it : dn + dw + ls1 + i;
    Vec r1 = Vec::Zero(nv), r2 = Vec::Zero(nv);
    r1[dn + i] = 1.0;
    r1[slot] = -1.0;
    add_ub(r1, c2[i]);
    r2[dn + i] = -1.0;
    r2[slot] = -1.0;
    add_ub(r2, -c2[i]);
  }
  if (!p_inf) {
    Vec row = Vec::Zero(nv);
    row.segment(dn + dw + ls1, dw).setOnes();
    row[it] = -1.0;
    add_ub(row, 0.0);
  }
  Mat A_ub(int(ub.size()), nv);
  Vec b_ub(int(ub.size()));
  for (size_t i = 0; i < ub.size(); ++i) {
    A_ub.row(int(i)) = ub[i].transpose();
    b_ub[int(i)] = rhs[i];
  }
  Mat A_eq(int(eq.size()), nv);
  Vec b_eq(int(eq.size()));
  for (size_t i = 0; i < eq.size(); ++i) {
    A_eq.row(int(i)) = eq[i].transpose();
    b_eq[int(i)] = erhs[i];
  }
  Vec c = Vec::Zero(nv);
  c[it] = 1.0;
  auto res = lp::solve(c, A_ub, b_ub, A_eq, b_eq);
  if (!res.ok()) return CoupledResult{};
  return CoupledResult{std::max(0.0, res.value), res.x.head(dn),
                       res.x.segment(dn, dw)};
}

struct ParamQuad {
  bool feasible = false;
  bool pinned = false;  // s forced to 0
  double A = 0, B = 0, C = 0;
  Vec z0, z1;  // recovery z(s) = z0 + s z1 (pinned: z0)
  double at(double s) const { return A * s * s + B * s + C; }
};

// phi(s) = min_z || Proj (Agen z - c) ||^2 s.t. (Agen^T gdir) . z = s.
ParamQuad solve_param(const Mat& Agen, const Vec& c, const Vec& gdir,
                      const Mat& Proj) {
  ParamQuad out;
  out.feasible = true;
  const int k = int(Agen.cols());
  Mat Ap = Proj * Agen;
  Vec cp = Proj * c;
  if (k == 0) {
    out.pinned = true;
    out.C = cp.squaredNorm();
    out.z0 = Vec(0);
    out.z1 = Vec(0);
    return out;
  }
  Vec g = Agen.transpose() * gdir;
  if (g.lpNorm<Eigen::Infinity>() <= 1e-12) {
    out.pinned = true;
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(Ap);
    out.z0 = cod.solve(cp);
    out.z1 = Vec::Zero(k);
    out.C = (Ap * out.z0 - cp).squaredNorm();
    return out;
  }
  // z(s) = s g / |g|^2 + Z y(s)
  Eigen::JacobiSVD<Mat> svd(g.transpose(), Eigen::ComputeFullV);
  Mat Z = svd.matrixV().rightCols(k - 1);
  Vec zp = g / g.squaredNorm();
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(Mat(Ap * Z));
  Vec y0 = cod.solve(cp);                  // s = 0
  Vec y1 = cod.solve(Vec(cp - Ap * zp));   // s = 1
  Vec z_0 = Z * y0;
  Vec z_1 = zp + Z * y1;
  out.z0 = z_0;
  out.z1 = z_1 - z_0;
  Vec r0 = Ap * out.z0 - cp;
  Vec r1 = Ap * out.z1;
  out.A = r1.squaredNorm();
  out.B = 2.0 * r0.dot(r1);
  out.C = r0.squaredNorm();
  return out;
}

// Combined minimization over s of max(phi1, phi2) or phi1 + phi2.
struct SCombine {
  bool ok = false;
  double s = 0;
  double value = kInf;
};

SCombine combine_quadratics(const ParamQuad& q1, const ParamQuad& q2,
                            CoupledObjective obj) {
  SCombine out;
  if (!q1.feasible || !q2.feasible) return out;
  std::vector<double> cands{0.0};
  bool free1 = !q1.pinned, free2 = !q2.pinned;
  if (!free1 || !free2) {
    // s pinned to 0 by at least one side
    out.ok = true;
    out.s = 0;
    out.value = obj == CoupledObjective::DaggerSum
                    ? q1.at(0) + q2.at(0)
                    : std::max(q1.at(0), q2.at(0));
    return out;
  }
  if (obj == CoupledObjective::DaggerSum) {
    double A = q1.A + q2.A, B = q1.B + q2.B;
    if (A > 1e-14) cands.push_back(-B / (2 * A));
  } else {
    if (q1.A > 1e-14) cands.push_back(-q1.B / (2 * q1.A));
    if (q2.A > 1e-14) cands.push_back(-q2.B / (2 * q2.A));
    double dA = q1.A - q2.A, dB = q1.B - q2.B, dC = q1.C - q2.C;
    if (std::abs(dA) > 1e-14) {
      double disc = dB * dB - 4 * dA * dC;
      if (disc >= 0) {
        double sq = std::sqrt(disc);
        cands.push_back((-dB + sq) / (2 * dA));
        cands.push_back((-dB - sq) / (2 * dA));
      }
    } else if (std::abs(dB) > 1e-14) {
      cands.push_back(-dC / dB);
    }
  }
  for (double s : cands) {
    double v = obj == CoupledObjective::DaggerSum
                   ? q1.at(s) + q2.at(s)
                   : std::max(q1.at(s), q2.at(s));
    if (v < out.value) {
      out.value = v;
      out.s = s;
      out.ok = true;
    }
  }
  return out;
}

CoupledResult coupled_faces(const ConvexCone& Ntau, const ConvexCone& Ckap,
                            const Vec& u, const Vec& vstar, const Vec& c1,
                            const Vec& c2, CoupledObjective obj) {
  const int dn = Ntau.dim();
  const int dw = Ckap.dim();
  const poly::GenRep& gn = Ntau.gen();
  const poly::GenRep& gw = Ckap.gen();
  Mat P1 = Mat::Identity(dn, dn);
  if (obj == CoupledObjective::DaggerSum) P1 -= u * u.transpose();
  Mat P2 = Mat::Identity(dw, dw);
  const int rn = int(gn.rays.cols());
  const int rw = int(gw.rays.cols());
  CoupledResult best;
  for (unsigned ms = 0; ms < (1u << rn); ++ms) {
    int ks = __builtin_popcount(ms);
    Mat A1(dn, ks + int(gn.lines.cols()));
    int col = 0;
    for (int i = 0; i < rn; ++i)
      if (ms & (1u << i)) A1.col(col++) = gn.rays.col(i);
    A1.rightCols(gn.lines.cols()) = gn.lines;
    ParamQuad q1 = solve_param(A1, c1, u, P1);
    for (unsigned mt = 0; mt < (1u << rw); ++mt) {
      int kt = __builtin_popcount(mt);
      Mat A2(dw, kt + int(gw.lines.cols()));
      int c = 0;
      for (int i = 0; i < rw; ++i)
        if (mt & (1u << i)) A2.col(c++) = gw.rays.col(i);
      A2.rightCols(gw.lines.cols()) = gw.lines;
      ParamQuad q2 = solve_param(A2, c2, vstar, P2);
      SCombine sc = combine_quadratics(q1, q2, obj);
      if (!sc.ok || sc.value >= best.value) continue;
      Vec z1 = q1.z0 + sc.s * q1.z1;
      Vec z2 = q2.z0 + sc.s * q2.z1;
      bool valid = true;
      for (int i = 0; i < ks; ++i)
        if (z1[i] < -1e-8) { valid = false; break; }
      if (valid)
        for (int i = 0; i < kt; ++i)
          if (z2[i] < -1e-8) { valid = false; break; }
      if (!valid) continue;
      best.value = sc.value;
      best.n = A1.cols() ? Vec(A1 * z1) : Vec(Vec::Zero(dn));
      best.w = A2.cols() ? Vec(A2 * z2) : Vec(Vec::Zero(dw));
    }
  }
  return best;
}

// Objective value of the coupled problem at a recovered witness.
double coupled_objective(const Vec& ustar, const Vec& v, const Vec& u,
                         NormSpec p, CoupledObjective obj) {
  if (obj == CoupledObjective::DaggerSum) {
    double uu = ustar.dot(u);
    return std::sqrt(
        std::max(0.0, ustar.squaredNorm() + v.squaredNorm() - uu * uu));
  }
  return std::max(dual_norm(ustar, p), vec_norm(v, p));
}

CoupledResult coupled_inner(const ConvexCone& Ntau, const ConvexCone& Ckap,
                            const Vec& u, const Vec& vstar, const Mat& G,
                            NormSpec p, CoupledObjective obj) {
  Vec c1 = G.transpose() * vstar;
  Vec c2 = G * u;
  if (p.p == PExp::Two) {
    CoupledResult r = coupled_faces(Ntau, Ckap, u, vstar, c1, c2, obj);
    if (std::isfinite(r.value)) r.value = std::sqrt(std::max(0.0, r.value));
    return r;
  }
  if (obj == CoupledObjective::DaggerSum)
    throw std::logic_error("dagger objective requires the Euclidean norm");
  return coupled_lp(Ntau, Ckap, u, vstar, c1, c2, p);
}

// ---------------------------------------------------------------------------
// Unit candidates on sphere(r) inside cone X.

std::vector<Vec> unit_candidates(const ConvexCone& X, NormSpec r,
                                 int resolution) {
  std::vector<Vec> out;
  if (X.is_zero()) return out;
  const int d = X.dim();
  auto push = [&](const Vec& x) {
    if (std::abs(vec_norm(x, r) - 1.0) > 1e-9) return;
    if (!X.contains(x, kMemberTol)) return;
    for (const Vec& y : out)
      if ((y - x).lpNorm<Eigen::Infinity>() < 1e-10) return;
    out.push_back(x);
  };
  // generators scaled to the sphere
  Mat gens = X.all_generators();
  for (int j = 0; j < gens.cols(); ++j) {
    Vec g = gens.col(j);
    push(g / vec_norm(g, r));
  }
  if (r.p != PExp::Two) {
    // exact vertices of facet-cap polytopes
    const poly::HRep& h = X.hrep();
    for (const Facet& f : sphere_facets(r, d)) {
      Mat A_ub(f.A_ub.rows() + h.M.rows(), d);
      Vec b_ub(f.A_ub.rows() + h.M.rows());
      A_ub << f.A_ub, h.M;
      b_ub << f.b_ub, Vec::Zero(h.M.rows());
      Mat A_eq(f.A_eq.rows() + h.Eq.rows(), d);
      Vec b_eq(f.A_eq.rows() + h.Eq.rows());
      A_eq << f.A_eq, h.Eq;
      b_eq << f.b_eq, Vec::Zero(h.Eq.rows());
      for (const Vec& v : polytope_vertices(A_ub, b_ub, A_eq, b_eq)) push(v);
    }
  }
  for (const Vec& s : sphere_points(r, d, resolution)) push(s);
  return out;
}

struct PoolEntry {
  double value;
  Witness w;
};

struct CoupledOutcome {
  WitnessedValue best;
  std::vector<PoolEntry> pool;
};

// Outer minimization for the coupled constants over one piece.
void coupled_piece(const sys::Piece& piece, const ConstraintSystem& s,
                   const SolverConfig& cfg, CoupledObjective obj,
                   CoupledOutcome& acc) {
  NormSpec p = s.norm;
  NormSpec q = p.dual();
  ConvexCone minus_nk = piece.k_normal.negate();
  std::vector<Vec> ucands = unit_candidates(piece.d_cell, p, cfg.pair_resolution);
  std::vector<Vec> vcands = unit_candidates(minus_nk, q, cfg.pair_resolution);
  if (ucands.empty() || vcands.empty()) return;

  auto eval_pair = [&](const Vec& u, const Vec& vs) -> std::optional<PoolEntry> {
    CoupledResult r =
        coupled_inner(piece.d_normal, piece.k_cell, u, vs, s.g.G, p, obj);
    if (!std::isfinite(r.value)) return std::nullopt;
    Witness w;
    w.norm = p;
    w.u = u;
    w.vstar = vs;
    w.ustar = r.n - s.g.G.transpose() * vs;
    w.v = r.w - s.g.G * u;
    return PoolEntry{r.value, std::move(w)};
  };

  double piece_best = kInf;
  Vec bu, bv;
  for (const Vec& u : ucands) {
    for (const Vec& vs : vcands) {
      auto e = eval_pair(u, vs);
      if (!e) continue;
      acc.pool.push_back(*e);
      if (e->value < piece_best) {
        piece_best = e->value;
        bu = u;
        bv = vs;
      }
      if (e->value < acc.best.value) {
        acc.best.value = e->value;
        acc.best.witness = e->w;
      }
    }
  }
  // Local refinement in the smooth case (2-D angular pattern search).
  if (p.p == PExp::Two && std::isfinite(piece_best) && s.n() == 2 && s.m() == 2) {
    double tu = std::atan2(bu[1], bu[0]);
    double tv = std::atan2(bv[1], bv[0]);
    double step = 2.0 * std::numbers::pi / cfg.pair_resolution;
    while (step > cfg.refine_tol * 1e-2) {
      bool improved = false;
      for (int du = -1; du <= 1; ++du) {
        for (int dv = -1; dv <= 1; ++dv) {
          if (!du && !dv) continue;
          double au = tu + du * step, av = tv + dv * step;
          Vec u(2), vs(2);
          u << std::cos(au), std::sin(au);
          vs << std::cos(av), std::sin(av);
          if (!piece.d_cell.contains(u, kMemberTol)) continue;
          if (!minus_nk.contains(vs, kMemberTol)) continue;
          auto e = eval_pair(u, vs);
          if (e && e->value < piece_best - 1e-15) {
            piece_best = e->value;
            tu = au;
            tv = av;
            improved = true;
            acc.pool.push_back(*e);
            if (e->value < acc.best.value) {
              acc.best.value = e->value;
              acc.best.witness = e->w;
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }
}

CoupledOutcome coupled_constant(const ConstraintSystem& s,
                                const SolverConfig& cfg, CoupledObjective obj) {
  CoupledOutcome acc;
  for (const auto& piece : sys::enumerate_pieces(s))
    coupled_piece(piece, s, cfg, obj, acc);
  std::sort(acc.pool.begin(), acc.pool.end(),
            [](const PoolEntry& a, const PoolEntry& b) { return a.value < b.value; });
  if (int(acc.pool.size()) > cfg.pool) acc.pool.resize(cfg.pool);
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points

namespace {

struct RgBothResult {
  WitnessedValue rg;
  WitnessedValue rg_over;
  int feasible_pieces = 0;
  int total_pieces = 0;
};

RgBothResult compute_rg_both(const ConstraintSystem& s, const SolverConfig& cfg) {
  RgBothResult out;
  NormSpec p = s.norm;
  NormSpec q = p.dual();
  for (const auto& piece : sys::enumerate_pieces(s)) {
    ++out.total_pieces;
    ConvexCone minus_nk = piece.k_normal.negate();
    SideResult alpha = solve_side(minus_nk, s.g.G.transpose(), piece.d_normal, q, cfg);
    if (!std::isfinite(alpha.value)) continue;
    SideResult beta = solve_side(piece.d_cell, s.g.G, piece.k_cell, p, cfg);
    if (!std::isfinite(beta.value)) continue;
    ++out.feasible_pieces;
    auto witness_of = [&]() {
      Witness w;
      w.norm = p;
      w.u = beta.x;
      w.v = beta.t - s.g.G * beta.x;
      w.vstar = alpha.x;
      w.ustar = alpha.t - s.g.G.transpose() * alpha.x;
      return w;
    };
    double vmax = std::max(alpha.value, beta.value);
    if (vmax < out.rg.value) {
      out.rg.value = vmax;
      out.rg.witness = witness_of();
    }
    double vsum = alpha.value + beta.value;
    if (vsum < out.rg_over.value) {
      out.rg_over.value = vsum;
      out.rg_over.witness = witness_of();
    }
  }
  return out;
}

}  // namespace

WitnessedValue compute_rg(const ConstraintSystem& s, const SolverConfig& cfg) {
  return compute_rg_both(s, cfg).rg;
}

WitnessedValue compute_rg_over(const ConstraintSystem& s, const SolverConfig& cfg) {
  return compute_rg_both(s, cfg).rg_over;
}

WitnessedValue compute_rg_diamond(const ConstraintSystem& s,
                                  const SolverConfig& cfg) {
  return coupled_constant(s, cfg, CoupledObjective::DiamondMax).best;
}

RgCirc compute_rg_circ(const ConstraintSystem& s, const SolverConfig& cfg) {
  CoupledOutcome diamond = coupled_constant(s, cfg, CoupledObjective::DiamondMax);
  RgCirc out;
  if (!std::isfinite(diamond.best.value)) return out;  // [inf, inf]
  double upper = kInf;
  double pool_lower = kInf;
  std::optional<Witness> best_w;
  for (const PoolEntry& e : diamond.pool) {
    auto res = matrices::min_opnorm_matrix(e.w, s.norm);
    pool_lower = std::min(pool_lower, res.lower);
    if (res.upper < upper) {
      upper = res.upper;
      Witness w = e.w;
      w.B = res.B;
      best_w = std::move(w);
    }
  }
  out.interval.lower = std::max(diamond.best.value, pool_lower);
  out.interval.upper = upper;
  out.witness = best_w;
  return out;
}

WitnessedValue compute_rg_dagger(const ConstraintSystem& s,
                                 const SolverConfig& cfg) {
  if (s.norm.p != PExp::Two)
    throw std::invalid_argument("compute_rg_dagger: Euclidean norm required");
  WitnessedValue v = coupled_constant(s, cfg, CoupledObjective::DaggerSum).best;
  if (v.witness) {
    // Cross-check against the closed-form Frobenius-minimal matrix.
    auto fr = matrices::frobenius_min_matrix(*v.witness);
    if (std::abs(fr.fro_norm - v.value) > 1e-8 * (1.0 + v.value))
      throw std::logic_error(
          "rg_dagger: disagreement with the Frobenius closed form");
  }
  return v;
}

std::pair<double, double> compute_mr_ssr_bounds(const ConstraintSystem& s,
                                                const SolverConfig& cfg) {
  NormSpec p = s.norm;
  NormSpec q = p.dual();
  double mr = kInf;
  for (const auto& piece : sys::enumerate_pieces(s)) {
    ConvexCone minus_nk = piece.k_normal.negate();
    SideResult alpha = solve_side(minus_nk, s.g.G.transpose(), piece.d_normal, q, cfg);
    mr = std::min(mr, alpha.value);
  }
  double ssr = kInf;
  poly::Cone td = poly::tangent_cone(s.D, s.xbar);
  poly::Cone tk = poly::tangent_cone(s.K, s.g.g0);
  for (const auto& dpart : td.parts)
    for (const auto& kpart : tk.parts) {
      SideResult beta = solve_side(dpart, s.g.G, kpart, p, cfg);
      ssr = std::min(ssr, beta.value);
    }
  return {mr, ssr};
}

ConstantsReport compute_constants(const ConstraintSystem& s,
                                  const SolverConfig& cfg) {
  ConstantsReport rep;
  rep.norm = s.norm;
  RgBothResult both = compute_rg_both(s, cfg);
  rep.rg = both.rg;
  rep.rg_over = both.rg_over;
  CoupledOutcome diamond = coupled_constant(s, cfg, CoupledObjective::DiamondMax);
  rep.rg_diamond = diamond.best;
  {
    RgCirc circ;
    if (std::isfinite(diamond.best.value)) {
      double upper = kInf, pool_lower = kInf;
      std::optional<Witness> best_w;
      for (const PoolEntry& e : diamond.pool) {
        auto res = matrices::min_opnorm_matrix(e.w, s.norm);
        pool_lower = std::min(pool_lower, res.lower);
        if (res.upper < upper) {
          upper = res.upper;
          Witness w = e.w;
          w.B = res.B;
          best_w = std::move(w);
        }
      }
      circ.interval = Interval{std::max(diamond.best.value, pool_lower), upper};
      circ.witness = best_w;
    }
    rep.rg_circ = circ.interval;
    rep.rg_circ_witness = circ.witness;
  }
  if (s.norm.p == PExp::Two) {
    rep.rg_dagger = compute_rg_dagger(s, cfg);
    rep.rg_dagger_applicable = true;
  }
  auto [mr, ssr] = compute_mr_ssr_bounds(s, cfg);
  rep.mr_bound = mr;
  rep.ssr_bound = ssr;
  rep.diag.pieces_total = both.total_pieces;
  rep.diag.pieces_feasible = both.feasible_pieces;
  rep.diag.resolution = cfg.resolution;
  rep.diag.pair_resolution = cfg.pair_resolution;
  return rep;
}

}  // namespace subrad::constants

namespace subrad::sys {
bool critical_zero(const ConstraintSystem& s, double tol) {
  return constants::compute_rg(s).value < tol;
}
}  // namespace subrad::sys
