#include "subrad/polyhedral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "subrad/linprog.hpp"

namespace subrad::poly {

namespace {

constexpr double kTol = 1e-9;

Mat empty_rows(int n) { return Mat(0, n); }

// Orthonormal basis of the column span.
Mat orth_basis(const Mat& A, double tol = 1e-10) {
  if (A.cols() == 0 || A.rows() == 0) return Mat(A.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullU);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  double cut = std::max(tol, tol * smax);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

// Orthonormal basis of {x : A x = 0} for A with n columns.
Mat null_basis(const Mat& A, int n, double tol = 1e-10) {
  if (A.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  double cut = std::max(tol, tol * smax);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Orthonormal basis of the orthogonal complement of the column span.
Mat orth_complement(const Mat& A, int n) {
  if (A.cols() == 0) return Mat::Identity(n, n);
  return null_basis(A.transpose(), n);
}

Mat drop_zero_unit_rows(const Mat& R, double tol = 1e-12) {
  std::vector<int> keep;
  for (int i = 0; i < R.rows(); ++i)
    if (R.row(i).norm() > tol) keep.push_back(i);
  Mat out(int(keep.size()), R.cols());
  for (size_t i = 0; i < keep.size(); ++i)
    out.row(int(i)) = R.row(keep[i]).normalized();
  return out;
}

Mat dedup_rows(const Mat& R, double tol = 1e-9) {
  std::vector<int> keep;
  for (int i = 0; i < R.rows(); ++i) {
    bool dup = false;
    for (int j : keep)
      if ((R.row(i) - R.row(j)).lpNorm<Eigen::Infinity>() < tol) { dup = true; break; }
    if (!dup) keep.push_back(i);
  }
  Mat out(int(keep.size()), R.cols());
  for (size_t i = 0; i < keep.size(); ++i) out.row(int(i)) = R.row(keep[i]);
  return out;
}

Mat dedup_cols(const Mat& C, double tol = 1e-9) {
  std::vector<int> keep;
  for (int i = 0; i < C.cols(); ++i) {
    bool dup = false;
    for (int j : keep)
      if ((C.col(i) - C.col(j)).lpNorm<Eigen::Infinity>() < tol) { dup = true; break; }
    if (!dup) keep.push_back(i);
  }
  Mat out(C.rows(), int(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) out.col(int(i)) = C.col(keep[i]);
  return out;
}

void combinations_rec(int start, int k, int n, std::vector<int>& cur,
                      const std::function<void(const std::vector<int>&)>& fn) {
  if (k == 0) {
    fn(cur);
    return;
  }
  for (int i = start; i <= n - k; ++i) {
    cur.push_back(i);
    combinations_rec(i + 1, k - 1, n, cur, fn);
    cur.pop_back();
  }
}

void for_each_subset_of_size(int n, int k,
                             const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur;
  combinations_rec(0, k, n, cur, fn);
}

}  // namespace

// ---------------------------------------------------------------------------
// ConvexPoly / PolyUnion

int ConvexPoly::dim() const { return int(A.cols() > 0 ? A.cols() : E.cols()); }

bool ConvexPoly::contains(const Vec& x, double tol) const {
  double scale = 1.0 + x.norm();
  for (int i = 0; i < A.rows(); ++i)
    if (A.row(i).dot(x) > b[i] + tol * scale) return false;
  for (int i = 0; i < E.rows(); ++i)
    if (std::abs(E.row(i).dot(x) - d[i]) > tol * scale) return false;
  return true;
}

std::vector<int> ConvexPoly::active_rows(const Vec& x, double tol) const {
  std::vector<int> act;
  double scale = 1.0 + x.norm();
  for (int i = 0; i < A.rows(); ++i)
    if (std::abs(A.row(i).dot(x) - b[i]) <= tol * scale * (1.0 + A.row(i).norm()))
      act.push_back(i);
  return act;
}

ConvexPoly ConvexPoly::whole_space(int n) {
  return ConvexPoly{empty_rows(n), Vec(0), empty_rows(n), Vec(0)};
}

int PolyUnion::dim() const { return pieces.empty() ? 0 : pieces.front().dim(); }

bool PolyUnion::contains(const Vec& x, double tol) const {
  for (const auto& p : pieces)
    if (p.contains(x, tol)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// ConvexCone

ConvexCone ConvexCone::from_hrep(Mat M, Mat Eq, int dim) {
  ConvexCone c;
  c.dim_ = dim;
  HRep h;
  h.M = dedup_rows(drop_zero_unit_rows(M.cols() == dim ? M : empty_rows(dim)));
  h.Eq = dedup_rows(drop_zero_unit_rows(Eq.cols() == dim ? Eq : empty_rows(dim)));
  c.h_ = std::move(h);
  return c;
}

ConvexCone ConvexCone::from_generators(Mat rays, Mat lines, int dim) {
  ConvexCone c;
  c.dim_ = dim;
  GenRep g;
  auto clean = [&](const Mat& G) {
    if (G.rows() != dim) return Mat(dim, 0);
    return dedup_cols(drop_zero_unit_rows(G.transpose()).transpose());
  };
  g.rays = clean(rays);
  g.lines = clean(lines);
  c.g_ = std::move(g);
  return c;
}

ConvexCone ConvexCone::zero(int dim) {
  return from_generators(Mat(dim, 0), Mat(dim, 0), dim);
}

ConvexCone ConvexCone::whole(int dim) {
  return from_hrep(empty_rows(dim), empty_rows(dim), dim);
}

const HRep& ConvexCone::hrep() const {
  if (h_) return *h_;
  // Generator -> facet form. Work inside the linear span of the generators;
  // candidate facet normals come from (r-1)-subsets of generators.
  const GenRep& g = *g_;
  const int n = dim_;
  Mat gens(n, g.rays.cols() + 2 * g.lines.cols());
  gens << g.rays, g.lines, -g.lines;
  Mat S = orth_basis(gens);
  const int r = int(S.cols());
  HRep h;
  h.Eq = orth_complement(S, n).transpose();
  if (r == 0) {
    h.M = empty_rows(n);
    h_ = std::move(h);
    return *h_;
  }
  Mat G = S.transpose() * gens;  // r x k, generators in span coordinates
  std::vector<Vec> rows;
  auto try_normal = [&](const Vec& nu) {
    Vec cand = nu.normalized();
    for (int sgn = 0; sgn < 2; ++sgn) {
      Vec v = sgn ? Vec(-cand) : cand;
      bool valid = true;
      for (int j = 0; j < G.cols(); ++j)
        if (v.dot(G.col(j)) > kTol) { valid = false; break; }
      if (valid) rows.push_back(S * v);
    }
  };
  if (r == 1) {
    try_normal(Vec::Ones(1));
  } else {
    for_each_subset_of_size(int(G.cols()), r - 1, [&](const std::vector<int>& idx) {
      Mat B(r, r - 1);
      for (size_t t = 0; t < idx.size(); ++t) B.col(int(t)) = G.col(idx[t]);
      Mat ker = null_basis(B.transpose(), r);
      if (ker.cols() == 1) try_normal(ker.col(0));
    });
  }
  Mat M(int(rows.size()), n);
  for (size_t i = 0; i < rows.size(); ++i) M.row(int(i)) = rows[i].transpose();
  h.M = dedup_rows(drop_zero_unit_rows(M));
  h_ = std::move(h);
  return *h_;
}

const GenRep& ConvexCone::gen() const {
  if (g_) return *g_;
  // Facet -> generator form: split off lineality, enumerate extreme rays of
  // the pointed quotient from (j-1)-subsets of rows.
  const HRep& h = *h_;
  const int n = dim_;
  Mat Q = null_basis(h.Eq, n);
  const int k = int(Q.cols());
  GenRep g;
  g.rays = Mat(n, 0);
  g.lines = Mat(n, 0);
  if (k == 0) {
    g_ = std::move(g);
    return *g_;
  }
  Mat M1 = drop_zero_unit_rows(h.M * Q);
  if (M1.rows() == 0) {
    g.lines = Q;
    g_ = std::move(g);
    return *g_;
  }
  Mat N = null_basis(M1, k);
  g.lines = Q * N;
  Mat P = orth_complement(N, k);
  const int j = int(P.cols());
  if (j == 0) {
    g_ = std::move(g);
    return *g_;
  }
  Mat M2 = drop_zero_unit_rows(M1 * P);
  std::vector<Vec> rays;
  auto try_ray = [&](const Vec& rr) {
    Vec cand = rr.normalized();
    for (int sgn = 0; sgn < 2; ++sgn) {
      Vec v = sgn ? Vec(-cand) : cand;
      if ((M2 * v).maxCoeff() <= kTol) rays.push_back(Q * (P * v));
    }
  };
  if (j == 1) {
    try_ray(Vec::Ones(1));
  } else {
    for_each_subset_of_size(int(M2.rows()), j - 1, [&](const std::vector<int>& idx) {
      Mat B(int(idx.size()), j);
      for (size_t t = 0; t < idx.size(); ++t) B.row(int(t)) = M2.row(idx[t]);
      Mat ker = null_basis(B, j);
      if (ker.cols() == 1) try_ray(ker.col(0));
    });
  }
  Mat R(n, int(rays.size()));
  for (size_t i = 0; i < rays.size(); ++i) R.col(int(i)) = rays[i];
  g.rays = dedup_cols(drop_zero_unit_rows(R.transpose()).transpose());
  g_ = std::move(g);
  return *g_;
}

bool ConvexCone::contains(const Vec& x, double tol) const {
  const HRep& h = hrep();
  double scale = 1.0 + x.norm();
  for (int i = 0; i < h.M.rows(); ++i)
    if (h.M.row(i).dot(x) > tol * scale) return false;
  for (int i = 0; i < h.Eq.rows(); ++i)
    if (std::abs(h.Eq.row(i).dot(x)) > tol * scale) return false;
  return true;
}

ConvexCone ConvexCone::polar() const {
  if (h_) {
    return from_generators(h_->M.transpose(), h_->Eq.transpose(), dim_);
  }
  return from_hrep(g_->rays.transpose(), g_->lines.transpose(), dim_);
}

ConvexCone ConvexCone::negate() const {
  if (h_) return from_hrep(-h_->M, h_->Eq, dim_);
  return from_generators(-g_->rays, g_->lines, dim_);
}

ConvexCone ConvexCone::intersect(const ConvexCone& other) const {
  const HRep& a = hrep();
  const HRep& b = other.hrep();
  Mat M(a.M.rows() + b.M.rows(), dim_);
  M << a.M, b.M;
  Mat Eq(a.Eq.rows() + b.Eq.rows(), dim_);
  Eq << a.Eq, b.Eq;
  return from_hrep(M, Eq, dim_);
}

bool ConvexCone::is_zero(double tol) const {
  const GenRep& g = gen();
  (void)tol;
  return g.rays.cols() == 0 && g.lines.cols() == 0;
}

Mat ConvexCone::all_generators() const {
  const GenRep& g = gen();
  Mat out(dim_, g.rays.cols() + 2 * g.lines.cols());
  out << g.rays, g.lines, -g.lines;
  return out;
}

bool Cone::contains(const Vec& x, double tol) const {
  for (const auto& part : parts)
    if (part.contains(x, tol)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Tangent / normal cones

Cone tangent_cone(const ConvexPoly& P, const Vec& xbar, double tol) {
  if (!P.contains(xbar, tol)) return Cone::empty();
  std::vector<int> act = P.active_rows(xbar, tol);
  Mat M(int(act.size()), P.dim());
  for (size_t i = 0; i < act.size(); ++i) M.row(int(i)) = P.A.row(act[i]);
  Cone c;
  c.parts.push_back(ConvexCone::from_hrep(M, P.E, P.dim()));
  return c;
}

Cone tangent_cone(const PolyUnion& U, const Vec& xbar, double tol) {
  Cone c;
  for (const auto& p : U.pieces) {
    Cone tc = tangent_cone(p, xbar, tol);
    for (auto& part : tc.parts) c.parts.push_back(std::move(part));
  }
  return c;
}

Cone polar(const Cone& C) {
  if (C.is_empty()) return Cone::empty();
  if (C.parts.size() != 1)
    throw std::invalid_argument("polar: input cone must be convex (single part)");
  Cone out;
  out.parts.push_back(C.parts.front().polar());
  return out;
}

Cone frechet_normal_cone(const PolyUnion& U, const Vec& x, double tol) {
  std::optional<ConvexCone> acc;
  for (const auto& p : U.pieces) {
    if (!p.contains(x, tol)) continue;
    std::vector<int> act = p.active_rows(x, tol);
    Mat rays(p.dim(), int(act.size()));
    for (size_t i = 0; i < act.size(); ++i) rays.col(int(i)) = p.A.row(act[i]).transpose();
    ConvexCone normal =
        ConvexCone::from_generators(rays, p.E.transpose(), p.dim());
    acc = acc ? acc->intersect(normal) : normal;
  }
  if (!acc) return Cone::empty();
  Cone out;
  out.parts.push_back(std::move(*acc));
  return out;
}

// ---------------------------------------------------------------------------
// Sign-cell enumeration

namespace {

struct PieceLocal {
  std::vector<std::pair<int, double>> ineq;  // (hyperplane idx, sign s), row = s*h
  std::vector<int> eq;                       // hyperplane idx
  std::vector<Vec> ineq_rows;                // original active row vectors
  std::vector<Vec> eq_rows;
};

struct Arrangement {
  std::vector<Vec> hyps;  // unit, canonical orientation
  std::vector<PieceLocal> pieces;
  int n = 0;
};

int find_or_add_hyperplane(std::vector<Vec>& hyps, const Vec& a, double& sign_out) {
  Vec u = a.normalized();
  // canonical orientation: first component larger than tol is positive
  double s = 1.0;
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > 1e-10) {
      if (u[i] < 0) s = -1.0;
      break;
    }
  }
  Vec canon = s * u;
  for (size_t j = 0; j < hyps.size(); ++j) {
    if ((hyps[j] - canon).lpNorm<Eigen::Infinity>() < 1e-9) {
      sign_out = s;
      return int(j);
    }
  }
  hyps.push_back(canon);
  sign_out = s;
  return int(hyps.size()) - 1;
}

Arrangement build_arrangement(const PolyUnion& U, const Vec& xbar, double tol,
                              int max_hyperplanes) {
  Arrangement arr;
  arr.n = U.dim();
  for (const auto& p : U.pieces) {
    if (!p.contains(xbar, tol)) continue;
    PieceLocal loc;
    for (int i : p.active_rows(xbar, tol)) {
      Vec row = p.A.row(i).transpose();
      if (row.norm() < 1e-12) continue;
      double s;
      int idx = find_or_add_hyperplane(arr.hyps, row, s);
      // row = (s * |row|) * h; only the orientation matters for signs
      loc.ineq.emplace_back(idx, s);
      loc.ineq_rows.push_back(row);
    }
    for (int i = 0; i < p.E.rows(); ++i) {
      Vec row = p.E.row(i).transpose();
      if (row.norm() < 1e-12) continue;
      double s;
      int idx = find_or_add_hyperplane(arr.hyps, row, s);
      loc.eq.push_back(idx);
      loc.eq_rows.push_back(row);
    }
    arr.pieces.push_back(std::move(loc));
  }
  if (int(arr.hyps.size()) > max_hyperplanes)
    throw std::runtime_error("direction_cells: hyperplane cap exceeded");
  return arr;
}

// Strict feasibility of a (partial) sign assignment, by margin LP:
// max s s.t. tau_j h_j.d >= s (tau_j != 0), h_j.d = 0 (tau_j = 0), |d|<=1, s<=1.
bool cell_feasible(const Arrangement& arr, const std::vector<int>& tau,
                   size_t upto, Vec* representative = nullptr) {
  const int n = arr.n;
  std::vector<Vec> ub_rows;
  std::vector<double> ub_rhs;
  std::vector<Vec> eq_rows;
  for (size_t j = 0; j < upto; ++j) {
    Vec h = arr.hyps[j];
    Vec row(n + 1);
    if (tau[j] == 0) {
      Vec e(n + 1);
      e << h, 0.0;
      eq_rows.push_back(e);
    } else {
      row << -double(tau[j]) * h, 1.0;  // -tau h.d + s <= 0
      ub_rows.push_back(row);
      ub_rhs.push_back(0.0);
    }
  }
  for (int i = 0; i < n; ++i) {
    Vec r1 = Vec::Zero(n + 1), r2 = Vec::Zero(n + 1);
    r1[i] = 1.0;
    r2[i] = -1.0;
    ub_rows.push_back(r1);
    ub_rhs.push_back(1.0);
    ub_rows.push_back(r2);
    ub_rhs.push_back(1.0);
  }
  {
    Vec r = Vec::Zero(n + 1);
    r[n] = 1.0;
    ub_rows.push_back(r);
    ub_rhs.push_back(1.0);
  }
  Mat A_ub(int(ub_rows.size()), n + 1);
  Vec b_ub(int(ub_rows.size()));
  for (size_t i = 0; i < ub_rows.size(); ++i) {
    A_ub.row(int(i)) = ub_rows[i].transpose();
    b_ub[int(i)] = ub_rhs[i];
  }
  Mat A_eq(int(eq_rows.size()), n + 1);
  Vec b_eq = Vec::Zero(int(eq_rows.size()));
  for (size_t i = 0; i < eq_rows.size(); ++i) A_eq.row(int(i)) = eq_rows[i].transpose();
  Vec c = Vec::Zero(n + 1);
  c[n] = -1.0;
  auto res = lp::solve(c, A_ub, b_ub, A_eq, b_eq);
  bool strict_needed = false;
  for (size_t j = 0; j < upto; ++j)
    if (tau[j] != 0) strict_needed = true;
  if (!res.ok()) return false;
  if (strict_needed && -res.value <= 1e-7) return false;
  if (!strict_needed) {
    // all-equality cell: feasibility of the equality system (d may be 0)
    if (res.status != lp::Status::Optimal) return false;
  }
  if (representative) *representative = res.x.head(n);
  return true;
}

}  // namespace

std::vector<DirCell> direction_cells(const PolyUnion& U, const Vec& xbar,
                                     double tol, int max_hyperplanes) {
  const int n = U.dim();
  if (n > 3)
    throw std::runtime_error("direction_cells: dimension above 3 not supported");
  Arrangement arr = build_arrangement(U, xbar, tol, max_hyperplanes);
  std::vector<DirCell> cells;
  if (arr.pieces.empty()) return cells;
  const size_t J = arr.hyps.size();
  std::vector<int> tau(J, 0);

  std::function<void(size_t)> dfs = [&](size_t depth) {
    if (depth < J) {
      for (int s : {-1, 0, 1}) {
        tau[depth] = s;
        if (cell_feasible(arr, tau, depth + 1)) dfs(depth + 1);
      }
      return;
    }
    // full assignment; which pieces contain the cell?
    std::optional<ConvexCone> normal;
    bool in_union = false;
    for (const auto& loc : arr.pieces) {
      bool ok = true;
      for (auto [idx, s] : loc.ineq)
        if (double(tau[idx]) * s > 0.5) { ok = false; break; }
      if (ok)
        for (int idx : loc.eq)
          if (tau[idx] != 0) { ok = false; break; }
      if (!ok) continue;
      in_union = true;
      std::vector<Vec> rays, lines;
      for (size_t t = 0; t < loc.ineq.size(); ++t)
        if (tau[loc.ineq[t].first] == 0) rays.push_back(loc.ineq_rows[t]);
      for (size_t t = 0; t < loc.eq.size(); ++t)
        if (tau[loc.eq[t]] == 0) lines.push_back(loc.eq_rows[t]);
      Mat R(n, int(rays.size())), L(n, int(lines.size()));
      for (size_t t = 0; t < rays.size(); ++t) R.col(int(t)) = rays[t];
      for (size_t t = 0; t < lines.size(); ++t) L.col(int(t)) = lines[t];
      ConvexCone nc = ConvexCone::from_generators(R, L, n);
      normal = normal ? normal->intersect(nc) : nc;
    }
    if (!in_union) return;
    std::vector<Vec> mrows, eqrows;
    for (size_t j = 0; j < J; ++j) {
      if (tau[j] == 0)
        eqrows.push_back(arr.hyps[j]);
      else
        mrows.push_back(-double(tau[j]) * arr.hyps[j]);
    }
    Mat M(int(mrows.size()), n), Eq(int(eqrows.size()), n);
    for (size_t t = 0; t < mrows.size(); ++t) M.row(int(t)) = mrows[t].transpose();
    for (size_t t = 0; t < eqrows.size(); ++t) Eq.row(int(t)) = eqrows[t].transpose();
    DirCell cell;
    cell.closed_cell = ConvexCone::from_hrep(M, Eq, n);
    cell.normal = std::move(*normal);
    cell.sign_vector = tau;
    cells.push_back(std::move(cell));
  };
  dfs(0);
  return cells;
}

Cone dir_limiting_normal_cone(const PolyUnion& U, const Vec& xbar, const Vec& u,
                              double tol) {
  Cone out;
  for (const auto& cell : direction_cells(U, xbar, tol))
    if (cell.closed_cell.contains(u, tol)) out.parts.push_back(cell.normal);
  return out;
}

Cone limiting_normal_cone(const PolyUnion& U, const Vec& xbar, double tol) {
  Cone out;
  for (const auto& cell : direction_cells(U, xbar, tol))
    out.parts.push_back(cell.normal);
  return out;
}

// ---------------------------------------------------------------------------
// Minimum-norm points

namespace {

MinNormResult infinite_result() {
  return MinNormResult{std::numeric_limits<double>::infinity(), std::nullopt};
}

MinNormResult project_l2(const Vec& z, const ConvexPoly& P) {
  const int n = P.dim();
  const int mi = int(P.A.rows());
  if (mi > 18)
    throw std::runtime_error("min_norm_point: too many inequality rows");
  MinNormResult best = infinite_result();
  for (unsigned long mask = 0; mask < (1ul << mi); ++mask) {
    int cnt = int(__builtin_popcountl(mask)) + int(P.E.rows());
    Mat C(cnt, n);
    Vec e(cnt);
    int r = 0;
    for (int i = 0; i < mi; ++i) {
      if (mask & (1ul << i)) {
        C.row(r) = P.A.row(i);
        e[r++] = P.b[i];
      }
    }
    for (int i = 0; i < P.E.rows(); ++i) {
      C.row(r) = P.E.row(i);
      e[r++] = P.d[i];
    }
    Vec x;
    if (cnt == 0) {
      x = z;
    } else {
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(C);
      Vec corr = cod.solve(e - C * z);
      x = z + corr;
      if ((C * x - e).lpNorm<Eigen::Infinity>() > 1e-8 * (1.0 + e.lpNorm<Eigen::Infinity>()))
        continue;  // inconsistent subset
    }
    if (!P.contains(x, 1e-8)) continue;
    double dist = (x - z).norm();
    if (dist < best.distance) best = MinNormResult{dist, x};
  }
  return best;
}

MinNormResult distance_lp(const Vec& z, const ConvexPoly& P, NormSpec norm) {
  const int n = P.dim();
  const bool inf_norm = norm.p == PExp::Inf;
  const int extra = inf_norm ? 1 : n;
  const int nv = n + extra;
  std::vector<Vec> ub;
  std::vector<double> rhs;
  for (int i = 0; i < P.A.rows(); ++i) {
    Vec r = Vec::Zero(nv);
    r.head(n) = P.A.row(i).transpose();
    ub.push_back(r);
    rhs.push_back(P.b[i]);
  }
  for (int i = 0; i < n; ++i) {
    int slot = n + (inf_norm ? 0 : i);
    Vec r1 = Vec::Zero(nv), r2 = Vec::Zero(nv);
    r1[i] = 1.0;
    r1[slot] = -1.0;
    ub.push_back(r1);
    rhs.push_back(z[i]);  //  x_i - t <= z_i
    r2[i] = -1.0;
    r2[slot] = -1.0;
    ub.push_back(r2);
    rhs.push_back(-z[i]);  // -x_i - t <= -z_i
  }
  Mat A_ub(int(ub.size()), nv);
  Vec b_ub(int(ub.size()));
  for (size_t i = 0; i < ub.size(); ++i) {
    A_ub.row(int(i)) = ub[i].transpose();
    b_ub[int(i)] = rhs[i];
  }
  Mat A_eq(int(P.E.rows()), nv);
  A_eq.setZero();
  A_eq.leftCols(n) = P.E;
  Vec b_eq = P.d;
  Vec c = Vec::Zero(nv);
  c.tail(extra).setOnes();
  auto res = lp::solve(c, A_ub, b_ub, A_eq, b_eq);
  if (!res.ok()) return infinite_result();
  return MinNormResult{std::max(0.0, res.value), res.x.head(n)};
}

}  // namespace

MinNormResult min_norm_point(const Vec& z, const ConvexPoly& P, NormSpec n) {
  if (n.p == PExp::Two) return project_l2(z, P);
  return distance_lp(z, P, n);
}

MinNormResult min_norm_point(const Vec& z, const PolyUnion& U, NormSpec n) {
  MinNormResult best = infinite_result();
  for (const auto& p : U.pieces) {
    auto r = min_norm_point(z, p, n);
    if (r.distance < best.distance) best = r;
  }
  return best;
}

MinNormResult min_norm_point(const Vec& z, const ConvexCone& C, NormSpec n) {
  const HRep& h = C.hrep();
  ConvexPoly P{h.M, Vec::Zero(h.M.rows()), h.Eq, Vec::Zero(h.Eq.rows())};
  if (P.A.cols() == 0 && P.E.cols() == 0) {
    P.A = Mat(0, C.dim());
    P.E = Mat(0, C.dim());
  }
  return min_norm_point(z, P, n);
}

MinNormResult min_norm_point(const Vec& z, const Cone& C, NormSpec n) {
  MinNormResult best = infinite_result();
  for (const auto& part : C.parts) {
    auto r = min_norm_point(z, part, n);
    if (r.distance < best.distance) best = r;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Sampled comparisons

bool cone_subset_sampled(const Cone& A, const Cone& B, double tol) {
  if (A.is_empty()) return true;
  if (B.is_empty()) {
    for (const auto& part : A.parts) {
      if (!part.is_zero()) return false;
    }
    return true;
  }
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& part : A.parts) {
    Mat gens = part.all_generators();
    for (int j = 0; j < gens.cols(); ++j)
      if (!B.contains(gens.col(j), tol)) return false;
    if (gens.cols() == 0) {
      if (!B.contains(Vec::Zero(part.dim()), tol)) return false;
      continue;
    }
    for (int trial = 0; trial < 32; ++trial) {
      Vec combo = Vec::Zero(part.dim());
      for (int j = 0; j < gens.cols(); ++j) combo += unif(rng) * gens.col(j);
      if (!B.contains(combo, tol)) return false;
    }
  }
  return true;
}

bool cone_equal_sampled(const Cone& A, const Cone& B, double tol) {
  return cone_subset_sampled(A, B, tol) && cone_subset_sampled(B, A, tol);
}

}  // namespace subrad::poly
