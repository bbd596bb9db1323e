#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "subrad/constants.hpp"

namespace subrad::constants {

namespace {

using poly::DirCell;

std::vector<Vec> box_grid(int dim, double half, int points, bool include_zero) {
  std::vector<Vec> out;
  std::vector<int> idx(dim, 0);
  double step = 2.0 * half / (points - 1);
  for (;;) {
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x[i] = -half + step * idx[i];
    out.push_back(x);
    int i = 0;
    while (i < dim && ++idx[i] == points) idx[i++] = 0;
    if (i == dim) break;
  }
  if (include_zero) out.push_back(Vec::Zero(dim));
  return out;
}

// Bitmask of cells whose closed cell contains the direction.
std::uint64_t cell_mask(const std::vector<DirCell>& cells, const Vec& dir) {
  std::uint64_t m = 0;
  for (size_t i = 0; i < cells.size(); ++i)
    if (cells[i].closed_cell.contains(dir, 1e-9)) m |= (1ull << i);
  return m;
}

bool in_masked_union(const std::vector<DirCell>& cells, std::uint64_t mask,
                     const Vec& x) {
  for (size_t i = 0; i < cells.size(); ++i)
    if ((mask & (1ull << i)) && cells[i].normal.contains(x, 1e-9)) return true;
  return false;
}

}  // namespace

OracleReport brute_force_oracle(const sys::ConstraintSystem& s,
                                const OracleConfig& cfg) {
  if (s.n() > 3 || s.m() > 3)
    throw std::invalid_argument("brute_force_oracle: dimensions above 3");
  OracleReport rep;
  const NormSpec p = s.norm;
  const NormSpec q = p.dual();
  const Mat& G = s.g.G;
  const Mat Gt = G.transpose();

  auto d_cells = poly::direction_cells(s.D, s.xbar);
  auto k_cells = poly::direction_cells(s.K, s.g.g0);
  if (d_cells.size() > 62 || k_cells.size() > 62)
    throw std::runtime_error("brute_force_oracle: too many cells");

  const auto u_grid = sphere_points(p, s.n(), cfg.sphere_resolution);
  const auto v_grid = sphere_points(q, s.m(), cfg.sphere_resolution);
  const auto z_grid = box_grid(s.n(), cfg.box, cfg.box_points, true);
  const auto w_grid = box_grid(s.m(), cfg.box, cfg.box_points, true);

  std::vector<std::uint64_t> u_masks(u_grid.size());
  for (size_t i = 0; i < u_grid.size(); ++i) u_masks[i] = cell_mask(d_cells, u_grid[i]);
  std::vector<std::uint64_t> w_masks(w_grid.size());
  for (size_t i = 0; i < w_grid.size(); ++i) w_masks[i] = cell_mask(k_cells, w_grid[i]);

  // Per v*: bitmask of K-cells whose normal cone contains -v*.
  auto vstar_kmask = [&](const Vec& vs) {
    std::uint64_t m = 0;
    for (size_t j = 0; j < k_cells.size(); ++j)
      if (k_cells[j].normal.contains(Vec(-vs), 1e-9)) m |= (1ull << j);
    return m;
  };
  std::vector<std::uint64_t> v_kmasks(v_grid.size());
  for (size_t j = 0; j < v_grid.size(); ++j) v_kmasks[j] = vstar_kmask(v_grid[j]);

  // A(u-mask, v*): min ||z||_q with z + G^T v* in the masked union of D normals.
  std::map<std::pair<std::uint64_t, int>, double> a_memo;
  auto a_value = [&](std::uint64_t umask, int vidx) {
    auto key = std::make_pair(umask, vidx);
    auto it = a_memo.find(key);
    if (it != a_memo.end()) return it->second;
    double best = kInf;
    Vec shift = Gt * v_grid[vidx];
    for (const Vec& z : z_grid) {
      if (vec_norm(z, q) >= best) continue;
      if (in_masked_union(d_cells, umask, Vec(z + shift))) best = vec_norm(z, q);
    }
    a_memo.emplace(key, best);
    return best;
  };

  // Feasible w indices for each v*-K-mask value.
  std::map<std::uint64_t, std::vector<int>> wf_memo;
  auto feasible_w = [&](std::uint64_t kmask) -> const std::vector<int>& {
    auto it = wf_memo.find(kmask);
    if (it != wf_memo.end()) return it->second;
    std::vector<int> idx;
    for (size_t i = 0; i < w_grid.size(); ++i)
      if (w_masks[i] & kmask) idx.push_back(int(i));
    return wf_memo.emplace(kmask, std::move(idx)).first->second;
  };

  for (size_t ui = 0; ui < u_grid.size(); ++ui) {
    if (!u_masks[ui]) continue;
    Vec Gu = G * u_grid[ui];
    for (size_t vj = 0; vj < v_grid.size(); ++vj) {
      if (!v_kmasks[vj]) continue;
      double a = a_value(u_masks[ui], int(vj));
      if (!std::isfinite(a)) continue;
      double b = kInf;
      for (int wi : feasible_w(v_kmasks[vj]))
        b = std::min(b, vec_norm(Vec(w_grid[wi] - Gu), p));
      if (!std::isfinite(b)) continue;
      rep.rg = std::min(rep.rg, std::max(a, b));
      rep.rg_over = std::min(rep.rg_over, a + b);
    }
  }

  // Undirected bounds: all cells reachable.
  {
    std::uint64_t all_d = d_cells.empty() ? 0 : (1ull << d_cells.size()) - 1;
    std::uint64_t all_k = k_cells.empty() ? 0 : (1ull << k_cells.size()) - 1;
    for (size_t vj = 0; vj < v_grid.size(); ++vj) {
      bool feasible = false;
      for (size_t j = 0; j < k_cells.size() && !feasible; ++j)
        if (k_cells[j].normal.contains(Vec(-v_grid[vj]), 1e-9)) feasible = true;
      if (!feasible || !all_d || !all_k) continue;
      double best = kInf;
      Vec shift = Gt * v_grid[vj];
      for (const Vec& z : z_grid) {
        if (vec_norm(z, q) >= best) continue;
        if (in_masked_union(d_cells, all_d, Vec(z + shift))) best = vec_norm(z, q);
      }
      rep.mr_bound = std::min(rep.mr_bound, best);
    }
    poly::Cone td = poly::tangent_cone(s.D, s.xbar);
    poly::Cone tk = poly::tangent_cone(s.K, s.g.g0);
    for (const Vec& u : u_grid) {
      if (!td.contains(u, 1e-9)) continue;
      Vec Gu = G * u;
      for (const Vec& w : w_grid) {
        if (!tk.contains(w, 1e-9)) continue;
        rep.ssr_bound = std::min(rep.ssr_bound, vec_norm(Vec(w - Gu), p));
      }
    }
  }

  // Coupled constants on coarser grids with a coupling tolerance.
  {
    const auto pu_grid = sphere_points(p, s.n(), cfg.pair_sphere_resolution);
    const auto pv_grid = sphere_points(q, s.m(), cfg.pair_sphere_resolution);
    const auto pz_grid = box_grid(s.n(), cfg.box, cfg.pair_box_points, true);
    const auto pw_grid = box_grid(s.m(), cfg.box, cfg.pair_box_points, true);
    double hz = 2.0 * cfg.box / (cfg.pair_box_points - 1);
    double ctol = 0.75 * hz * (std::sqrt(double(s.n())) + std::sqrt(double(s.m())));
    const bool dagger = p.p == PExp::Two;
    for (const Vec& u : pu_grid) {
      std::uint64_t umask = cell_mask(d_cells, u);
      if (!umask) continue;
      Vec Gu = G * u;
      for (const Vec& vs : pv_grid) {
        std::uint64_t kmask = vstar_kmask(vs);
        if (!kmask) continue;
        Vec shift = Gt * vs;
        std::vector<std::pair<double, const Vec*>> zf, wf;
        for (const Vec& z : pz_grid)
          if (in_masked_union(d_cells, umask, Vec(z + shift)))
            zf.emplace_back(vec_norm(z, q), &z);
        for (const Vec& w : pw_grid) {
          std::uint64_t wm = cell_mask(k_cells, w);
          if (wm & kmask) wf.emplace_back(vec_norm(Vec(w - Gu), p), &w);
        }
        std::sort(zf.begin(), zf.end(),
                  [](auto& a, auto& b) { return a.first < b.first; });
        std::sort(wf.begin(), wf.end(),
                  [](auto& a, auto& b) { return a.first < b.first; });
        for (auto& [nz, zp] : zf) {
          if (nz >= rep.rg_diamond && (!dagger || nz * nz >= rep.rg_dagger * rep.rg_dagger))
            break;
          double zu = zp->dot(u);
          for (auto& [bw, wp] : wf) {
            if (std::max(nz, bw) >= rep.rg_diamond &&
                (!dagger || bw >= rep.rg_dagger))
              break;
            double vv = vs.dot(Vec(*wp - Gu));
            if (std::abs(zu - vv) > ctol) continue;
            rep.rg_diamond = std::min(rep.rg_diamond, std::max(nz, bw));
            if (dagger) {
              double nz2 = zp->squaredNorm();
              double bw2 = (*wp - Gu).squaredNorm();
              double val = std::sqrt(std::max(0.0, nz2 + bw2 - zu * zu));
              rep.rg_dagger = std::min(rep.rg_dagger, val);
            }
          }
        }
      }
    }
    double sphere_step = 2.0 * std::numbers::pi / cfg.pair_sphere_resolution;
    rep.grid_error_coupled =
        2.0 * sphere_step * (1.0 + operator_norm(G, NormSpec(PExp::Two))) + hz +
        2.0 * ctol;
  }

  double sphere_step = 2.0 * std::numbers::pi / cfg.sphere_resolution;
  double h = 2.0 * cfg.box / (cfg.box_points - 1);
  rep.grid_error =
      2.0 * sphere_step * (1.0 + operator_norm(G, NormSpec(PExp::Two))) +
      h * std::sqrt(double(std::max(s.n(), s.m())));
  return rep;
}

}  // namespace subrad::constants
