#include "subrad/perturbations.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

namespace subrad::perturb {

// ---------------------------------------------------------------------------
// Zigzag

Zigzag::Zigzag(ZigzagSpec spec) : spec_(spec) {
  if (!(spec_.tau1 > 0) || !(spec_.ratio > 0) || !(spec_.ratio < 1) ||
      spec_.max_k < 2)
    throw std::invalid_argument("ZigzagSpec: need tau1 > 0, ratio in (0,1), max_k >= 2");
  const int K = spec_.max_k;
  tau_.resize(K + 2);
  for (int k = 1; k <= K + 2; ++k) tau_[k - 1] = spec_.tau1 * std::pow(spec_.ratio, k - 1);
  a_.resize(K);      // a_{k+1} for k = 1..K
  b_.resize(K + 1);  // b_k for k = 1..K+1
  chib_.resize(K + 1);
  for (int k = 1; k <= K; ++k)
    a_[k - 1] = tau_[k] + (tau_[k - 1] - tau_[k]) / (2.0 * (k + 1));
  for (int k = 1; k <= K + 1; ++k)
    b_[k - 1] = tau_[k - 1] - (tau_[k - 1] - tau_[k]) / (2.0 * (k + 1));
  // chi(b_k) = sum_{j>=k} (tau_j - tau_{j+1}) (1 - 1/(j+1)); geometric tail
  // summed until the terms vanish at double precision.
  for (int k = 1; k <= K + 1; ++k) {
    double s = 0.0;
    double tj = tau_[k - 1];
    for (int j = k;; ++j) {
      double tj1 = tj * spec_.ratio;
      double term = (tj - tj1) * (1.0 - 1.0 / (j + 1));
      s += term;
      tj = tj1;
      if (term < 1e-22 * tau_[k - 1] || j > k + 5000) break;
    }
    chib_[k - 1] = s;
  }
}

double Zigzag::tau(int k) const { return tau_.at(k - 1); }
double Zigzag::a(int k) const { return a_.at(k - 2); }
double Zigzag::b(int k) const { return b_.at(k - 1); }
double Zigzag::value_at_tau(int k) const { return chib_.at(k - 1); }

double Zigzag::eval_positive(double t) const {
  const int K = spec_.max_k;
  // Below the generated range: continue linearly through the origin.
  double a_last = a_.back();  // a_{K+1}
  if (t <= a_last) return t * (chib_[K] / a_last);  // chi(a_{K+1}) = chi(b_{K+1})
  // Find k with tau_{k+1} < t <= tau_k (k in 1..K).
  int lo = 1, hi = K;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (t > tau_[mid])  // t > tau_{mid+1}
      hi = mid;
    else
      lo = mid + 1;
  }
  int k = lo;
  if (t > b_[k - 1]) return chib_[k - 1];                       // flat (b_k, tau_k]
  if (t > a_[k - 1]) return chib_[k] + (t - a_[k - 1]);         // slope 1 (a_{k+1}, b_k]
  return chib_[k];  // (tau_{k+1}, a_{k+1}] lies in the flat piece below b_{k+1}
}

double Zigzag::operator()(double t) const {
  if (std::abs(t) > spec_.tau1 * (1.0 + 1e-12))
    throw std::domain_error("zigzag: |t| beyond tau_1");
  return eval_extended(t);
}

double Zigzag::eval_extended(double t) const {
  if (t == 0.0) return 0.0;
  double s = t < 0 ? -1.0 : 1.0;
  double at = std::min(std::abs(t), spec_.tau1);
  return s * eval_positive(at);
}

double zigzag_eval(const ZigzagSpec& spec, double t) { return Zigzag(spec)(t); }

// ---------------------------------------------------------------------------
// Staircase

Staircase::Staircase(StaircaseSpec spec) : spec_(spec) {
  if (!(spec_.a1 > 0) || !(spec_.ratio > 0) || !(spec_.ratio < 1) ||
      !(spec_.r1 > 0) || spec_.max_k < 2)
    throw std::invalid_argument("StaircaseSpec: invalid parameters");
  const int K = spec_.max_k;
  a_.resize(K + 1);
  b_.resize(K);
  for (int k = 1; k <= K + 1; ++k) a_[k - 1] = spec_.a1 * std::pow(spec_.ratio, k - 1);
  for (int k = 1; k <= K; ++k) {
    double r = spec_.r1 / double(k * k);
    double theta = r / (1.0 + r);
    b_[k - 1] = a_[k] + theta * (a_[k - 1] - a_[k]);
  }
  // Cumulative integral of phi from 0, with phi = 1 below the generated range.
  F_a_.resize(K + 1);
  F_b_.resize(K);
  F_a_[K] = a_[K];
  for (int k = K; k >= 1; --k) {
    double seg_par = 0.5 * (b_[k - 1] - a_[k]) * (b_[k - 1] - a_[k]);
    F_b_[k - 1] = F_a_[k] + seg_par;
    F_a_[k - 1] = F_b_[k - 1] + (a_[k - 1] - b_[k - 1]);
  }
}

double Staircase::a(int k) const { return a_.at(k - 1); }
double Staircase::b(int k) const { return b_.at(k - 1); }

double Staircase::ratio_bound(int n) const {
  return spec_.r1 / double(n * n);  // r_k decreasing in k
}

double Staircase::phi(double t) const {
  if (t < 0) throw std::domain_error("staircase phi: t < 0");
  if (t >= a_[0]) return 1.0;
  if (t <= a_.back()) return 1.0;  // capped region
  int lo = 1, hi = int(a_.size()) - 1;
  while (lo < hi) {  // find k with a_{k+1} <= t < a_k
    int mid = (lo + hi) / 2;
    if (t < a_[mid])
      lo = mid + 1;
    else
      hi = mid;
  }
  int k = lo;
  if (t < b_[k - 1]) return t - a_[k];
  return 1.0;
}

double Staircase::f(double x) const {
  double t = std::abs(x);
  if (t > a_[0]) throw std::domain_error("staircase f: |x| beyond a_1");
  if (t <= a_.back()) return t;
  int lo = 1, hi = int(a_.size()) - 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (t < a_[mid])
      lo = mid + 1;
    else
      hi = mid;
  }
  int k = lo;
  if (t < b_[k - 1]) {
    double dt = t - a_[k];
    return F_a_[k] + 0.5 * dt * dt;
  }
  return F_b_[k - 1] + (t - b_[k - 1]);
}

// ---------------------------------------------------------------------------
// Step-2 perturbation

Step2Perturbation::Step2Perturbation(const matrices::Witness& w, const Vec& xbar,
                                     ZigzagSpec base)
    : xbar_(xbar),
      u_(w.u),
      v_(w.v),
      ustar_(w.ustar),
      chi_u_(base) {
  if (!w.unit_invariants())
    throw std::invalid_argument("step2: witness unit invariants violated");
  uhat_star_ = dual_attainer(w.u, w.norm);
  vhat_ = dual_attainer(w.vstar, w.norm.dual());
  ustar_dot_u_ = ustar_.dot(u_);
  if (std::abs(ustar_dot_u_) > 1e-12) {
    ZigzagSpec scaled = base;
    scaled.tau1 = base.tau1 * std::abs(ustar_dot_u_);
    chi_ustar_.emplace(scaled);
  }
  certificate_ = vec_norm(v_, w.norm) + dual_norm(ustar_, w.norm);
}

Vec Step2Perturbation::operator()(const Vec& x) const {
  Vec dx = x - xbar_;
  double t = uhat_star_.dot(dx);
  double zeta;
  double s = ustar_.dot(dx);
  if (chi_ustar_)
    zeta = s - chi_ustar_->eval_extended(s);
  else
    zeta = s;
  return chi_u_.eval_extended(t) * v_ + zeta * vhat_;
}

// ---------------------------------------------------------------------------
// Catalog helpers

PerturbationSpec step4_linear(const matrices::Witness& w) {
  if (!w.B) throw std::invalid_argument("step4_linear: witness carries no matrix");
  PerturbationSpec p;
  p.kind = PerturbationSpec::Kind::Linear;
  p.linear_B = -(*w.B);
  p.declared_modulus = operator_norm(*w.B, w.norm);
  return p;
}

PerturbationSpec step2_spec(const matrices::Witness& w, ZigzagSpec base) {
  PerturbationSpec p;
  p.kind = PerturbationSpec::Kind::Zigzag;
  p.witness = w;
  p.zig = base;
  p.declared_modulus = vec_norm(w.v, w.norm) + dual_norm(w.ustar, w.norm);
  return p;
}

std::function<double(double)> piecewise_random_1d(double lip, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int knots = 33;
  auto xs = std::make_shared<std::vector<double>>();
  auto ys = std::make_shared<std::vector<double>>();
  double x = -1.0, y = 0.0;
  double dx = 2.0 / (knots - 1);
  for (int i = 0; i < knots; ++i) {
    xs->push_back(x);
    ys->push_back(y);
    y += lip * unif(rng) * dx;
    x += dx;
  }
  // anchor value 0 at t = 0
  int mid = (knots - 1) / 2;
  double shift = (*ys)[mid];
  for (double& v : *ys) v -= shift;
  return [xs, ys, lip](double t) {
    if (t <= xs->front()) return ys->front();
    if (t >= xs->back()) return ys->back();
    auto it = std::upper_bound(xs->begin(), xs->end(), t);
    size_t i = size_t(it - xs->begin()) - 1;
    double w = (t - (*xs)[i]) / ((*xs)[i + 1] - (*xs)[i]);
    return (1 - w) * (*ys)[i] + w * (*ys)[i + 1];
  };
}

double lip_estimate(const std::function<Vec(const Vec&)>& fn, const Vec& xbar,
                    double radius, int n_samples, std::uint64_t seed,
                    NormSpec norm) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int n = int(xbar.size());
  double best = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    Vec x(n), y(n);
    for (int i = 0; i < n; ++i) x[i] = xbar[i] + radius * unif(rng);
    for (int i = 0; i < n; ++i) y[i] = xbar[i] + radius * unif(rng);
    double dx = vec_norm(Vec(x - y), norm);
    if (dx < 1e-14) continue;
    best = std::max(best, vec_norm(Vec(fn(x) - fn(y)), norm) / dx);
  }
  return best;
}

}  // namespace subrad::perturb
