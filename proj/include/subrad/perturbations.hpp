#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "subrad/matrices.hpp"
#include "subrad/norms.hpp"

namespace subrad::perturb {

/// Geometric generator for the strictly decreasing sequence tau_k = tau1 *
/// ratio^(k-1) together with the interleaved breakpoints
///   a_{k+1} = tau_{k+1} + (tau_k - tau_{k+1}) / (2(k+1)),
///   b_k     = tau_k     - (tau_k - tau_{k+1}) / (2(k+1)).
struct ZigzagSpec {
  double tau1 = 0.5;
  double ratio = 0.5;
  int max_k = 60;
};

/// The scalar zigzag: slope 1 on [a_{k+1}, b_k], constant on [b_k, a_k],
/// odd, zero at zero. Lipschitz with modulus exactly 1 and C^1 at each tau_k
/// with derivative 0.
class Zigzag {
 public:
  explicit Zigzag(ZigzagSpec spec = {});

  /// Strict evaluation; throws for |t| > tau_1.
  double operator()(double t) const;
  /// Evaluation extended constantly beyond tau_1 (still 1-Lipschitz).
  double eval_extended(double t) const;

  double tau(int k) const;       // 1-based
  double a(int k) const;         // defined for 2 <= k <= max_k + 1
  double b(int k) const;         // defined for 1 <= k <= max_k
  double value_at_tau(int k) const;
  const ZigzagSpec& spec() const { return spec_; }

 private:
  double eval_positive(double t) const;
  ZigzagSpec spec_;
  std::vector<double> tau_;   // tau_1 .. tau_{max_k+2}
  std::vector<double> a_;     // a_2 .. a_{max_k+1}   (a_[i] = a_{i+2})
  std::vector<double> b_;     // b_1 .. b_{max_k+1}
  std::vector<double> chib_;  // chi(b_k), same indexing as b_
};

double zigzag_eval(const ZigzagSpec& spec, double t);

/// Staircase data: a_k = a1 * ratio^(k-1) and b_k placed inside (a_{k+1}, a_k)
/// so that (b_k - a_{k+1}) / (a_k - b_k) = r1 / k^2, which vanishes as k grows.
struct StaircaseSpec {
  double a1 = 1.0;
  double ratio = 0.5;
  double r1 = 0.5;
  int max_k = 60;
};

/// f(x) = integral of phi over [0, |x|] with phi(t) = t - a_{k+1} on
/// [a_{k+1}, b_k) and 1 on [b_k, a_k); slope-1 pieces alternate with
/// parabolic dips that fade out towards 0.
class Staircase {
 public:
  explicit Staircase(StaircaseSpec spec = {});
  double f(double x) const;
  double phi(double t) const;  // t >= 0
  double a(int k) const;       // 1-based
  double b(int k) const;
  double ratio_bound(int n) const;  // max_{k >= n} (b_k - a_{k+1}) / (a_k - b_k)
  const StaircaseSpec& spec() const { return spec_; }

 private:
  StaircaseSpec spec_;
  std::vector<double> a_, b_, F_a_, F_b_;  // cumulative integral at breakpoints
};

/// The Lipschitz perturbation from the radius theorem's constructive step:
///   h(x) = chi_{tau_u}(uhat*.(x - xbar)) v + zeta(x - xbar) vhat,
/// with zeta(x) = u*.x - chi_{tau_{u*}}(u*.x) when u*.u != 0 and u*.x
/// otherwise. The certificate bounds lip(h; xbar) by ||v|| + ||u*||_*.
class Step2Perturbation {
 public:
  Step2Perturbation(const matrices::Witness& w, const Vec& xbar,
                    ZigzagSpec base = {});
  Vec operator()(const Vec& x) const;
  double modulus_certificate() const { return certificate_; }

 private:
  Vec xbar_, u_, v_, ustar_, uhat_star_, vhat_;
  double ustar_dot_u_ = 0;
  Zigzag chi_u_;
  std::optional<Zigzag> chi_ustar_;
  double certificate_ = 0;
};

/// Catalog entry consumed by the empirical subregularity checker.
struct PerturbationSpec {
  enum class Kind { None, Linear, Quadratic, Zigzag, Staircase, PiecewiseRandom };
  Kind kind = Kind::None;
  Mat linear_B;  // h(x) = linear_B (x - xbar)
  std::optional<matrices::Witness> witness;  // Zigzag (step-2) perturbation
  ZigzagSpec zig;
  StaircaseSpec stair;
  double pr_lip = 1.0;
  std::uint64_t pr_seed = 0;
  double declared_modulus = 0;
};

/// h(x) := -B(x - xbar) for a witness carrying B; modulus ||B||_p.
PerturbationSpec step4_linear(const matrices::Witness& w);

/// Wraps a step-2 perturbation as a catalog entry.
PerturbationSpec step2_spec(const matrices::Witness& w, ZigzagSpec base = {});

/// Random 1-D piecewise-linear function with Lipschitz modulus <= lip.
std::function<double(double)> piecewise_random_1d(double lip, std::uint64_t seed);

/// Sampled lower bound on the Lipschitz modulus of fn around xbar.
double lip_estimate(const std::function<Vec(const Vec&)>& fn, const Vec& xbar,
                    double radius, int n_samples, std::uint64_t seed,
                    NormSpec norm = NormSpec(PExp::Two));

}  // namespace subrad::perturb
