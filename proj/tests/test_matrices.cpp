#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "subrad/matrices.hpp"
#include "subrad/verify.hpp"

using namespace subrad;
using matrices::Witness;

namespace {
Vec vec(std::initializer_list<double> v) {
  Vec x(int(v.size()));
  int i = 0;
  for (double t : v) x[i++] = t;
  return x;
}

Witness paper_witness(PExp p) {
  double c = std::pow(2.0, -(p == PExp::One ? 1.0 : (p == PExp::Two ? 0.5 : 0.0)));
  Witness w;
  w.norm = NormSpec(p);
  w.u = vec({c, c});
  w.v = vec({0, -c});
  w.ustar = vec({-0.5, -0.5});
  w.vstar = vec({0, 1});
  return w;
}
}  // namespace

TEST_CASE("witness invariants for the worked example") {
  for (PExp p : {PExp::One, PExp::Two, PExp::Inf}) {
    Witness w = paper_witness(p);
    CHECK(w.unit_invariants());
    CHECK(w.compatible());
  }
}

TEST_CASE("compatible matrix: closed-form substitution with unit u, v*") {
  // u = e1, v* = e1, u* = (a, b), v = (a, d)  ->  B = [[a, b], [d, 0]]
  double a = 0.7, bb = -1.3, d = 0.4;
  Witness w;
  w.norm = NormSpec(PExp::Two);
  w.u = vec({1, 0});
  w.vstar = vec({1, 0});
  w.ustar = vec({a, bb});
  w.v = vec({a, d});
  Mat B = matrices::compatible_matrix(w);
  CHECK(B(0, 0) == doctest::Approx(a));
  CHECK(B(0, 1) == doctest::Approx(bb));
  CHECK(B(1, 0) == doctest::Approx(d));
  CHECK(B(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("compatible matrix satisfies both constraints on the paper witness") {
  for (PExp p : {PExp::One, PExp::Two, PExp::Inf}) {
    Witness w = paper_witness(p);
    Mat B = matrices::compatible_matrix(w);
    CHECK(w.constraint_residual(B) <= 1e-12);
  }
}

TEST_CASE("zero witness gives the zero matrix") {
  Witness w;
  w.norm = NormSpec(PExp::Two);
  w.u = vec({1, 0});
  w.vstar = vec({1, 0});
  w.ustar = vec({0, 0});
  w.v = vec({0, 0});
  CHECK(matrices::compatible_matrix(w).lpNorm<Eigen::Infinity>() == 0.0);
  auto fr = matrices::frobenius_min_matrix(w);
  CHECK(fr.fro_norm == 0.0);
}

TEST_CASE("incompatible inputs are rejected with the violated identity named") {
  Witness w;
  w.norm = NormSpec(PExp::Two);
  w.u = vec({1, 0});
  w.vstar = vec({1, 0});
  w.ustar = vec({1, 0});
  w.v = vec({0, 1});  // u*.u = 1 != 0 = v*.v
  CHECK_THROWS_AS(matrices::compatible_matrix(w), std::invalid_argument);
  try {
    matrices::compatible_matrix(w);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("u*^T u = v*^T v") != std::string::npos);
  }
}

TEST_CASE("frobenius minimal matrix on the paper witness") {
  Witness w = paper_witness(PExp::Two);
  auto fr = matrices::frobenius_min_matrix(w);
  CHECK(fr.fro_norm * fr.fro_norm == doctest::Approx(0.5).epsilon(1e-12));
  Mat expected(2, 2);
  expected << 0, 0, -0.5, -0.5;
  CHECK((fr.B - expected).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("frobenius minimal matrix requires the euclidean norm") {
  Witness w = paper_witness(PExp::One);
  CHECK_THROWS_AS(matrices::frobenius_min_matrix(w), std::invalid_argument);
}

TEST_CASE("frobenius optimality against the operator-norm search machinery") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int t = 0; t < 50; ++t) {
    Witness w = verify::random_compatible_witness(rng, dim(rng), dim(rng));
    auto fr = matrices::frobenius_min_matrix(w);
    auto searched = matrices::min_opnorm_matrix(
        w, w.norm, {}, matrices::SearchObjective::Frobenius);
    CHECK(searched.upper >= fr.fro_norm - 1e-8);
    CHECK(w.constraint_residual(searched.B) <= 1e-10);
  }
}

TEST_CASE("minimal operator norm on the paper witness") {
  {
    Witness w = paper_witness(PExp::Two);
    auto r = matrices::min_opnorm_matrix(w, w.norm);
    CHECK(r.lower == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r.upper == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(r.upper >= r.lower - 1e-12);
  }
  {
    Witness w = paper_witness(PExp::Inf);
    auto r = matrices::min_opnorm_matrix(w, w.norm);
    CHECK(r.upper == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    Witness w = paper_witness(PExp::One);
    auto r = matrices::min_opnorm_matrix(w, w.norm);
    CHECK(r.upper == doctest::Approx(0.5).epsilon(1e-6));
  }
}

TEST_CASE("zero witness minimizes to the zero matrix") {
  Witness w;
  w.norm = NormSpec(PExp::Two);
  w.u = vec({0, 1});
  w.vstar = vec({0, 1});
  w.ustar = vec({0, 0});
  w.v = vec({0, 0});
  auto r = matrices::min_opnorm_matrix(w, w.norm);
  CHECK(r.upper <= 1e-9);
  CHECK(r.lower == 0.0);
}

TEST_CASE("operator-norm sandwich on random witnesses") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 30; ++t) {
    Witness w = verify::random_compatible_witness(rng, 2, 2);
    for (PExp p : {PExp::One, PExp::Two, PExp::Inf}) {
      Witness wp = w;
      wp.norm = NormSpec(p);
      // renormalize for the target norm, then restore compatibility
      wp.u /= vec_norm(wp.u, wp.norm);
      wp.vstar /= dual_norm(wp.vstar, wp.norm);
      wp.v = wp.v + (wp.ustar.dot(wp.u) - wp.vstar.dot(wp.v)) /
                        wp.vstar.squaredNorm() * wp.vstar;
      if (!wp.compatible() || !wp.unit_invariants()) continue;
      auto r = matrices::min_opnorm_matrix(wp, wp.norm);
      CHECK(r.lower <= r.upper + 1e-12);
      if (p == PExp::Two) {
        auto fr = matrices::frobenius_min_matrix(wp);
        CHECK(r.lower <= fr.fro_norm + 1e-9);
        CHECK(r.upper <= fr.fro_norm + 1e-8);
      }
    }
  }
}
