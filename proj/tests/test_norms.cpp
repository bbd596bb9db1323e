#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "subrad/norms.hpp"

using namespace subrad;

TEST_CASE("dual exponent pairing") {
  CHECK(NormSpec(PExp::One).dual().p == PExp::Inf);
  CHECK(NormSpec(PExp::Two).dual().p == PExp::Two);
  CHECK(NormSpec(PExp::Inf).dual().p == PExp::One);
}

TEST_CASE("vector norms") {
  Vec x(2);
  x << 3, 4;
  CHECK(vec_norm(x, NormSpec(PExp::Two)) == doctest::Approx(5.0));
  Vec y(2);
  y << 1, 1;
  CHECK(vec_norm(y, NormSpec(PExp::One)) == doctest::Approx(2.0));
  for (PExp p : {PExp::One, PExp::Two, PExp::Inf}) {
    double c = std::pow(2.0, -(p == PExp::One ? 1.0 : (p == PExp::Two ? 0.5 : 0.0)));
    Vec z(2);
    z << c, c;
    CHECK(vec_norm(z, NormSpec(p)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("operator norms of the worked-example matrix") {
  Mat B(2, 2);
  B << 0, 0, -0.5, -0.5;
  CHECK(operator_norm(B, NormSpec(PExp::Inf)) == doctest::Approx(1.0));
  CHECK(operator_norm(B, NormSpec(PExp::One)) == doctest::Approx(0.5));
  CHECK(operator_norm(B, NormSpec(PExp::Two)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("frobenius norm") {
  CHECK(frobenius_norm(Mat::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)));
  Mat B(2, 2);
  B << 0, 0, -0.5, -0.5;
  CHECK(frobenius_norm(B) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(frobenius_norm(Mat::Zero(3, 3)) == 0.0);
}

TEST_CASE("power iteration handles a start orthogonal to the top eigenvector") {
  Mat M(2, 2);
  M << 0.5, -0.5, -0.5, 0.5;  // top singular vector (1,-1), all-ones orthogonal
  CHECK(operator_norm(M, NormSpec(PExp::Two)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sphere points lie on the sphere and include coordinate vectors") {
  for (PExp p : {PExp::One, PExp::Two, PExp::Inf}) {
    for (int dim : {1, 2, 3}) {
      auto pts = sphere_points(NormSpec(p), dim, 16);
      REQUIRE(!pts.empty());
      for (const Vec& x : pts)
        CHECK(vec_norm(x, NormSpec(p)) == doctest::Approx(1.0).epsilon(1e-12));
      for (int i = 0; i < dim; ++i) {
        for (double s : {1.0, -1.0}) {
          bool found = false;
          for (const Vec& x : pts)
            if ((x - s * Vec::Unit(dim, i)).lpNorm<Eigen::Infinity>() < 1e-12)
              found = true;
          CHECK(found);
        }
      }
    }
  }
}

TEST_CASE("sup-norm sphere points sit on the unit square boundary") {
  for (const Vec& x : sphere_points(NormSpec(PExp::Inf), 2, 32))
    CHECK(std::abs(x.lpNorm<Eigen::Infinity>() - 1.0) < 1e-12);
}

TEST_CASE("l1 sphere points satisfy |x1| + |x2| = 1") {
  for (const Vec& x : sphere_points(NormSpec(PExp::One), 2, 32))
    CHECK(std::abs(x.lpNorm<1>() - 1.0) < 1e-12);
}

TEST_CASE("Hoelder duality on sampled spheres") {
  for (PExp p : {PExp::One, PExp::Two, PExp::Inf}) {
    NormSpec n{p};
    auto xs = sphere_points(n, 2, 64);
    auto duals = sphere_points(n.dual(), 2, 720);
    for (size_t i = 0; i < xs.size(); i += 7) {
      double best = 0;
      for (const Vec& d : duals) best = std::max(best, d.dot(xs[i]));
      CHECK(best == doctest::Approx(1.0).epsilon(2e-4));
    }
  }
}

TEST_CASE("operator norm dominates the action on sampled unit vectors") {
  Mat M(2, 2);
  M << 1.25, -0.5, 0.75, 2.0;
  for (PExp p : {PExp::One, PExp::Two, PExp::Inf}) {
    NormSpec n{p};
    double on = operator_norm(M, n);
    double attained = 0;
    for (const Vec& x : sphere_points(n, 2, 2048)) {
      double v = vec_norm(Vec(M * x), n);
      CHECK(v <= on * (1 + 1e-9));
      attained = std::max(attained, v);
    }
    CHECK(attained == doctest::Approx(on).epsilon(1e-4));
  }
}

TEST_CASE("spectral norm bounded by frobenius on pseudorandom matrices") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unif(-2, 2);
  for (int t = 0; t < 40; ++t) {
    Mat M(3, 3);
    for (int i = 0; i < 9; ++i) M(i / 3, i % 3) = unif(rng);
    CHECK(operator_norm(M, NormSpec(PExp::Two)) <= frobenius_norm(M) + 1e-12);
  }
}

TEST_CASE("dual attainers pair exactly") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unif(-1, 1);
  for (PExp p : {PExp::One, PExp::Two, PExp::Inf}) {
    NormSpec n{p};
    for (int t = 0; t < 25; ++t) {
      Vec x(3);
      for (int i = 0; i < 3; ++i) x[i] = unif(rng);
      if (vec_norm(x, n) < 1e-6) continue;
      Vec z = dual_attainer(x, n);
      CHECK(dual_norm(z, n) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(z.dot(x) == doctest::Approx(vec_norm(x, n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sphere_points rejects unsupported dimensions") {
  CHECK_THROWS(sphere_points(NormSpec(PExp::Two), 4, 16));
  CHECK_THROWS(sphere_points(NormSpec(PExp::Two), 2, 2));
}
