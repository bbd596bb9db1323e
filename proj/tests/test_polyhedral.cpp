#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "subrad/polyhedral.hpp"

using namespace subrad;
using namespace subrad::poly;

namespace {

Mat rows(std::initializer_list<std::initializer_list<double>> r) {
  Mat m(int(r.size()), int(r.begin()->size()));
  int i = 0;
  for (auto& row : r) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}
Vec vec(std::initializer_list<double> v) {
  Vec x(int(v.size()));
  int i = 0;
  for (double t : v) x[i++] = t;
  return x;
}

// D = {|x2| <= x1}
PolyUnion make_D() {
  PolyUnion u;
  ConvexPoly p;
  p.A = rows({{-1, 1}, {-1, -1}});
  p.b = Vec::Zero(2);
  p.E = Mat(0, 2);
  p.d = Vec(0);
  u.pieces.push_back(p);
  return u;
}

// K = complementary angle: R+ x {0} union {0} x R+
PolyUnion make_K() {
  PolyUnion u;
  ConvexPoly p1;
  p1.A = rows({{-1, 0}});
  p1.b = Vec::Zero(1);
  p1.E = rows({{0, 1}});
  p1.d = Vec::Zero(1);
  ConvexPoly p2;
  p2.A = rows({{0, -1}});
  p2.b = Vec::Zero(1);
  p2.E = rows({{1, 0}});
  p2.d = Vec::Zero(1);
  u.pieces = {p1, p2};
  return u;
}

Cone single(const ConvexCone& c) {
  Cone out;
  out.parts.push_back(c);
  return out;
}

}  // namespace

TEST_CASE("membership in unions") {
  auto D = make_D();
  auto K = make_K();
  CHECK(D.contains(vec({1, 1}), 1e-9));
  CHECK(!K.contains(vec({1, 1}), 1e-9));
  CHECK(K.contains(vec({0, 0}), 1e-9));
  CHECK(K.contains(vec({2, 0}), 1e-9));
  CHECK(!D.contains(vec({-0.5, 0}), 1e-9));
}

TEST_CASE("tangent cones of the worked example") {
  auto D = make_D();
  // at the apex the tangent cone is D itself
  Cone t0 = tangent_cone(D, vec({0, 0}));
  CHECK(t0.contains(vec({1, 0.5})));
  CHECK(t0.contains(vec({1, 1})));
  CHECK(!t0.contains(vec({0, 1})));
  // at (1,1) only the row x2 - x1 <= 0 is active
  Cone t1 = tangent_cone(D, vec({1, 1}));
  CHECK(t1.contains(vec({-1, -5})));
  CHECK(t1.contains(vec({1, 1})));
  CHECK(!t1.contains(vec({0, 1})));
  // K at (2,0): directions along the ray only
  Cone t2 = tangent_cone(make_K(), vec({2, 0}));
  CHECK(t2.contains(vec({-1, 0})));
  CHECK(t2.contains(vec({1, 0})));
  CHECK(!t2.contains(vec({0, 1})));
  // outside the set: empty marker
  CHECK(tangent_cone(D, vec({-1, 0})).is_empty());
}

TEST_CASE("polar cones") {
  // polar of the whole plane is {0}
  Cone whole = single(ConvexCone::whole(2));
  Cone pw = polar(whole);
  CHECK(pw.contains(vec({0, 0})));
  CHECK(!pw.contains(vec({1e-3, 0})));
  // polar of the ray {(t,0): t>=0} is {xi1 <= 0}
  Cone ray = single(ConvexCone::from_generators(rows({{1, 0}}).transpose(), Mat(2, 0), 2));
  Cone pr = polar(ray);
  CHECK(pr.contains(vec({-1, 5})));
  CHECK(pr.contains(vec({0, -3})));
  CHECK(!pr.contains(vec({0.1, 0})));
  // polar of D is {xi1 + |xi2| <= 0}
  Cone pd = polar(tangent_cone(make_D(), vec({0, 0})));
  CHECK(pd.contains(vec({-1, 1})));
  CHECK(pd.contains(vec({-1, -1})));
  CHECK(pd.contains(vec({-2, 1})));
  CHECK(!pd.contains(vec({-1, 1.5})));
  CHECK(!pd.contains(vec({0.1, 0})));
}

TEST_CASE("polar round trip on convex cones") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> unif(-1, 1);
  for (int t = 0; t < 30; ++t) {
    Mat M(2, 2);
    for (int i = 0; i < 4; ++i) M(i / 2, i % 2) = unif(rng);
    ConvexCone c = ConvexCone::from_hrep(M, Mat(0, 2), 2);
    ConvexCone back = c.polar().polar();
    Cone a = single(c), b = single(back);
    CHECK(cone_equal_sampled(a, b, 1e-7));
  }
}

TEST_CASE("frechet normal cones of the worked example") {
  auto K = make_K();
  // at the origin: polar of K's tangent = R^2_-
  Cone n0 = frechet_normal_cone(K, vec({0, 0}));
  CHECK(n0.contains(vec({-1, -2})));
  CHECK(n0.contains(vec({0, 0})));
  CHECK(!n0.contains(vec({0.5, -1})));
  // on the first ray: {0} x R
  Cone n1 = frechet_normal_cone(K, vec({3, 0}));
  CHECK(n1.contains(vec({0, 5})));
  CHECK(n1.contains(vec({0, -5})));
  CHECK(!n1.contains(vec({0.1, 0})));
  // interior of D: {0}
  Cone n2 = frechet_normal_cone(make_D(), vec({2, 0.5}));
  CHECK(n2.contains(vec({0, 0})));
  CHECK(!n2.contains(vec({1e-3, 0})));
  CHECK(frechet_normal_cone(K, vec({1, 1})).is_empty());
}

TEST_CASE("directional limiting normal cones match the worked-example table") {
  auto D = make_D();
  auto K = make_K();
  Vec zero2 = vec({0, 0});
  // D, direction (1,1): {xi1 = -xi2 <= 0}
  Cone d1 = dir_limiting_normal_cone(D, zero2, vec({1, 1}) / std::sqrt(2.0));
  CHECK(d1.contains(vec({-1, 1})));
  CHECK(d1.contains(vec({-2, 2})));
  CHECK(!d1.contains(vec({1, -1})));
  CHECK(!d1.contains(vec({-1, 0.5})));
  // D, direction (1,-1): {xi1 = xi2 <= 0}
  Cone d2 = dir_limiting_normal_cone(D, zero2, vec({1, -1}));
  CHECK(d2.contains(vec({-1, -1})));
  CHECK(!d2.contains(vec({-1, 1})));
  // D, interior direction: {0}
  Cone d3 = dir_limiting_normal_cone(D, zero2, vec({1, 0}));
  CHECK(d3.contains(zero2));
  CHECK(!d3.contains(vec({-1e-2, 0})));
  // K, direction (1,0): {0} x R
  Cone k1 = dir_limiting_normal_cone(K, zero2, vec({1, 0}));
  CHECK(k1.contains(vec({0, 7})));
  CHECK(k1.contains(vec({0, -7})));
  CHECK(!k1.contains(vec({0.2, 0})));
  // K, direction (1,1): empty
  CHECK(dir_limiting_normal_cone(K, zero2, vec({1, 1})).is_empty());
  // direction outside the tangent cone of D: empty
  CHECK(dir_limiting_normal_cone(D, zero2, vec({-1, 0})).is_empty());
}

TEST_CASE("direction zero gives the full limiting cone") {
  auto K = make_K();
  Vec zero2 = vec({0, 0});
  Cone at_zero = dir_limiting_normal_cone(K, zero2, zero2);
  // contains the Frechet cone R^2_-, and both axis lines
  CHECK(at_zero.contains(vec({-1, -1})));
  CHECK(at_zero.contains(vec({0, 3})));
  CHECK(at_zero.contains(vec({3, 0})));
  CHECK(!at_zero.contains(vec({1, 1})));
}

TEST_CASE("limiting normal cone of D at the apex") {
  auto D = make_D();
  Cone lim = limiting_normal_cone(D, vec({0, 0}));
  // union of the four rows of the table
  CHECK(lim.contains(vec({-1, 1})));    // edge u1=u2
  CHECK(lim.contains(vec({-1, -1})));   // edge u1=-u2
  CHECK(lim.contains(vec({-2, 0.5})));  // apex cone
  CHECK(lim.contains(vec({0, 0})));
  CHECK(!lim.contains(vec({0.5, 0})));
  CHECK(!lim.contains(vec({-0.5, 1})));  // only on the ray xi1 = -xi2
}

TEST_CASE("limiting normal cone of K at the origin") {
  auto K = make_K();
  Cone lim = limiting_normal_cone(K, vec({0, 0}));
  CHECK(lim.contains(vec({-1, -2})));
  CHECK(lim.contains(vec({0, 4})));
  CHECK(lim.contains(vec({4, 0})));
  CHECK(!lim.contains(vec({1, 1})));
  // interior point of a convex piece: {0}
  Cone li = limiting_normal_cone(make_D(), vec({3, 1}));
  CHECK(li.contains(vec({0, 0})));
  CHECK(!li.contains(vec({1e-3, 1e-3})));
}

TEST_CASE("directional cones of convex sets agree with normals of the tangent cone") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unif(-1, 1);
  for (int t = 0; t < 20; ++t) {
    ConvexPoly piece;
    piece.A.resize(2, 2);
    for (int i = 0; i < 2; ++i) {
      Vec a(2);
      do {
        a << unif(rng), unif(rng);
      } while (a.norm() < 0.3);
      piece.A.row(i) = a.transpose();
    }
    piece.b = Vec::Zero(2);
    piece.E = Mat(0, 2);
    piece.d = Vec(0);
    PolyUnion u;
    u.pieces.push_back(piece);
    Vec zero2 = Vec::Zero(2);
    for (int k = 0; k < 8; ++k) {
      double th = 2 * std::numbers::pi * k / 8;
      Vec dir(2);
      dir << std::cos(th), std::sin(th);
      if (!u.contains(dir * 1e-3, 1e-12)) continue;
      Cone direct = dir_limiting_normal_cone(u, zero2, dir);
      // for convex polyhedral sets: N(u; dir) = Frechet normal cone of the
      // tangent cone at the point dir
      PolyUnion tanpoly;
      ConvexPoly tp;
      tp.A = piece.A;
      tp.b = Vec::Zero(2);
      tp.E = Mat(0, 2);
      tp.d = Vec(0);
      tanpoly.pieces.push_back(tp);
      Cone expected = frechet_normal_cone(tanpoly, dir);
      CHECK(cone_equal_sampled(direct, expected, 1e-7));
    }
  }
}

TEST_CASE("directional normals are genuine limits of Frechet normals") {
  auto D = make_D();
  Vec zero2 = vec({0, 0});
  Vec u = vec({1, 1}) / std::sqrt(2.0);
  Cone dc = dir_limiting_normal_cone(D, zero2, u);
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> unif(-0.2, 0.2);
  for (double t : {1e-3, 1e-4, 1e-5}) {
    // points x = t(u + small perturbation inside D) have Frechet normals
    // inside the directional cone
    for (int k = 0; k < 10; ++k) {
      Vec x = t * (u + Vec(vec({unif(rng), unif(rng)})));
      if (!D.contains(x, 1e-15)) continue;
      Cone fr = frechet_normal_cone(D, x);
      CHECK(cone_subset_sampled(fr, dc, 1e-7));
    }
  }
}

TEST_CASE("min-norm points") {
  ConvexPoly zero_set;
  zero_set.A = Mat(0, 2);
  zero_set.b = Vec(0);
  zero_set.E = Mat::Identity(2, 2);
  zero_set.d = Vec::Zero(2);
  auto r = min_norm_point(vec({1, 0}), zero_set, NormSpec(PExp::Two));
  CHECK(r.distance == doctest::Approx(1.0));
  CHECK((*r.point - Vec::Zero(2)).norm() < 1e-10);

  // projection onto the negative orthant
  ConvexPoly orthant;
  orthant.A = rows({{1, 0}, {0, 1}});
  orthant.b = Vec::Zero(2);
  orthant.E = Mat(0, 2);
  orthant.d = Vec(0);
  auto r2 = min_norm_point(vec({1, 1}), orthant, NormSpec(PExp::Two));
  CHECK(r2.distance == doctest::Approx(std::sqrt(2.0)));
  CHECK((*r2.point).lpNorm<Eigen::Infinity>() < 1e-10);

  // point already inside
  auto r3 = min_norm_point(vec({-1, -2}), orthant, NormSpec(PExp::Two));
  CHECK(r3.distance == doctest::Approx(0.0));
  CHECK((*r3.point - vec({-1, -2})).norm() < 1e-10);

  // l1 and linf distances to a shifted halfplane x1 >= 2
  ConvexPoly hp;
  hp.A = rows({{-1, 0}});
  hp.b = vec({-2});
  hp.E = Mat(0, 2);
  hp.d = Vec(0);
  CHECK(min_norm_point(vec({0, 0}), hp, NormSpec(PExp::One)).distance ==
        doctest::Approx(2.0));
  CHECK(min_norm_point(vec({0, 0}), hp, NormSpec(PExp::Inf)).distance ==
        doctest::Approx(2.0));
}

TEST_CASE("min-norm point against sampled feasible points") {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> unif(-2, 2);
  for (int t = 0; t < 15; ++t) {
    ConvexPoly P;
    P.A.resize(3, 2);
    P.b.resize(3);
    for (int i = 0; i < 3; ++i) {
      Vec a(2);
      do {
        a << unif(rng), unif(rng);
      } while (a.norm() < 0.3);
      P.A.row(i) = a.transpose();
      P.b[i] = std::abs(unif(rng));  // origin feasible
    }
    P.E = Mat(0, 2);
    P.d = Vec(0);
    Vec z = vec({unif(rng), unif(rng)});
    for (PExp p : {PExp::One, PExp::Two, PExp::Inf}) {
      NormSpec n{p};
      auto r = min_norm_point(z, P, n);
      REQUIRE(r.finite());
      CHECK(P.contains(*r.point, 1e-7));
      // no sampled feasible point does better
      for (int k = 0; k < 200; ++k) {
        Vec y = vec({unif(rng), unif(rng)});
        if (!P.contains(y, 1e-12)) continue;
        CHECK(vec_norm(Vec(y - z), n) >= r.distance - 1e-9);
      }
    }
  }
}

TEST_CASE("min-norm distance to an empty target is infinite") {
  ConvexPoly empty;
  empty.A = rows({{1, 0}, {-1, 0}});
  empty.b = vec({-1, -1});
  empty.E = Mat(0, 2);
  empty.d = Vec(0);
  auto r = min_norm_point(vec({0, 0}), empty, NormSpec(PExp::Two));
  CHECK(!r.finite());
  CHECK(std::isinf(r.distance));
}

TEST_CASE("hyperplane cap raises") {
  PolyUnion u;
  ConvexPoly p;
  p.A.resize(13, 2);
  for (int i = 0; i < 13; ++i) {
    double th = std::numbers::pi * i / 13.0;
    p.A.row(i) << std::cos(th), std::sin(th);
  }
  p.b = Vec::Zero(13);
  p.E = Mat(0, 2);
  p.d = Vec(0);
  u.pieces.push_back(p);
  CHECK_THROWS(direction_cells(u, Vec::Zero(2)));
}
