#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "subrad/linprog.hpp"

using namespace subrad;

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
}  // namespace

TEST_CASE("basic 2-variable LP") {
  // min -x - y  s.t. x + y <= 1, x, y >= 0  -> -1
  Mat A = rows({{1, 1}, {-1, 0}, {0, -1}});
  Vec b = vec({1, 0, 0});
  auto r = lp::solve(vec({-1, -1}), A, b, Mat(0, 2), Vec(0));
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("equality constraints") {
  // min x + y s.t. x - y = 1, x + y >= 2
  Mat A = rows({{-1, -1}});
  Vec b = vec({-2});
  auto r = lp::solve(vec({1, 1}), A, b, rows({{1, -1}}), vec({1}));
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(r.x[0] == doctest::Approx(1.5));
  CHECK(r.x[1] == doctest::Approx(0.5));
}

TEST_CASE("infeasible detection") {
  Mat A = rows({{1, 0}, {-1, 0}});
  Vec b = vec({-1, -1});  // x <= -1 and x >= 1
  auto r = lp::solve(vec({0, 0}), A, b, Mat(0, 2), Vec(0));
  CHECK(r.status == lp::Status::Infeasible);
}

TEST_CASE("unbounded detection") {
  Mat A = rows({{-1, 0}});
  Vec b = vec({0});
  auto r = lp::solve(vec({-1, 0}), A, b, Mat(0, 2), Vec(0));
  CHECK(r.status == lp::Status::Unbounded);
}

TEST_CASE("free variables take negative values") {
  // min x s.t. x >= -3
  Mat A = rows({{-1}});
  Vec b = vec({3});
  auto r = lp::solve(vec({1}), A, b, Mat(0, 1), Vec(0));
  REQUIRE(r.ok());
  CHECK(r.x[0] == doctest::Approx(-3.0));
}

TEST_CASE("redundant equality rows are tolerated") {
  Mat E = rows({{1, 1}, {2, 2}});
  Vec d = vec({1, 2});
  auto r = lp::solve(vec({0, 1}), rows({{0, -1}}), vec({0}), E, d);
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(0.0));
}

TEST_CASE("randomized comparison against vertex enumeration") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unif(-1, 1);
  int solved = 0;
  for (int t = 0; t < 200; ++t) {
    // box plus random cuts keeps the problem bounded and usually feasible
    int extra = 3;
    Mat A(4 + extra, 2);
    Vec b(4 + extra);
    A.topRows(4) = rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    b.head(4).setConstant(2.0);
    for (int i = 0; i < extra; ++i) {
      A.row(4 + i) << unif(rng), unif(rng);
      b[4 + i] = unif(rng) + 1.0;
    }
    Vec c = vec({unif(rng), unif(rng)});
    auto r = lp::solve(c, A, b, Mat(0, 2), Vec(0));
    if (!r.ok()) continue;
    ++solved;
    // enumerate vertices as intersections of constraint pairs
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < A.rows(); ++i)
      for (int j = i + 1; j < A.rows(); ++j) {
        Mat C(2, 2);
        C << A.row(i), A.row(j);
        if (std::abs(C.determinant()) < 1e-9) continue;
        Vec x = C.colPivHouseholderQr().solve(vec({b[i], b[j]}));
        bool feas = true;
        for (int k = 0; k < A.rows(); ++k)
          if (A.row(k).dot(x) > b[k] + 1e-8) feas = false;
        if (feas) best = std::min(best, c.dot(x));
      }
    REQUIRE(std::isfinite(best));
    CHECK(r.value == doctest::Approx(best).epsilon(1e-8));
  }
  CHECK(solved > 150);
}
