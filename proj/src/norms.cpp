#include "subrad/norms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace subrad {

NormSpec NormSpec::dual() const {
  switch (p) {
    case PExp::One: return NormSpec(PExp::Inf);
    case PExp::Inf: return NormSpec(PExp::One);
    case PExp::Two: return NormSpec(PExp::Two);
  }
  throw std::logic_error("bad norm tag");
}

NormSpec norm_spec_from_string(const std::string& s) {
  if (s == "1") return NormSpec(PExp::One);
  if (s == "2") return NormSpec(PExp::Two);
  if (s == "inf" || s == "infinity") return NormSpec(PExp::Inf);
  throw std::invalid_argument("unsupported norm exponent '" + s +
                              "' (expected \"1\", \"2\" or \"inf\")");
}

std::string to_string(NormSpec n) {
  switch (n.p) {
    case PExp::One: return "1";
    case PExp::Two: return "2";
    case PExp::Inf: return "inf";
  }
  return "?";
}

double vec_norm(const Vec& x, NormSpec n) {
  switch (n.p) {
    case PExp::One: return x.lpNorm<1>();
    case PExp::Two: return x.norm();
    case PExp::Inf: return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

double dual_norm(const Vec& x, NormSpec n) { return vec_norm(x, n.dual()); }

double operator_norm(const Mat& M, NormSpec n) {
  if (M.size() == 0) return 0.0;
  switch (n.p) {
    case PExp::One: {
      double best = 0.0;
      for (Eigen::Index j = 0; j < M.cols(); ++j)
        best = std::max(best, M.col(j).lpNorm<1>());
      return best;
    }
    case PExp::Inf: {
      double best = 0.0;
      for (Eigen::Index i = 0; i < M.rows(); ++i)
        best = std::max(best, M.row(i).lpNorm<1>());
      return best;
    }
    case PExp::Two: {
      const Mat S = M.transpose() * M;
      const Eigen::Index d = S.rows();
      // Power iteration; coordinate-vector restarts cover the (rare) case of
      // the all-ones start lying in an invariant subspace of smaller modulus.
      double best = 0.0;
      for (int attempt = 0; attempt <= d; ++attempt) {
        Vec x;
        if (attempt == 0)
          x = Vec::Ones(d) / std::sqrt(double(d));
        else
          x = Vec::Unit(d, attempt - 1);
        double lam = 0.0;
        for (int it = 0; it < 10000; ++it) {
          Vec y = S * x;
          double ny = y.norm();
          if (ny <= 1e-300) { lam = 0.0; break; }
          lam = x.dot(y);  // Rayleigh quotient on the unit iterate
          if ((y - lam * x).norm() <= 1e-12 * std::max(1.0, std::abs(lam)))
            break;
          x = y / ny;
        }
        best = std::max(best, lam);
        if (attempt == 0 && best > 0.0 &&
            (S * x - best * x).norm() <= 1e-9 * std::max(1.0, best))
          break;
      }
      return std::sqrt(std::max(0.0, best));
    }
  }
  return 0.0;
}

double frobenius_norm(const Mat& M) { return M.norm(); }

Vec dual_attainer(const Vec& x, NormSpec n) {
  const Eigen::Index d = x.size();
  Vec z = Vec::Zero(d);
  switch (n.p) {
    case PExp::Two: {
      double nx = x.norm();
      if (nx > 0) z = x / nx;
      return z;
    }
    case PExp::One: {
      for (Eigen::Index i = 0; i < d; ++i)
        z[i] = (x[i] > 0) ? 1.0 : (x[i] < 0 ? -1.0 : 0.0);
      return z;
    }
    case PExp::Inf: {
      Eigen::Index best = 0;
      for (Eigen::Index i = 1; i < d; ++i)
        if (std::abs(x[i]) > std::abs(x[best])) best = i;
      z[best] = (x[best] >= 0) ? 1.0 : -1.0;
      return z;
    }
  }
  return z;
}

namespace {

Vec normalize_p(const Vec& x, NormSpec n) {
  double nx = vec_norm(x, n);
  return x / nx;
}

void append_unique(std::vector<Vec>& pts, const Vec& x) {
  for (const Vec& y : pts)
    if ((y - x).lpNorm<Eigen::Infinity>() < 1e-13) return;
  pts.push_back(x);
}

}  // namespace

std::vector<Vec> sphere_points(NormSpec n, int dim, int resolution) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("sphere_points: dim must be 1, 2 or 3");
  if (resolution < 4) throw std::invalid_argument("sphere_points: resolution must be >= 4");
  std::vector<Vec> pts;
  const double two_pi = 2.0 * std::numbers::pi;
  if (dim == 1) {
    pts.push_back(Vec::Constant(1, 1.0));
    pts.push_back(Vec::Constant(1, -1.0));
    return pts;
  }
  if (dim == 2) {
    for (int k = 0; k < resolution; ++k) {
      double th = two_pi * k / resolution;
      Vec x(2);
      x << std::cos(th), std::sin(th);
      pts.push_back(normalize_p(x, n));
    }
  } else {
    int lat = std::max(4, resolution / 4);
    for (int i = 0; i <= lat; ++i) {
      double phi = std::numbers::pi * i / lat;
      int circ = std::max(1, int(std::lround(resolution * std::sin(phi))));
      for (int k = 0; k < circ; ++k) {
        double th = two_pi * k / circ;
        Vec x(3);
        x << std::sin(phi) * std::cos(th), std::sin(phi) * std::sin(th), std::cos(phi);
        if (x.norm() < 1e-14) continue;
        pts.push_back(normalize_p(x, n));
      }
    }
  }
  for (int i = 0; i < dim; ++i) {
    append_unique(pts, Vec::Unit(dim, i));
    append_unique(pts, Vec(-Vec::Unit(dim, i)));
  }
  return pts;
}

}  // namespace subrad
