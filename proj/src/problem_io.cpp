#include "subrad/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace subrad::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw SpecError(path + "." + key, "missing field");
  return j.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(path, "expected number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SpecError(path, "expected integer");
  return j.get<int>();
}

Vec as_vector(const json& j, int expect, const std::string& path) {
  if (!j.is_array()) throw SpecError(path, "expected array");
  if (expect >= 0 && int(j.size()) != expect)
    throw SpecError(path, "expected length " + std::to_string(expect));
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v[int(i)] = as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Mat as_matrix(const json& j, int rows, int cols, const std::string& path) {
  if (!j.is_array()) throw SpecError(path, "expected array of rows");
  if (rows >= 0 && int(j.size()) != rows)
    throw SpecError(path, "expected " + std::to_string(rows) + " rows");
  int r = int(j.size());
  int c = cols;
  if (r > 0) {
    if (!j[0].is_array()) throw SpecError(path + "[0]", "expected array row");
    if (c < 0) c = int(j[0].size());
  }
  Mat m(r, std::max(c, 0));
  for (int i = 0; i < r; ++i) {
    Vec row = as_vector(j[i], c, path + "[" + std::to_string(i) + "]");
    m.row(i) = row.transpose();
  }
  return m;
}

poly::PolyUnion parse_union(const json& j, int dim, const std::string& path) {
  poly::PolyUnion u;
  const json& pieces = require(j, "pieces", path);
  if (!pieces.is_array() || pieces.empty())
    throw SpecError(path + ".pieces", "expected nonempty array");
  for (size_t i = 0; i < pieces.size(); ++i) {
    std::string pp = path + ".pieces[" + std::to_string(i) + "]";
    const json& pj = pieces[i];
    poly::ConvexPoly piece;
    if (pj.contains("A")) {
      piece.A = as_matrix(pj.at("A"), -1, dim, pp + ".A");
      piece.b = as_vector(require(pj, "b", pp), int(piece.A.rows()), pp + ".b");
    } else {
      piece.A = Mat(0, dim);
      piece.b = Vec(0);
    }
    if (pj.contains("E")) {
      piece.E = as_matrix(pj.at("E"), -1, dim, pp + ".E");
      piece.d = as_vector(require(pj, "d", pp), int(piece.E.rows()), pp + ".d");
    } else {
      piece.E = Mat(0, dim);
      piece.d = Vec(0);
    }
    u.pieces.push_back(std::move(piece));
  }
  return u;
}

perturb::PerturbationSpec parse_perturbation(const json& j, int n,
                                             const std::string& path) {
  using Kind = perturb::PerturbationSpec::Kind;
  perturb::PerturbationSpec p;
  std::string kind = require(j, "kind", path).get<std::string>();
  if (kind == "linear") {
    p.kind = Kind::Linear;
    p.linear_B = as_matrix(require(j, "matrix", path), -1, n, path + ".matrix");
  } else if (kind == "quadratic") {
    p.kind = Kind::Quadratic;
  } else if (kind == "zigzag") {
    p.kind = Kind::Zigzag;
    if (j.contains("tau1")) p.zig.tau1 = as_number(j.at("tau1"), path + ".tau1");
    if (j.contains("ratio")) p.zig.ratio = as_number(j.at("ratio"), path + ".ratio");
  } else if (kind == "staircase") {
    p.kind = Kind::Staircase;
    if (j.contains("a1")) p.stair.a1 = as_number(j.at("a1"), path + ".a1");
    if (j.contains("ratio")) p.stair.ratio = as_number(j.at("ratio"), path + ".ratio");
    if (j.contains("r1")) p.stair.r1 = as_number(j.at("r1"), path + ".r1");
  } else if (kind == "piecewise_random") {
    p.kind = Kind::PiecewiseRandom;
    p.pr_lip = as_number(require(j, "lip", path), path + ".lip");
    if (j.contains("seed")) p.pr_seed = j.at("seed").get<std::uint64_t>();
  } else {
    throw SpecError(path + ".kind", "unknown perturbation kind '" + kind + "'");
  }
  if (j.contains("declared_modulus"))
    p.declared_modulus = as_number(j.at("declared_modulus"), path + ".declared_modulus");
  return p;
}

}  // namespace

ProblemSpec parse_problem(const json& j) {
  ProblemSpec spec;
  int n = as_int(require(j, "n", ""), "n");
  int m = as_int(require(j, "m", ""), "m");
  if (n < 1 || m < 1) throw SpecError("n", "dimensions must be positive");
  spec.system.xbar = as_vector(require(j, "xbar", ""), n, "xbar");
  std::string np = require(j, "norm_p", "").get<std::string>();
  try {
    spec.system.norm = norm_spec_from_string(np);
  } catch (const std::invalid_argument& e) {
    throw SpecError("norm_p", e.what());
  }
  spec.system.D = parse_union(require(j, "D", ""), n, "D");
  spec.system.K = parse_union(require(j, "K", ""), m, "K");
  const json& gj = require(j, "g", "");
  spec.system.g.g0 = as_vector(require(gj, "value", "g"), m, "g.value");
  spec.system.g.G = as_matrix(require(gj, "jacobian", "g"), m, n, "g.jacobian");
  spec.system.g.affine =
      gj.contains("affine") ? gj.at("affine").get<bool>() : true;
  if (j.contains("perturbation"))
    spec.perturbation = parse_perturbation(j.at("perturbation"), n, "perturbation");
  if (j.contains("solver")) {
    const json& sj = j.at("solver");
    if (sj.contains("resolution"))
      spec.solver.resolution = as_int(sj.at("resolution"), "solver.resolution");
    if (sj.contains("pair_resolution"))
      spec.solver.pair_resolution =
          as_int(sj.at("pair_resolution"), "solver.pair_resolution");
    if (sj.contains("refine_tol"))
      spec.solver.refine_tol = as_number(sj.at("refine_tol"), "solver.refine_tol");
    if (sj.contains("pool")) spec.solver.pool = as_int(sj.at("pool"), "solver.pool");
    if (sj.contains("seed")) spec.solver.seed = sj.at("seed").get<std::uint64_t>();
    if (sj.contains("threads"))
      spec.solver.threads = as_int(sj.at("threads"), "solver.threads");
  }
  try {
    spec.system.validate();
  } catch (const std::exception& e) {
    throw InfeasibleError(e.what());
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path, "cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SpecError(path, std::string("JSON parse error: ") + e.what());
  }
  return parse_problem(j);
}

namespace {

ordered_json num_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

ordered_json vec_to_json(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json mat_to_json(const Mat& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json witnessed_to_json(const constants::WitnessedValue& wv) {
  ordered_json o;
  o["value"] = num_or_inf(wv.value);
  if (wv.witness) o["witness"] = witness_to_json(*wv.witness);
  return o;
}

}  // namespace

ordered_json witness_to_json(const matrices::Witness& w) {
  ordered_json o;
  o["u"] = vec_to_json(w.u);
  o["v"] = vec_to_json(w.v);
  o["ustar"] = vec_to_json(w.ustar);
  o["vstar"] = vec_to_json(w.vstar);
  if (w.B) o["B"] = mat_to_json(*w.B);
  return o;
}

ordered_json constants_to_json(const constants::ConstantsReport& rep) {
  ordered_json o;
  o["norm_p"] = to_string(rep.norm);
  ordered_json c;
  c["rg"] = witnessed_to_json(rep.rg);
  c["rg_over"] = witnessed_to_json(rep.rg_over);
  c["rg_diamond"] = witnessed_to_json(rep.rg_diamond);
  ordered_json circ;
  circ["lower"] = num_or_inf(rep.rg_circ.lower);
  circ["upper"] = num_or_inf(rep.rg_circ.upper);
  if (rep.rg_circ_witness) circ["witness"] = witness_to_json(*rep.rg_circ_witness);
  c["rg_circ"] = std::move(circ);
  if (rep.rg_dagger_applicable)
    c["rg_dagger"] = witnessed_to_json(rep.rg_dagger);
  else
    c["rg_dagger"] = nullptr;
  c["mr_bound"] = num_or_inf(rep.mr_bound);
  c["ssr_bound"] = num_or_inf(rep.ssr_bound);
  o["constants"] = std::move(c);
  ordered_json d;
  d["pieces_total"] = rep.diag.pieces_total;
  d["pieces_feasible"] = rep.diag.pieces_feasible;
  d["resolution"] = rep.diag.resolution;
  d["pair_resolution"] = rep.diag.pair_resolution;
  o["diagnostics"] = std::move(d);
  return o;
}

ordered_json radii_to_json(const radii::RadiusReport& rep) {
  ordered_json o;
  ordered_json lip;
  lip["lower"] = num_or_inf(rep.rad_lip_lower);
  lip["upper"] = num_or_inf(rep.rad_lip_upper);
  lip["provenance_lower"] = rep.provenance_lip_lower;
  lip["provenance_upper"] = rep.provenance_lip_upper;
  o["rad_lip"] = std::move(lip);
  auto interval = [](const constants::Interval& iv, const std::string& prov) {
    ordered_json r;
    r["lower"] = num_or_inf(iv.lower);
    r["upper"] = num_or_inf(iv.upper);
    r["provenance"] = prov;
    return r;
  };
  o["rad_ss"] = interval(rep.rad_ss, rep.provenance_ss);
  o["rad_c1"] = interval(rep.rad_c1, rep.provenance_ss);
  if (rep.euclidean)
    o["dagger_sandwich"] = interval(rep.dagger_sandwich, "rg_dagger sandwich");
  o["constants"] = constants_to_json(rep.constants);
  return o;
}

namespace {

void flatten(const ordered_json& j, const std::string& prefix,
             std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_null()) {
    out << prefix << ",\n";
  } else {
    out << prefix << "," << j.dump() << "\n";
  }
}

}  // namespace

std::string to_csv(const ordered_json& j) {
  std::ostringstream out;
  out << "key,value\n";
  flatten(j, "", out);
  return out.str();
}

}  // namespace subrad::io
