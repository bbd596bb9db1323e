#pragma once

#include <limits>
#include <utility>

#include "subrad/matrices.hpp"
#include "subrad/system.hpp"

namespace subrad::constants {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SolverConfig {
  int resolution = 720;       // angular grid for p=2 single-variable loops
  int pair_resolution = 96;   // per-axis grid for the coupled outer loops
  double refine_tol = 1e-4;   // angular refinement target
  int pool = 32;              // near-optimal witnesses fed to the matrix search
  std::uint64_t seed = 0;
  int threads = 1;
};

struct WitnessedValue {
  double value = kInf;
  std::optional<matrices::Witness> witness;
};

struct Interval {
  double lower = kInf;
  double upper = kInf;
  double mid() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
};

struct Diagnostics {
  int pieces_total = 0;
  int pieces_feasible = 0;
  int resolution = 0;
  int pair_resolution = 0;
};

/// The rg family with witnesses. +inf (serialized "inf") means no witness
/// exists and the corresponding radius is unbounded for that class.
struct ConstantsReport {
  NormSpec norm;
  WitnessedValue rg;
  WitnessedValue rg_over;     // sum objective
  WitnessedValue rg_diamond;  // compatibility-constrained max objective
  Interval rg_circ;           // operator-norm constant as an interval
  std::optional<matrices::Witness> rg_circ_witness;  // carries B
  WitnessedValue rg_dagger;   // Euclidean only
  bool rg_dagger_applicable = false;
  double mr_bound = kInf;   // metric-regularity comparison bound
  double ssr_bound = kInf;  // strong-subregularity comparison bound
  Diagnostics diag;
};

WitnessedValue compute_rg(const sys::ConstraintSystem& s,
                          const SolverConfig& cfg = {});
WitnessedValue compute_rg_over(const sys::ConstraintSystem& s,
                               const SolverConfig& cfg = {});
WitnessedValue compute_rg_diamond(const sys::ConstraintSystem& s,
                                  const SolverConfig& cfg = {});

struct RgCirc {
  Interval interval;
  std::optional<matrices::Witness> witness;
};
RgCirc compute_rg_circ(const sys::ConstraintSystem& s,
                       const SolverConfig& cfg = {});

/// Euclidean norm only; throws otherwise.
WitnessedValue compute_rg_dagger(const sys::ConstraintSystem& s,
                                 const SolverConfig& cfg = {});

/// (mr_bound, ssr_bound) from the undirected limiting coderivative and the
/// graphical derivative.
std::pair<double, double> compute_mr_ssr_bounds(const sys::ConstraintSystem& s,
                                                const SolverConfig& cfg = {});

ConstantsReport compute_constants(const sys::ConstraintSystem& s,
                                  const SolverConfig& cfg = {});

// ---------------------------------------------------------------------------
// Independent sampled oracle (n, m <= 3).

struct OracleConfig {
  int sphere_resolution = 360;  // u and v* grids
  int box_points = 81;          // per-axis points for the (v, u*) boxes
  double box = 4.0;             // box half-width
  int pair_sphere_resolution = 72;  // coupled constants
  int pair_box_points = 41;
};

struct OracleReport {
  double rg = kInf;
  double rg_over = kInf;
  double rg_diamond = kInf;
  double rg_dagger = kInf;  // Euclidean systems only
  double mr_bound = kInf;
  double ssr_bound = kInf;
  double grid_error = 0;          // declared bound for rg / rg_over / mr / ssr
  double grid_error_coupled = 0;  // declared bound for the coupled constants
};

OracleReport brute_force_oracle(const sys::ConstraintSystem& s,
                                const OracleConfig& cfg = {});

}  // namespace subrad::constants
