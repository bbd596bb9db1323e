// subrad: regularity constants, subregularity radius bounds and perturbation
// checks for polyhedral constraint systems.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "subrad/problem_io.hpp"
#include "subrad/verify.hpp"

namespace {

using namespace subrad;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInfeasible = 3;

struct OutputOpts {
  std::string out;
  std::string format = "json";
};

void emit(const nlohmann::ordered_json& j, const OutputOpts& opts) {
  std::string text =
      opts.format == "csv" ? io::to_csv(j) : j.dump(2) + "\n";
  if (opts.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(opts.out);
    if (!f) throw io::SpecError(opts.out, "cannot open output file");
    f << text;
  }
}

int resolve_threads(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("SUBRAD_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? int(hc) : 1;
}

constants::SolverConfig make_config(const io::ProblemSpec& spec, int resolution,
                                    std::uint64_t seed, bool seed_set,
                                    int threads) {
  constants::SolverConfig cfg = spec.solver;
  if (resolution > 0) cfg.resolution = resolution;
  if (seed_set) cfg.seed = seed;
  cfg.threads = resolve_threads(threads);
  return cfg;
}

int run_example(const std::string& name, const std::string& pstr) {
  NormSpec p = norm_spec_from_string(pstr);
  std::cout.setf(std::ios::fixed);
  std::cout.precision(5);
  if (name == "cone") {
    double expected = p.p == PExp::One ? 0.5 : (p.p == PExp::Two ? 1.0 / std::sqrt(2.0) : 1.0);
    auto rep = constants::compute_constants(verify::cone_example(p));
    auto rad = radii::radius_report_from(rep);
    std::cout << "quantity,expected,computed\n";
    std::cout << "rg," << expected << "," << rep.rg.value << "\n";
    std::cout << "rg_diamond," << expected << "," << rep.rg_diamond.value << "\n";
    std::cout << "rg_circ.upper," << expected << "," << rep.rg_circ.upper << "\n";
    std::cout << "rad_ss.mid," << expected << "," << rad.rad_ss.mid() << "\n";
    if (p.p == PExp::Two)
      std::cout << "rg_dagger," << expected << "," << rep.rg_dagger.value << "\n";
    double worst = std::max(std::abs(rep.rg.value - expected),
                            std::abs(rad.rad_ss.mid() - expected));
    return worst < 1e-3 ? kExitOk : kExitPropertyFailure;
  }
  if (name == "zero") {
    auto rep = constants::compute_constants(verify::zero_map_example());
    auto rad = radii::radius_report_from(rep);
    std::cout << "quantity,expected,computed\n";
    std::cout << "rg,0," << rep.rg.value << "\n";
    std::cout << "rg_circ.upper,0," << rep.rg_circ.upper << "\n";
    std::cout << "rad_lip.lower,0," << rad.rad_lip_lower << "\n";
    std::cout << "rad_ss.mid,0," << rad.rad_ss.mid() << "\n";
    return (rep.rg.value < 1e-9 && rad.rad_ss.mid() < 1e-9) ? kExitOk
                                                            : kExitPropertyFailure;
  }
  if (name == "staircase") {
    perturb::StaircaseSpec spec;
    perturb::PerturbationSpec h;
    h.kind = perturb::PerturbationSpec::Kind::Staircase;
    h.stair = spec;
    std::cout << "k,radius,max_ratio\n";
    bool diverges = true;
    for (int k = 1; k <= 5; ++k) {
      auto s = verify::staircase_example(spec, k);
      double prev = 0;
      perturb::Staircase st(spec);
      double r0 = 0.2 * (st.a(k) - st.b(k));
      for (int decade = 0; decade < 3; ++decade) {
        double r = r0 * std::pow(0.1, decade);
        auto res = sys::subreg_ratio(s, h, r, 400, 7);
        std::cout << k << "," << r << "," << res.max_ratio << "\n";
        if (decade > 0 && res.max_ratio < 5.0 * prev) diverges = false;
        prev = res.max_ratio;
      }
    }
    return diverges ? kExitOk : kExitPropertyFailure;
  }
  std::cerr << "unknown example '" << name << "' (expected cone|zero|staircase)\n";
  return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regularity constants and subregularity radius bounds for "
               "polyhedral constraint systems"};
  app.require_subcommand(1);

  std::string path;
  OutputOpts out;
  int resolution = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_path) {
    if (needs_path)
      cmd->add_option("spec", path, "problem spec (JSON)")->required();
    cmd->add_option("--out", out.out, "write report to file");
    cmd->add_option("--format", out.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--resolution", resolution, "angular grid resolution");
    cmd->add_option("--seed", seed, "solver seed")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--threads", threads,
                    "worker threads (default: cores, or SUBRAD_THREADS)");
  };

  auto* c_constants = app.add_subcommand("constants", "compute the rg family");
  add_common(c_constants, true);
  auto* c_radii = app.add_subcommand("radii", "compute radius bounds");
  add_common(c_radii, true);

  auto* c_verify = app.add_subcommand("verify", "run a property suite");
  std::string suite;
  int trials = 0;
  std::uint64_t vseed = 7;
  c_verify->add_option("suite", suite, "frobenius|eckart-young|zigzag|chain")
      ->required();
  c_verify->add_option("--trials", trials, "number of random trials");
  c_verify->add_option("--seed", vseed, "random seed");

  auto* c_example = app.add_subcommand("example", "reproduce a worked example");
  std::string example_name;
  std::string pstr = "2";
  c_example->add_option("name", example_name, "cone|zero|staircase")->required();
  c_example->add_option("--p", pstr, "norm exponent: 1, 2 or inf");

  auto* c_perturb = app.add_subcommand(
      "perturb-check", "empirical subregularity ratios under the spec's "
                       "perturbation across shrinking radii");
  add_common(c_perturb, true);
  double radius = 0.1;
  int samples = 400;
  c_perturb->add_option("--radius", radius, "largest sampling radius");
  c_perturb->add_option("--samples", samples, "samples per radius");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_constants->parsed()) {
      auto spec = io::load_problem(path);
      auto cfg = make_config(spec, resolution, seed, seed_set, threads);
      emit(io::constants_to_json(constants::compute_constants(spec.system, cfg)), out);
      return kExitOk;
    }
    if (c_radii->parsed()) {
      auto spec = io::load_problem(path);
      auto cfg = make_config(spec, resolution, seed, seed_set, threads);
      emit(io::radii_to_json(radii::radius_report(spec.system, cfg)), out);
      return kExitOk;
    }
    if (c_verify->parsed()) {
      verify::SuiteResult r;
      if (suite == "frobenius")
        r = verify::verify_frobenius(trials > 0 ? trials : 1000, vseed);
      else if (suite == "eckart-young")
        r = verify::verify_eckart_young(trials > 0 ? trials : 100, vseed);
      else if (suite == "zigzag")
        r = verify::verify_zigzag();
      else if (suite == "chain")
        r = verify::verify_chain(trials > 0 ? trials : 50, vseed);
      else {
        std::cerr << "unknown suite '" << suite << "'\n";
        return kExitInputError;
      }
      std::cout << (r.pass ? "PASS" : "FAIL") << " " << suite << ": " << r.detail
                << "\n";
      return r.pass ? kExitOk : kExitPropertyFailure;
    }
    if (c_example->parsed()) return run_example(example_name, pstr);
    if (c_perturb->parsed()) {
      auto spec = io::load_problem(path);
      perturb::PerturbationSpec h;
      if (spec.perturbation) h = *spec.perturbation;
      nlohmann::ordered_json table = nlohmann::ordered_json::array();
      for (int decade = 0; decade < 3; ++decade) {
        double r = radius * std::pow(0.1, decade);
        auto res = sys::subreg_ratio(spec.system, h, r, samples,
                                     spec.solver.seed);
        nlohmann::ordered_json row;
        row["radius"] = r;
        row["max_ratio"] = std::isinf(res.max_ratio)
                               ? nlohmann::ordered_json("inf")
                               : nlohmann::ordered_json(res.max_ratio);
        row["samples_used"] = res.samples_used;
        row["samples_skipped"] = res.samples_skipped;
        table.push_back(std::move(row));
      }
      nlohmann::ordered_json o;
      o["ratios"] = std::move(table);
      emit(o, out);
      return kExitOk;
    }
  } catch (const io::SpecError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const io::InfeasibleError& e) {
    std::cerr << "infeasible spec: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPropertyFailure;
  }
  return kExitInputError;
}
