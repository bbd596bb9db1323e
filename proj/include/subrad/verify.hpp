#pragma once

#include <random>
#include <string>

#include "subrad/constants.hpp"
#include "subrad/radii.hpp"

namespace subrad::verify {

struct SuiteResult {
  bool pass = true;
  std::string detail;  // first counterexample on failure, summary on success
};

/// Closed-form Frobenius-minimal matrix vs norm identity, feasibility
/// residuals and the search oracle, on seeded random compatible witnesses.
SuiteResult verify_frobenius(int trials, std::uint64_t seed);

/// Rank-one singularity witnesses on seeded random nonsingular 5x5 matrices,
/// plus radii agreement for small linear constraint systems.
SuiteResult verify_eckart_young(int trials, std::uint64_t seed);

/// Zigzag breakpoint inequalities and Lipschitz estimate.
SuiteResult verify_zigzag();

/// Inequality chains on the bundled examples plus seeded random 2x2 systems.
SuiteResult verify_chain(int random_trials, std::uint64_t seed);

// Bundled example systems.
sys::ConstraintSystem cone_example(NormSpec p);
sys::ConstraintSystem zero_map_example();
sys::ConstraintSystem linear_example(const Mat& A, NormSpec p = NormSpec(PExp::Two));
sys::ConstraintSystem staircase_example(const perturb::StaircaseSpec& spec, int k);

matrices::Witness random_compatible_witness(std::mt19937_64& rng, int n, int m);
sys::ConstraintSystem random_system_2x2(std::uint64_t seed, NormSpec norm);

/// Chain inequalities of one constants report; empty string when consistent.
std::string check_chain(const constants::ConstantsReport& rep,
                        const radii::RadiusReport& rad);

}  // namespace subrad::verify
