#pragma once

#include <cstdint>
#include <vector>

#include "kpp/io.hpp"

namespace kpp {

/// Deterministic random trigonometric medium: offset 1 plus a few low
/// modes, rescaled to keep the minimum above 0.25.
MuSpec random_trig_medium(int dim, std::uint64_t seed);

struct VerifyOptions {
  std::uint64_t seed = 1;
  int threads = 1;
  bool quick = false;
};

/// The verification checks, one CheckResult per criterion; quick mode runs
/// a fast homogeneous-medium subset exercising every module.
std::vector<CheckResult> run_verification_suite(const VerifyOptions& opts);

// Individual full-scale criteria (also used by the acceptance binary).
CheckResult criterion_homogeneous_dispersion();
CheckResult criterion_minimal_speed_constants();
CheckResult criterion_oracle_equivalence(std::uint64_t seed);
CheckResult criterion_cell_identities();
CheckResult criterion_effective_diffusion(std::uint64_t seed);
CheckResult criterion_minimizer_theory(int threads);
CheckResult criterion_front_speed();
CheckResult criterion_bramson_1d();
CheckResult criterion_halfspace_decay();
CheckResult criterion_log_frame_boundedness();
CheckResult criterion_gaussian_covariance();

}  // namespace kpp
