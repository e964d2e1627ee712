#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace riskexit {

struct CheckResult {
  std::string suite;
  std::string name;
  double target;
  double got;
  double tol;
  bool pass;
};

struct VerifyOptions {
  double tol_scale = 1.0;          // multiplies every tolerance
  std::uint64_t n_paths = 1000000;  // paths per MC check
  std::uint64_t seed = 20240801;
};

// suite: one of roots | factorization | exit | densities | limits | mirror | all.
// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts);

}  // namespace riskexit
