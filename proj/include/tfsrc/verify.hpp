#pragma once

// Self-verification suites over the special-function and discretization
// layers, run by `tfsrc verify`.

#include <string>
#include <vector>

namespace tfsrc {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  /// Multiplies every Gamma value inside the Mittag-Leffler bounds. Anything
  /// but 1 is a fault injection that the bound suite must detect.
  double gamma_scale = 1.0;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  double seconds = 0;
  bool all_passed() const;
};

SuiteResult verify_mlf_bounds(const VerifyOptions& options = {});
SuiteResult verify_derivative_identity();
SuiteResult verify_kernel_integral();
SuiteResult verify_l1_scheme();
SuiteResult verify_mean_value_modulus();

VerifyReport run_verification(const VerifyOptions& options = {});

}  // namespace tfsrc
