#pragma once

#include <string>
#include <vector>

namespace fractal_spectra {

struct VerifyCheck {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant suite of every module. quick trims oracle levels to m <= 2 and
/// measure/preimage depths to 12.
std::vector<VerifyCheck> run_verification(bool quick);

}  // namespace fractal_spectra
