#pragma once

#include <string>
#include <vector>

namespace shtc {

struct VerifyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick self-check of the library: mimetic identities, flux compatibility,
/// Godunov form of the fluxes, skew coupling, and short semi-implicit runs
/// of every preset checking energy and involution preservation.
std::vector<VerifyResult> run_verification();

}  // namespace shtc
