#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsepde/quadrature.hpp"
#include "sparsepde/risk.hpp"

namespace sparsepde {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  int quad_order = kDefaultQuadOrder;
  std::uint64_t seed = 42;
  std::int64_t mc_samples = kDefaultMcSamples;
};

/// Runs the invariant battery: mass normalization, risk symmetry, sandwich,
/// Jensen, risk at zero, the spike-and-slab bounds, gap argmin, density
/// normalization, quadrature doubling and Monte-Carlo agreement.
std::vector<CheckResult> run_selftest(const SelftestOptions& opts = {});

}  // namespace sparsepde
