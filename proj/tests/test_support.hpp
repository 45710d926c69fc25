#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "resrisk/triangle.hpp"
#include "resrisk/true_world.hpp"

namespace testsupport {

// Three-year example small enough to verify by hand.
inline resrisk::Triangle hand_triangle() {
  return resrisk::Triangle::from_rows(
      {{100.0, 150.0, 165.0}, {120.0, 192.0}, {110.0}});
}

// Simulation-study generator: n = 10, sigma_scaled is relative to f0^(gamma/2).
inline resrisk::TrueParams reference_params(resrisk::Gamma gamma) {
  resrisk::TrueParams p;
  p.f0 = 1420000.0;
  p.sigma0 = 336000.0;
  p.gamma = gamma;
  const std::vector<double> f = {1.5,  1.2,  1.12,  1.07,  1.04,
                                 1.02, 1.01, 1.005, 1.002, 1.0};
  const std::vector<double> scaled = {0.2,   0.12, 0.08,  0.045, 0.03,
                                      0.018, 0.01, 0.006, 0.003, 0.0};
  const double scale = gamma == resrisk::Gamma::g0 ? 1.0 : std::sqrt(p.f0);
  p.f.assign(1, 0.0);
  p.sigma.assign(1, 0.0);
  for (size_t k = 0; k < f.size(); ++k) {
    p.f.push_back(f[k]);
    p.sigma.push_back(scaled[k] * scale);
  }
  return p;
}

}  // namespace testsupport
