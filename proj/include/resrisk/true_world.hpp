#pragma once

#include <vector>

#include "resrisk/chain_ladder.hpp"
#include "resrisk/rng.hpp"
#include "resrisk/triangle.hpp"

namespace resrisk {

// Generator parameters of the simulation study's true world:
// C_{i,0} ~ N(f0, sigma0^2), F_{i,k} | C_{i,k-1} ~ N(f_k, sigma_k^2 / C^gamma).
struct TrueParams {
  double f0 = 0.0;
  double sigma0 = 0.0;
  std::vector<double> f;      // f[k] for k = 1..n, index 0 unused; f[n] = 1
  std::vector<double> sigma;  // sigma[k] likewise; sigma[n] = 0
  Gamma gamma = Gamma::g0;

  int horizon() const { return static_cast<int>(f.size()) - 1; }
  void validate() const;  // throws std::invalid_argument on violation
};

// Realized residues zeta_{i,k} of a simulated triangle, per column:
// by_column[k-1][i] for k = 1..n, i = 0..n-k.
struct ResidueSet {
  std::vector<std::vector<double>> by_column;

  double zeta(int i, int k) const { return by_column[k - 1][i]; }
};

struct SimulatedTriangle {
  Triangle tri;
  ResidueSet residues;
  long factor_resets = 0;  // development factors <= 0 reset to 1.0
  long start_redraws = 0;  // non-positive starting values redrawn
};

// Draws one triangle. Starting values are redrawn until positive; a simulated
// factor F <= 0 is reset to 1.0 and its stored residue recomputed to match.
SimulatedTriangle simulate_triangle(const TrueParams& params, RngStream& rng);

struct SimulatedDiagonal {
  NextDiagonal diag;
  long factor_resets = 0;
};

// Next-year payments Z_{i,n-i+1} = (F - 1) * C_{i,n-i} under the true
// parameters. Columns with sigma_k = 0 are deterministic and consume no
// draws; with f_n = 1 the year-1 entry is exactly 0.
SimulatedDiagonal simulate_next_diagonal(const Triangle& tri,
                                         const TrueParams& params,
                                         RngStream& rng);

}  // namespace resrisk
