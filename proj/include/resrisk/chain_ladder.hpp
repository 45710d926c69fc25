#pragma once

#include <vector>

#include "resrisk/triangle.hpp"

namespace resrisk {

// Weighting exponent of the variance assumption Var[F|C] = sigma_k^2 / C^gamma.
enum class Gamma : int { g0 = 0, g1 = 1 };

Gamma gamma_from_int(int value);  // throws std::invalid_argument unless 0 or 1

inline double gamma_weight(double c, Gamma g) {
  return g == Gamma::g0 ? 1.0 : c;
}

// Chain-ladder estimates; fhat[k] / sigma2hat[k] for k = 1..n, index 0 unused.
// Every column with at least one observed ratio is estimated, so fhat[n] is
// the single ratio C_{0,n}/C_{0,n-1}; sigma2hat[n] = 0 (no degrees of freedom).
struct DevFactorEstimates {
  Gamma gamma = Gamma::g0;
  std::vector<double> fhat;
  std::vector<double> sigma2hat;

  int horizon() const { return static_cast<int>(fhat.size()) - 1; }
};

DevFactorEstimates estimate(const Triangle& tri, Gamma gamma);

struct Reserves {
  std::vector<double> by_year;  // index i = 0..n; year 0 is 0
  double total = 0.0;
};

// Best-estimate reserve at t = 0: R0_i = C_{i,n-i} * (prod f_k - 1).
Reserves reserve_t0(const Triangle& tri, const DevFactorEstimates& est);

// Reserve at t = 1: every development factor is re-estimated on the trapezoid
// extended by the new diagonal, then each year is projected from its latest
// observed value. Returns the total over all accident years.
double reserve_t1(const ExtendedTriangle& ext, Gamma gamma);

// One-year claims development loss X = sum Z + R1(D, Z) - R0(D).
double cdr_loss(const Triangle& tri, const DevFactorEstimates& est,
                const NextDiagonal& diag);

// Precomputed state for repeated one-year re-reserving on a fixed base
// triangle. reserve1() is algebraically identical to reserve_t1(): column k
// gains exactly one observation (row n-k+1), so the re-estimated factor is
// (base_num_k + w*F_new) / (base_den_k + w) with the t = 0 sums precomputed.
class OneYearReval {
 public:
  OneYearReval(const Triangle& tri, const DevFactorEstimates& est);

  double reserve1(const std::vector<double>& z) const;
  double loss(const std::vector<double>& z) const;  // sum z + R1 - R0
  double reserve0() const { return r0_; }

 private:
  int n_;
  std::vector<double> base_num_;  // per column k: sum C^gamma * F at t = 0
  std::vector<double> base_den_;  // per column k: sum C^gamma at t = 0
  std::vector<double> latest_;    // C_{i,n-i} for i = 1..n, at [i-1]
  std::vector<double> latest_w_;  // C_{i,n-i}^gamma
  double r0_;
};

}  // namespace resrisk
