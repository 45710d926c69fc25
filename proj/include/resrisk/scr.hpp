#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "resrisk/chain_ladder.hpp"
#include "resrisk/rng.hpp"
#include "resrisk/triangle.hpp"

namespace resrisk {

enum class Method { without = 0, bootstrap = 1, inversion_adj = 2 };

// Canonical index, used for substream phases and report ordering.
inline int method_index(Method m) { return static_cast<int>(m); }
const char* method_name(Method m);                // "without" | "bootstrap" | "inversion"
Method method_from_name(const std::string& name);  // throws std::invalid_argument

struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScrResult {
  Method method;
  double alpha;
  double scr;
  long scenarios;
  std::uint64_t seed;
  double reserve0;
};

// 1-based rank of the empirical alpha-quantile: ceil(alpha * t), with a small
// slack against floating-point noise in the product.
long quantile_rank(long t, double alpha);

// The ceil(alpha*t)-th smallest sample value.
double empirical_quantile(std::vector<double> samples, double alpha);

// Standardized residuals of the observed ratios, adjusted for the variance
// shrinkage of residuals around a fitted mean: zeta* = zeta_hat *
// (1 - C^gamma / sum C^gamma)^(-1/2). Columns with sigma2hat = 0 contribute
// nothing; an empty result throws EstimationError.
std::vector<double> build_residue_pool(const Triangle& tri,
                                       const DevFactorEstimates& est);

// One draw of the inversion parameter scenario; entries indexed by column
// k = 1..n-1, index 0 unused. Columns with sigma2hat = 0 carry the identity
// draw (Rprime = 0, Mprime = 1, fsim = fhat, sigma2sim = 0).
struct InversionDraw {
  std::vector<double> rprime;
  std::vector<double> mprime;
  std::vector<double> fsim;
  std::vector<double> sigma2sim;
  double ahat = 0.0;
};

// Scratch buffers reused across scenario draws; one per thread.
struct ScrWorkspace {
  std::vector<double> z;
  std::vector<double> f_col;
  std::vector<double> s2_col;
  std::vector<double> r_col;
  std::vector<double> m_col;
  std::vector<double> f_star;
  double ahat = 0.0;
};

// The three modelled-risk engines over one fixed triangle. A scenario is one
// draw of the modelled one-year loss X^model; the SCR is the empirical
// alpha-quantile over many scenarios.
class ScrEngine {
 public:
  ScrEngine(const Triangle& tri, Gamma gamma);

  double scenario(Method m, RngStream& rng, ScrWorkspace& ws) const;

  double scenario_without(RngStream& rng, ScrWorkspace& ws) const;
  double scenario_bootstrap(RngStream& rng, ScrWorkspace& ws) const;
  double scenario_bootstrap(const std::vector<double>& pool, RngStream& rng,
                            ScrWorkspace& ws) const;
  double scenario_inversion_adj(RngStream& rng, ScrWorkspace& ws) const;

  InversionDraw draw_inversion(RngStream& rng) const;

  // Realized loss of an externally supplied diagonal (same re-reserving path
  // as the modelled scenarios).
  double realized_loss(const NextDiagonal& diag) const;

  const DevFactorEstimates& estimates() const { return est_; }
  const std::vector<double>& residue_pool() const { return pool_; }
  const std::vector<double>& column_weights() const { return what_; }
  double reserve0() const { return reval_.reserve0(); }
  int horizon() const { return n_; }

 private:
  void draw_inversion_into(RngStream& rng, ScrWorkspace& ws) const;
  double assemble_loss(ScrWorkspace& ws) const;

  int n_;
  Gamma gamma_;
  DevFactorEstimates est_;
  OneYearReval reval_;
  std::vector<double> sigma_hat_;               // sqrt(sigma2hat), per column
  std::vector<double> latest_;                  // C_{i,n-i}, i = 1..n at [i-1]
  std::vector<double> latest_sqrt_w_;           // sqrt(C_{i,n-i}^gamma)
  std::vector<std::vector<double>> cell_w_;     // per column k: C_{i,k-1}^gamma
  std::vector<std::vector<double>> cell_sqrt_w_;
  std::vector<double> col_sum_w_;               // per column k: sum of cell_w_
  std::vector<double> pool_;                    // adjusted residues (may be empty)
  std::vector<double> what_;                    // normalized weights, k = 1..n-1
  double what_total_ = 0.0;
  std::vector<double> zhat_;                    // (fhat_{n-i+1} - 1) C_{i,n-i}
};

// Runs t scenarios (in parallel, deterministically: scenario j draws from
// substream (seed, j, 16 + method)) and returns the empirical alpha-quantile.
ScrResult compute_scr(const Triangle& tri, Method method, Gamma gamma,
                      double alpha, long t, std::uint64_t seed,
                      int workers = 0);

}  // namespace resrisk
