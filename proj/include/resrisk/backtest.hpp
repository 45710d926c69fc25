#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "resrisk/scr.hpp"
#include "resrisk/true_world.hpp"

namespace resrisk {

struct BacktestConfig {
  TrueParams true_params;
  std::vector<Method> methods = {Method::without, Method::bootstrap,
                                 Method::inversion_adj};
  std::vector<double> alphas = {0.9, 0.95, 0.99, 0.995};
  long s = 20000;           // outer replicates
  long t = 2000;            // inner scenarios per method
  std::uint64_t master_seed = 1;
  int workers = 0;          // 0 = hardware concurrency

  // Throws std::invalid_argument; returns warnings (e.g. t*(1-alpha) < 1).
  std::vector<std::string> validate() const;
};

// Flat key = value text; keys gamma, f0, sigma0, f, sigma_scaled, s, t,
// alphas, methods, master_seed, workers. Lists are comma separated; '#'
// starts a comment. sigma_scaled follows the sigma_k * f0^(-gamma/2)
// convention, so the stored sigma_k is sigma_scaled_k * f0^(gamma/2).
BacktestConfig parse_backtest_config(std::istream& in);
BacktestConfig load_backtest_config(const std::string& path);

struct BacktestCell {
  Method method;
  double alpha;
  long successes;   // count of replicates with x_j <= SCR_j(alpha)
  long s;
  double probability;  // successes / s
  double std_error;    // sqrt(p(1-p)/s)
};

struct BacktestReport {
  BacktestConfig config;
  std::vector<BacktestCell> cells;  // method-major, alpha-minor
  long triangle_resets = 0;
  long start_redraws = 0;
  long diagonal_resets = 0;
  long replicate_redraws = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;

  const BacktestCell& cell(Method m, double alpha) const;
};

double solvency_se(double p_hat, long s);

// Nested simulation protocol. Replicate j: (0) triangle from substream
// (seed, j, 0); (1) true next diagonal from (seed, j, 1) and realized loss
// x_j by chain-ladder re-reserving; (2) per method m, SCR as the empirical
// quantile over t scenarios from (seed, j, 2 + m), one sorted sample serving
// all alpha levels; (3) tally x_j <= SCR. Estimation failures are logged and
// the replicate is redrawn from a fresh index >= s. Reports are identical
// for any worker count.
BacktestReport run_backtest(const BacktestConfig& config);

std::string format_report_table(const BacktestReport& report);
std::string format_report_csv(const BacktestReport& report);

}  // namespace resrisk
