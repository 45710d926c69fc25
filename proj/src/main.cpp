#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "resrisk/backtest.hpp"
#include "resrisk/chain_ladder.hpp"
#include "resrisk/fiducial.hpp"
#include "resrisk/scr.hpp"
#include "resrisk/triangle.hpp"

namespace {

using namespace resrisk;

int run_reserve(const std::string& path, int gamma_int) {
  const Triangle tri = load_triangle(path);
  const Gamma gamma = gamma_from_int(gamma_int);
  const auto est = estimate(tri, gamma);
  const auto res = reserve_t0(tri, est);

  std::cout << "chain-ladder reserves (gamma = " << gamma_int << ")\n";
  for (int i = 1; i <= tri.horizon(); ++i)
    std::cout << "  year " << std::setw(2) << i << ": "
              << std::llround(res.by_year[i]) << "\n";
  std::cout << "  total: " << std::llround(res.total) << "\n";
  return 0;
}

int run_scr(const std::string& path, const std::string& method_str,
            int gamma_int, double alpha, long scenarios, std::uint64_t seed) {
  const Triangle tri = load_triangle(path);
  const Method method = method_from_name(method_str);
  const Gamma gamma = gamma_from_int(gamma_int);
  const auto result =
      compute_scr(tri, method, gamma, alpha, scenarios, seed);

  std::cout << "method = " << method_name(method)
            << ", gamma = " << gamma_int << ", alpha = " << alpha << "\n";
  std::cout << "scenarios = " << scenarios << ", seed = " << seed << "\n";
  std::cout << "reserve_t0 = " << std::llround(result.reserve0) << "\n";
  std::cout << "scr = " << std::llround(result.scr) << "\n";
  return 0;
}

int run_backtest_cmd(const std::string& config_path, const long* s_over,
                     const long* t_over, const std::uint64_t* seed_over,
                     const int* workers_over, const std::string& out_path) {
  BacktestConfig cfg = load_backtest_config(config_path);
  if (s_over) cfg.s = *s_over;
  if (t_over) cfg.t = *t_over;
  if (seed_over) cfg.master_seed = *seed_over;
  if (workers_over) cfg.workers = *workers_over;

  const auto report = run_backtest(cfg);
  std::cout << format_report_table(report);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write report file: " + out_path);
  out << format_report_csv(report);
  std::cout << "\nreport written to " << out_path << "\n";
  return 0;
}

void print_density_grid(int n) {
  std::cout << "\ndensity grid (n = " << n << ")\n";
  std::cout << "  x          density_A    density_B\n";
  const double lo = std::log(0.01);
  const double hi = std::log(3.0 * n);
  const int steps = 60;
  std::cout << std::setprecision(6) << std::fixed;
  for (int j = 0; j <= steps; ++j) {
    const double x = std::exp(lo + (hi - lo) * j / steps);
    std::cout << "  " << std::setw(9) << x << "  " << std::setw(11)
              << density_A(x, n) << "  " << std::setw(11) << density_B(x, n)
              << "\n";
  }
  std::cout.unsetf(std::ios::fixed);
  std::cout << std::setprecision(6);
}

int run_fiducial(int n, bool have_s2, double sigma2hat, bool have_true,
                 double sigma_true, const std::vector<double>& alphas,
                 long replicates, long scenarios, std::uint64_t seed) {
  if (have_true) {
    const auto rows =
        coverage_experiment(sigma_true, n, alphas, replicates, scenarios,
                            seed);
    std::cout << "fiducial coverage (n = " << n
              << ", sigma_true = " << sigma_true << ", s = " << replicates
              << ", t = " << scenarios << ", seed = " << seed << ")\n";
    std::cout << "  alpha    fiducial  theoretical      plug-in\n";
    std::cout << std::fixed;
    for (const auto& row : rows) {
      std::cout << std::setprecision(3) << "  " << std::setw(5) << row.alpha
                << std::setprecision(4) << std::setw(11)
                << 100.0 * row.coverage_fiducial() << "%" << std::setw(12)
                << 100.0 * row.coverage_theoretical() << "%" << std::setw(12)
                << 100.0 * row.coverage_plugin() << "%\n";
    }
    std::cout.unsetf(std::ios::fixed);
  } else if (have_s2) {
    std::cout << "fiducial scr (n = " << n << ", sigma2hat = " << sigma2hat
              << ", t = " << scenarios << ", seed = " << seed << ")\n";
    std::cout << "  alpha      scr_mc   scr_exact\n";
    std::cout << std::fixed;
    for (size_t a = 0; a < alphas.size(); ++a) {
      RngStream rng(seed, static_cast<std::uint64_t>(a), 0);
      const double mc = scr_fiducial(n, sigma2hat, alphas[a], scenarios, rng);
      const double exact = scr_fiducial_analytic(n, sigma2hat, alphas[a]);
      std::cout << std::setprecision(3) << "  " << std::setw(5) << alphas[a]
                << std::setprecision(6) << std::setw(12) << mc << std::setw(12)
                << exact << "\n";
    }
    std::cout.unsetf(std::ios::fixed);
  }
  print_density_grid(n);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic one-year reserve risk toolkit"};
  app.require_subcommand(1);

  std::string tri_path;
  int gamma_int = 0;

  auto* res_cmd =
      app.add_subcommand("reserve", "chain-ladder reserves at t = 0");
  res_cmd->add_option("--triangle", tri_path, "claims triangle csv")
      ->required();
  res_cmd->add_option("--gamma", gamma_int, "variance weight exponent (0|1)")
      ->required()
      ->check(CLI::Range(0, 1));

  std::string method_str;
  double alpha = 0.995;
  long scenarios = 0;
  std::uint64_t seed = 1;

  auto* scr_cmd = app.add_subcommand("scr", "one-year reserve risk SCR");
  scr_cmd->add_option("--triangle", tri_path, "claims triangle csv")
      ->required();
  scr_cmd
      ->add_option("--method", method_str,
                   "modelled risk: without, bootstrap or inversion")
      ->required()
      ->check(CLI::IsMember({"without", "bootstrap", "inversion"}));
  scr_cmd->add_option("--gamma", gamma_int, "variance weight exponent (0|1)")
      ->required()
      ->check(CLI::Range(0, 1));
  scr_cmd->add_option("--alpha", alpha, "solvency level in (0,1)")->required();
  scr_cmd->add_option("--scenarios", scenarios, "Monte-Carlo scenarios")
      ->required()
      ->check(CLI::PositiveNumber);
  scr_cmd->add_option("--seed", seed, "master seed")->required();

  std::string config_path;
  std::string out_path = "backtest_report.csv";
  long s_over = 0, t_over = 0;
  std::uint64_t seed_over = 0;
  int workers_over = 0;

  auto* bt_cmd =
      app.add_subcommand("backtest", "nested solvency backtest");
  bt_cmd->add_option("--config", config_path, "backtest config file")
      ->required();
  auto* s_opt = bt_cmd->add_option("--s", s_over, "override outer replicates")
                    ->check(CLI::PositiveNumber);
  auto* t_opt = bt_cmd->add_option("--t", t_over, "override inner scenarios")
                    ->check(CLI::PositiveNumber);
  auto* seed_opt = bt_cmd->add_option("--seed", seed_over, "override seed");
  auto* workers_opt =
      bt_cmd->add_option("--workers", workers_over, "override worker count")
          ->check(CLI::NonNegativeNumber);
  bt_cmd->add_option("--out", out_path, "report csv path");

  int n = 0;
  double sigma2hat = 0.0, sigma_true = 0.0;
  std::vector<double> alphas;
  long replicates = 0;

  auto* fid_cmd = app.add_subcommand(
      "fiducial", "fiducial scale model: scr and coverage");
  fid_cmd->add_option("--n", n, "observation count")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* target = fid_cmd->add_option_group("target");
  auto* s2_opt =
      target->add_option("--sigma2hat", sigma2hat, "observed variance");
  auto* st_opt = target->add_option("--sigma-true", sigma_true,
                                    "true sigma (coverage mode)");
  target->require_option(1);
  fid_cmd->add_option("--alphas", alphas, "solvency levels")
      ->required()
      ->delimiter(',');
  fid_cmd->add_option("--replicates", replicates, "coverage replicates")
      ->required()
      ->check(CLI::PositiveNumber);
  fid_cmd->add_option("--scenarios", scenarios, "Monte-Carlo scenarios")
      ->required()
      ->check(CLI::PositiveNumber);
  fid_cmd->add_option("--seed", seed, "master seed")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*res_cmd) return run_reserve(tri_path, gamma_int);
    if (*scr_cmd)
      return run_scr(tri_path, method_str, gamma_int, alpha, scenarios, seed);
    if (*bt_cmd)
      return run_backtest_cmd(config_path, *s_opt ? &s_over : nullptr,
                              *t_opt ? &t_over : nullptr,
                              *seed_opt ? &seed_over : nullptr,
                              *workers_opt ? &workers_over : nullptr,
                              out_path);
    if (*fid_cmd)
      return run_fiducial(n, !!*s2_opt, sigma2hat, !!*st_opt, sigma_true,
                          alphas, replicates, scenarios, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
