#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "resrisk/backtest.hpp"
#include "test_support.hpp"

using namespace resrisk;

TEST_CASE("bundled configs parse with the documented parameters") {
  const auto g0 = load_backtest_config("data/backtest_g0.cfg");
  CHECK(g0.true_params.gamma == Gamma::g0);
  CHECK(g0.true_params.f0 == 1420000.0);
  CHECK(g0.true_params.sigma0 == 336000.0);
  REQUIRE(g0.true_params.horizon() == 10);
  const double f_ref[] = {1.5,  1.2,  1.12, 1.07, 1.04,
                          1.02, 1.01, 1.005, 1.002, 1.0};
  const double sc_ref[] = {0.2,  0.12,  0.08, 0.045, 0.03,
                           0.018, 0.01, 0.006, 0.003, 0.0};
  for (int k = 1; k <= 10; ++k) {
    CHECK(g0.true_params.f[k] == f_ref[k - 1]);
    CHECK(g0.true_params.sigma[k] == sc_ref[k - 1]);  // gamma = 0: no scale
  }
  CHECK(g0.s == 20000);
  CHECK(g0.t == 2000);
  REQUIRE(g0.alphas == std::vector<double>{0.9, 0.95, 0.99, 0.995});
  REQUIRE(g0.methods == std::vector<Method>{Method::without, Method::bootstrap,
                                            Method::inversion_adj});
  CHECK(g0.master_seed == 1);
  CHECK(g0.workers == 0);
  CHECK(g0.validate().empty());

  const auto g1 = load_backtest_config("data/backtest_g1.cfg");
  CHECK(g1.true_params.gamma == Gamma::g1);
  for (int k = 1; k <= 10; ++k)
    CHECK(g1.true_params.sigma[k] ==
          doctest::Approx(sc_ref[k - 1] * std::sqrt(1420000.0))
              .epsilon(1e-15));
}

namespace {

BacktestConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_backtest_config(in);
}

const char* kMinimal =
    "gamma = 0\n"
    "f0 = 100\n"
    "sigma0 = 10\n"
    "f = 1.5, 1.0\n"
    "sigma_scaled = 0.2, 0.0\n";

void check_error(const std::string& text, const std::string& needle) {
  try {
    parse_text(text);
    FAIL("expected a parse error containing '" << needle << "'");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("config parser reports offending lines") {
  CHECK_NOTHROW(parse_text(kMinimal));
  check_error(std::string(kMinimal) + "volume = 3\n",
              "config line 6: unknown key 'volume'");
  check_error(std::string(kMinimal) + "f0 = 200\n",
              "config line 6: duplicate key 'f0'");
  check_error(std::string(kMinimal) + "s = soon\n", "as an integer");
  check_error(std::string(kMinimal) + "alphas = 0.9, high\n",
              "cannot parse 'high'");
  check_error(std::string(kMinimal) + "methods = without, median\n", "median");
  check_error(std::string(kMinimal) + "nonsense\n", "expected key = value");
  check_error("gamma = 2\n", "gamma must be 0 or 1");
  check_error(
      "gamma = 0\nf0 = 100\nsigma0 = 10\nf = 1.5, 1.0\n"
      "sigma_scaled = 0.2\n",
      "lengths differ");
  check_error("f0 = 100\nsigma0 = 10\nf = 1.5, 1.0\nsigma_scaled = 0.2, 0.0\n",
              "missing key 'gamma'");
}

TEST_CASE("config comments and spacing are tolerated") {
  const auto cfg = parse_text(
      "  gamma=1   # volume weighted\n"
      "\n"
      "f0 = 100  \n"
      "sigma0=10\n"
      "f = 1.5 ,1.0\n"
      "sigma_scaled = 0.2, 0\n"
      "t = 200\n");
  CHECK(cfg.true_params.gamma == Gamma::g1);
  CHECK(cfg.t == 200);
  CHECK(cfg.s == 20000);  // default
  CHECK(cfg.true_params.sigma[1] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("validate flags degenerate quantiles and bad fields") {
  auto cfg = parse_text(kMinimal);
  CHECK(cfg.validate().empty());

  cfg.t = 100;
  cfg.alphas = {0.9, 0.995};  // rank 100 of 100
  const auto warnings = cfg.validate();
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("sample maximum") != std::string::npos);

  auto bad = parse_text(kMinimal);
  bad.s = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = parse_text(kMinimal);
  bad.alphas = {1.5};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = parse_text(kMinimal);
  bad.methods.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = parse_text(kMinimal);
  bad.true_params.f0 = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("solvency standard error") {
  CHECK(solvency_se(0.995, 100000) ==
        doctest::Approx(std::sqrt(0.995 * 0.005 / 100000.0)).epsilon(1e-15));
  CHECK(solvency_se(0.0, 100) == 0.0);
  CHECK(solvency_se(0.5, 4) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("backtest reports are worker-count invariant") {
  auto cfg = load_backtest_config("data/backtest_g0.cfg");
  cfg.s = 300;
  cfg.t = 400;
  cfg.workers = 1;
  const auto one = run_backtest(cfg);
  cfg.workers = 4;
  const auto four = run_backtest(cfg);

  REQUIRE(one.cells.size() == 12);
  REQUIRE(four.cells.size() == 12);
  for (size_t c = 0; c < one.cells.size(); ++c) {
    CHECK(one.cells[c].method == four.cells[c].method);
    CHECK(one.cells[c].alpha == four.cells[c].alpha);
    CHECK(one.cells[c].successes == four.cells[c].successes);
    CHECK(one.cells[c].s == 300);
    CHECK(one.cells[c].probability ==
          doctest::Approx(one.cells[c].successes / 300.0).epsilon(1e-15));
    CHECK(one.cells[c].std_error ==
          doctest::Approx(solvency_se(one.cells[c].probability, 300))
              .epsilon(1e-15));
  }
  CHECK(one.triangle_resets == four.triangle_resets);
  CHECK(one.start_redraws == four.start_redraws);
  CHECK(one.diagonal_resets == four.diagonal_resets);
  CHECK(one.replicate_redraws == four.replicate_redraws);

  // Cell lookup walks method-major, alpha-minor layout.
  const auto& cell = one.cell(Method::bootstrap, 0.99);
  CHECK(cell.method == Method::bootstrap);
  CHECK(cell.alpha == 0.99);
  CHECK_THROWS_AS(one.cell(Method::bootstrap, 0.42), std::out_of_range);

  const std::string csv = format_report_csv(one);
  CHECK(csv.rfind("method,alpha,successes,s,probability,std_error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  const std::string table = format_report_table(one);
  CHECK(table.find("one-year solvency backtest") != std::string::npos);
  CHECK(table.find("master_seed = 1") != std::string::npos);
}
