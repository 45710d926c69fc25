#include "resrisk/backtest.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace resrisk {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0;
  size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void config_error(int lineno, const std::string& msg) {
  std::ostringstream out;
  out << "config line " << lineno << ": " << msg;
  throw std::runtime_error(out.str());
}

double parse_num(const std::string& v, int lineno, const std::string& key) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  config_error(lineno, key + ": cannot parse '" + v + "' as a number");
}

long parse_count(const std::string& v, int lineno, const std::string& key) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  config_error(lineno, key + ": cannot parse '" + v + "' as an integer");
}

std::uint64_t parse_seed(const std::string& v, int lineno,
                         const std::string& key) {
  try {
    size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  config_error(lineno, key + ": cannot parse '" + v + "' as a seed");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_num_list(const std::string& v, int lineno,
                                   const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(v))
    out.push_back(parse_num(item, lineno, key));
  if (out.empty()) config_error(lineno, key + ": empty list");
  return out;
}

}  // namespace

std::vector<std::string> BacktestConfig::validate() const {
  true_params.validate();
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
  if (methods.empty()) throw std::invalid_argument("methods must not be empty");
  if (alphas.empty()) throw std::invalid_argument("alphas must not be empty");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("alpha must be in (0,1)");

  std::vector<std::string> warnings;
  for (double a : alphas) {
    if (quantile_rank(t, a) == t) {
      std::ostringstream w;
      w << "alpha = " << a << " with t = " << t
        << " puts the quantile at the sample maximum";
      warnings.push_back(w.str());
    }
  }
  return warnings;
}

BacktestConfig parse_backtest_config(std::istream& in) {
  BacktestConfig cfg;
  std::set<std::string> seen;
  std::vector<double> f_list, scaled_list;
  int gamma_val = -1;
  double f0 = 0.0, sigma0 = -1.0;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;

    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      config_error(lineno, "expected key = value, got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string val = trim(stripped.substr(eq + 1));
    if (key.empty()) config_error(lineno, "empty key");
    if (!seen.insert(key).second)
      config_error(lineno, "duplicate key '" + key + "'");

    if (key == "gamma") {
      const long g = parse_count(val, lineno, key);
      if (g != 0 && g != 1) config_error(lineno, "gamma must be 0 or 1");
      gamma_val = static_cast<int>(g);
    } else if (key == "f0") {
      f0 = parse_num(val, lineno, key);
    } else if (key == "sigma0") {
      sigma0 = parse_num(val, lineno, key);
    } else if (key == "f") {
      f_list = parse_num_list(val, lineno, key);
    } else if (key == "sigma_scaled") {
      scaled_list = parse_num_list(val, lineno, key);
    } else if (key == "s") {
      cfg.s = parse_count(val, lineno, key);
    } else if (key == "t") {
      cfg.t = parse_count(val, lineno, key);
    } else if (key == "alphas") {
      cfg.alphas = parse_num_list(val, lineno, key);
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& name : split_list(val)) {
        try {
          cfg.methods.push_back(method_from_name(name));
        } catch (const std::invalid_argument& e) {
          config_error(lineno, e.what());
        }
      }
      if (cfg.methods.empty()) config_error(lineno, "methods: empty list");
    } else if (key == "master_seed") {
      cfg.master_seed = parse_seed(val, lineno, key);
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(parse_count(val, lineno, key));
    } else {
      config_error(lineno, "unknown key '" + key + "'");
    }
  }

  for (const char* required : {"gamma", "f0", "sigma0", "f", "sigma_scaled"})
    if (!seen.count(required))
      throw std::runtime_error(std::string("config: missing key '") +
                               required + "'");
  if (scaled_list.size() != f_list.size())
    throw std::runtime_error("config: f and sigma_scaled lengths differ");

  cfg.true_params.gamma = gamma_from_int(gamma_val);
  cfg.true_params.f0 = f0;
  cfg.true_params.sigma0 = sigma0;
  const double scale = gamma_val == 0 ? 1.0 : std::sqrt(f0);
  cfg.true_params.f.assign(1, 0.0);
  cfg.true_params.sigma.assign(1, 0.0);
  for (size_t k = 0; k < f_list.size(); ++k) {
    cfg.true_params.f.push_back(f_list[k]);
    cfg.true_params.sigma.push_back(scaled_list[k] * scale);
  }
  return cfg;
}

BacktestConfig load_backtest_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_backtest_config(in);
}

const BacktestCell& BacktestReport::cell(Method m, double alpha) const {
  for (const auto& c : cells)
    if (c.method == m && c.alpha == alpha) return c;
  throw std::out_of_range("no such backtest cell");
}

double solvency_se(double p_hat, long s) {
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(s));
}

BacktestReport run_backtest(const BacktestConfig& config) {
  BacktestReport report;
  report.config = config;
  report.warnings = config.validate();

  const auto t0 = std::chrono::steady_clock::now();
  const int nm = static_cast<int>(config.methods.size());
  const int na = static_cast<int>(config.alphas.size());

  std::vector<long> ranks(na);
  for (int a = 0; a < na; ++a)
    ranks[a] = quantile_rank(config.t, config.alphas[a]);

  int nw = config.workers > 0
               ? config.workers
               : static_cast<int>(std::thread::hardware_concurrency());
  if (nw < 1) nw = 1;
  if (static_cast<long>(nw) > config.s) nw = static_cast<int>(config.s);

  std::atomic<long> next{0};
  std::atomic<long> redraw_next{config.s};
  const long redraw_limit = config.s * 10 + 1000;

  std::vector<long> hits(static_cast<size_t>(nm) * na, 0);
  long tri_resets = 0, start_redraws = 0, diag_resets = 0, redraws = 0;
  std::mutex mu;
  std::exception_ptr err;

  auto worker = [&] {
    std::vector<long> local_hits(static_cast<size_t>(nm) * na, 0);
    std::vector<long> pending(static_cast<size_t>(nm) * na, 0);
    long l_tri = 0, l_start = 0, l_diag = 0, l_redraws = 0;
    std::vector<double> buf(config.t);
    ScrWorkspace ws;

    // One full replicate at the given index; false = estimation failed.
    auto attempt = [&](long index) -> bool {
      RngStream tri_rng(config.master_seed, static_cast<std::uint64_t>(index),
                        0);
      const auto sim = simulate_triangle(config.true_params, tri_rng);
      std::fill(pending.begin(), pending.end(), 0);
      long p_diag = 0;
      try {
        const ScrEngine engine(sim.tri, config.true_params.gamma);
        RngStream diag_rng(config.master_seed,
                           static_cast<std::uint64_t>(index), 1);
        const auto diag =
            simulate_next_diagonal(sim.tri, config.true_params, diag_rng);
        p_diag = diag.factor_resets;
        const double x = engine.realized_loss(diag.diag);

        for (int m = 0; m < nm; ++m) {
          RngStream scen_rng(config.master_seed,
                             static_cast<std::uint64_t>(index),
                             2 + method_index(config.methods[m]));
          for (long j = 0; j < config.t; ++j)
            buf[j] = engine.scenario(config.methods[m], scen_rng, ws);
          std::sort(buf.begin(), buf.end());
          for (int a = 0; a < na; ++a)
            if (x <= buf[ranks[a] - 1]) ++pending[m * na + a];
        }
      } catch (const EstimationError&) {
        return false;
      } catch (const TriangleError&) {
        return false;
      }
      for (size_t c = 0; c < pending.size(); ++c) local_hits[c] += pending[c];
      l_tri += sim.factor_resets;
      l_start += sim.start_redraws;
      l_diag += p_diag;
      return true;
    };

    try {
      for (;;) {
        long index = next.fetch_add(1);
        if (index >= config.s) break;
        while (!attempt(index)) {
          ++l_redraws;
          index = redraw_next.fetch_add(1);
          if (index >= redraw_limit)
            throw std::runtime_error("backtest: too many replicate redraws");
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!err) err = std::current_exception();
      next.store(config.s);
    }

    std::lock_guard<std::mutex> lock(mu);
    for (size_t c = 0; c < hits.size(); ++c) hits[c] += local_hits[c];
    tri_resets += l_tri;
    start_redraws += l_start;
    diag_resets += l_diag;
    redraws += l_redraws;
  };

  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nw);
    for (int w = 0; w < nw; ++w) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  if (err) std::rethrow_exception(err);

  report.triangle_resets = tri_resets;
  report.start_redraws = start_redraws;
  report.diagonal_resets = diag_resets;
  report.replicate_redraws = redraws;

  for (int m = 0; m < nm; ++m)
    for (int a = 0; a < na; ++a) {
      BacktestCell cell;
      cell.method = config.methods[m];
      cell.alpha = config.alphas[a];
      cell.successes = hits[m * na + a];
      cell.s = config.s;
      cell.probability =
          static_cast<double>(cell.successes) / static_cast<double>(config.s);
      cell.std_error = solvency_se(cell.probability, config.s);
      report.cells.push_back(cell);
    }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

std::string format_report_table(const BacktestReport& report) {
  const auto& cfg = report.config;
  const auto& tp = cfg.true_params;
  std::ostringstream out;

  out << "one-year solvency backtest\n";
  out << "  gamma = " << static_cast<int>(tp.gamma) << ", f0 = " << tp.f0
      << ", sigma0 = " << tp.sigma0 << "\n";
  out << "  f =";
  for (int k = 1; k <= tp.horizon(); ++k)
    out << (k > 1 ? "," : " ") << tp.f[k];
  out << "\n  sigma =";
  for (int k = 1; k <= tp.horizon(); ++k)
    out << (k > 1 ? "," : " ") << tp.sigma[k];
  out << "\n  s = " << cfg.s << ", t = " << cfg.t
      << ", master_seed = " << cfg.master_seed
      << ", workers = " << cfg.workers << "\n";
  out << "  replicate_redraws = " << report.replicate_redraws
      << ", triangle_resets = " << report.triangle_resets
      << ", start_redraws = " << report.start_redraws
      << ", diagonal_resets = " << report.diagonal_resets << "\n";
  out << "  wall_seconds = " << std::fixed << std::setprecision(1)
      << report.wall_seconds << "\n";
  for (const auto& w : report.warnings) out << "  warning: " << w << "\n";
  out << "\n";

  out << std::left << std::setw(11) << "method" << std::right << std::setw(7)
      << "alpha" << std::setw(11) << "successes" << std::setw(9) << "s"
      << std::setw(13) << "probability" << std::setw(11) << "std_error"
      << "\n";
  for (const auto& c : report.cells) {
    out << std::left << std::setw(11) << method_name(c.method) << std::right
        << std::fixed << std::setprecision(3) << std::setw(7) << c.alpha
        << std::setw(11) << c.successes << std::setw(9) << c.s
        << std::setprecision(4) << std::setw(12) << 100.0 * c.probability
        << "%" << std::setw(10) << 100.0 * c.std_error << "%\n";
  }
  return out.str();
}

std::string format_report_csv(const BacktestReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << "method,alpha,successes,s,probability,std_error\n";
  for (const auto& c : report.cells) {
    out << method_name(c.method) << ',' << c.alpha << ',' << c.successes << ','
        << c.s << ',' << c.probability << ',' << c.std_error << "\n";
  }
  return out.str();
}

}  // namespace resrisk
