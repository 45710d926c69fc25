#include "resrisk/fiducial.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "resrisk/scr.hpp"
#include "resrisk/stats.hpp"

namespace resrisk {

double chi2_sum_of_squares(int n, RngStream& rng) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    s += z * z;
  }
  return s;
}

double sample_sigma2_fiducial(int n, double sigma2hat, RngStream& rng) {
  return n * sigma2hat / chi2_sum_of_squares(n, rng);
}

double scr_fiducial(int n, double sigma2hat, double alpha, long t,
                    RngStream& rng) {
  std::vector<double> x(t);
  const double shat = std::sqrt(sigma2hat);
  for (long j = 0; j < t; ++j) {
    const double m = chi2_sum_of_squares(n, rng);
    x[j] = shat * std::sqrt(n / m) * rng.next_normal();
  }
  return empirical_quantile(std::move(x), alpha);
}

double scr_fiducial_analytic(int n, double sigma2hat, double alpha) {
  return std::sqrt(sigma2hat) * student_t_quantile(alpha, n);
}

double scr_theoretical(int n, double sigma2hat, double alpha, long t,
                       RngStream& rng) {
  std::vector<double> x(t);
  const double shat = std::sqrt(sigma2hat);
  for (long j = 0; j < t; ++j) {
    const double m = chi2_sum_of_squares(n, rng);
    x[j] = shat * std::sqrt(m / n) * rng.next_normal();
  }
  return empirical_quantile(std::move(x), alpha);
}

double scr_plugin(double sigma2hat, double alpha) {
  return std::sqrt(sigma2hat) * inverse_normal_cdf(alpha);
}

std::vector<FiducialCoverageRow> coverage_experiment(
    double sigma_true, int n, const std::vector<double>& alphas, long s,
    long t, std::uint64_t seed, int workers) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (s < 1 || t < 1)
    throw std::invalid_argument("replicates and scenarios must be >= 1");
  if (!(sigma_true > 0.0))
    throw std::invalid_argument("sigma_true must be positive");
  if (alphas.empty()) throw std::invalid_argument("alphas must not be empty");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("alpha must be in (0,1)");

  const int na = static_cast<int>(alphas.size());
  std::vector<long> ranks(na);
  for (int a = 0; a < na; ++a) ranks[a] = quantile_rank(t, alphas[a]);

  int nw = workers > 0 ? workers
                       : static_cast<int>(std::thread::hardware_concurrency());
  if (nw < 1) nw = 1;
  if (static_cast<long>(nw) > s) nw = static_cast<int>(s);

  std::vector<long> hits_fid(na, 0), hits_theo(na, 0), hits_plug(na, 0);
  std::atomic<long> next{0};
  std::mutex mu;

  auto worker = [&] {
    std::vector<double> fid(t), theo(t);
    std::vector<long> hf(na, 0), ht(na, 0), hp(na, 0);
    for (;;) {
      const long r = next.fetch_add(1);
      if (r >= s) break;
      const auto rr = static_cast<std::uint64_t>(r);

      RngStream data_rng(seed, rr, 0);
      const double s2hat = chi2_sum_of_squares(n, data_rng) / n *
                           (sigma_true * sigma_true);
      const double shat = std::sqrt(s2hat);

      RngStream scen_rng(seed, rr, 1);
      for (long j = 0; j < t; ++j) {
        const double m = chi2_sum_of_squares(n, scen_rng);
        const double z = scen_rng.next_normal();
        fid[j] = shat * std::sqrt(n / m) * z;
        theo[j] = shat * std::sqrt(m / n) * z;
      }
      std::sort(fid.begin(), fid.end());
      std::sort(theo.begin(), theo.end());

      RngStream true_rng(seed, rr, 2);
      const double x_true = sigma_true * true_rng.next_normal();

      for (int a = 0; a < na; ++a) {
        if (x_true <= fid[ranks[a] - 1]) ++hf[a];
        if (x_true <= theo[ranks[a] - 1]) ++ht[a];
        if (x_true <= scr_plugin(s2hat, alphas[a])) ++hp[a];
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    for (int a = 0; a < na; ++a) {
      hits_fid[a] += hf[a];
      hits_theo[a] += ht[a];
      hits_plug[a] += hp[a];
    }
  };

  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nw);
    for (int w = 0; w < nw; ++w) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }

  std::vector<FiducialCoverageRow> rows(na);
  for (int a = 0; a < na; ++a) {
    rows[a].alpha = alphas[a];
    rows[a].s = s;
    rows[a].hits_fiducial = hits_fid[a];
    rows[a].hits_theoretical = hits_theo[a];
    rows[a].hits_plugin = hits_plug[a];
  }
  return rows;
}

double density_A(double x, int n) { return chi2_pdf(x, n); }

double density_B(double x, int n) {
  if (x <= 0.0) return 0.0;
  return chi2_pdf(1.0 / x, n) / (x * x);
}

}  // namespace resrisk
