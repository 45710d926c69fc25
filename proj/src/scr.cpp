#include "resrisk/scr.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace resrisk {

const char* method_name(Method m) {
  switch (m) {
    case Method::without:
      return "without";
    case Method::bootstrap:
      return "bootstrap";
    case Method::inversion_adj:
      return "inversion";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "without") return Method::without;
  if (name == "bootstrap") return Method::bootstrap;
  if (name == "inversion") return Method::inversion_adj;
  throw std::invalid_argument(
      "unknown method '" + name +
      "' (expected without, bootstrap or inversion)");
}

long quantile_rank(long t, double alpha) {
  long r = static_cast<long>(std::ceil(alpha * static_cast<double>(t) - 1e-9));
  if (r < 1) r = 1;
  if (r > t) r = t;
  return r;
}

double empirical_quantile(std::vector<double> samples, double alpha) {
  if (samples.empty())
    throw std::invalid_argument("empirical_quantile: empty sample");
  const long r = quantile_rank(static_cast<long>(samples.size()), alpha);
  std::nth_element(samples.begin(), samples.begin() + (r - 1), samples.end());
  return samples[r - 1];
}

namespace {

std::vector<double> collect_pool(const Triangle& tri,
                                 const DevFactorEstimates& est) {
  const int n = tri.horizon();
  std::vector<double> pool;
  for (int k = 1; k <= n; ++k) {
    if (est.sigma2hat[k] <= 0.0) continue;
    double wsum = 0.0;
    for (int i = 0; i <= n - k; ++i)
      wsum += gamma_weight(tri.cell(i, k - 1), est.gamma);
    const double shat = std::sqrt(est.sigma2hat[k]);
    for (int i = 0; i <= n - k; ++i) {
      const double w = gamma_weight(tri.cell(i, k - 1), est.gamma);
      const double ratio = tri.cell(i, k) / tri.cell(i, k - 1);
      const double zhat = (ratio - est.fhat[k]) * std::sqrt(w) / shat;
      pool.push_back(zhat / std::sqrt(1.0 - w / wsum));
    }
  }
  return pool;
}

void ensure_workspace(ScrWorkspace& ws, int n) {
  if (static_cast<int>(ws.z.size()) == n) return;
  ws.z.resize(n);
  ws.f_col.assign(n + 1, 0.0);
  ws.s2_col.assign(n + 1, 0.0);
  ws.r_col.assign(n + 1, 0.0);
  ws.m_col.assign(n + 1, 1.0);
  ws.f_star.resize(n);
}

}  // namespace

std::vector<double> build_residue_pool(const Triangle& tri,
                                       const DevFactorEstimates& est) {
  auto pool = collect_pool(tri, est);
  if (pool.empty())
    throw EstimationError("no residues: every column has sigma2hat = 0");
  return pool;
}

ScrEngine::ScrEngine(const Triangle& tri, Gamma gamma)
    : n_(tri.horizon()),
      gamma_(gamma),
      est_(estimate(tri, gamma)),
      reval_(tri, est_) {
  sigma_hat_.assign(n_ + 1, 0.0);
  for (int k = 1; k <= n_; ++k) sigma_hat_[k] = std::sqrt(est_.sigma2hat[k]);

  latest_.resize(n_);
  latest_sqrt_w_.resize(n_);
  zhat_.resize(n_);
  for (int i = 1; i <= n_; ++i) {
    latest_[i - 1] = tri.cell(i, n_ - i);
    latest_sqrt_w_[i - 1] = std::sqrt(gamma_weight(latest_[i - 1], gamma_));
    zhat_[i - 1] = (est_.fhat[n_ - i + 1] - 1.0) * latest_[i - 1];
  }

  cell_w_.resize(n_ + 1);
  cell_sqrt_w_.resize(n_ + 1);
  col_sum_w_.assign(n_ + 1, 0.0);
  for (int k = 1; k <= n_; ++k) {
    cell_w_[k].resize(n_ - k + 1);
    cell_sqrt_w_[k].resize(n_ - k + 1);
    for (int i = 0; i <= n_ - k; ++i) {
      const double w = gamma_weight(tri.cell(i, k - 1), gamma_);
      cell_w_[k][i] = w;
      cell_sqrt_w_[k][i] = std::sqrt(w);
      col_sum_w_[k] += w;
    }
  }

  pool_ = collect_pool(tri, est_);

  // Column weights of the uncertainty mix: column k = n - i + 1 enters with
  // the parameter-error share of accident year i's one-year variance.
  what_.assign(n_ + 1, 0.0);
  for (int i = 2; i <= n_; ++i) {
    const int k = n_ - i + 1;
    const double c = latest_[i - 1];
    const double w = gamma_weight(c, gamma_);
    what_[k] = est_.sigma2hat[k] * c * c * (1.0 / w + 1.0 / col_sum_w_[k]);
    what_total_ += what_[k];
  }
  if (what_total_ > 0.0)
    for (int k = 1; k <= n_ - 1; ++k) what_[k] /= what_total_;
}

double ScrEngine::scenario(Method m, RngStream& rng, ScrWorkspace& ws) const {
  switch (m) {
    case Method::without:
      return scenario_without(rng, ws);
    case Method::bootstrap:
      return scenario_bootstrap(rng, ws);
    case Method::inversion_adj:
      return scenario_inversion_adj(rng, ws);
  }
  throw std::invalid_argument("unknown method");
}

double ScrEngine::scenario_without(RngStream& rng, ScrWorkspace& ws) const {
  ensure_workspace(ws, n_);
  for (int i = 1; i <= n_; ++i) {
    const int k = n_ - i + 1;
    double factor = est_.fhat[k];
    if (est_.sigma2hat[k] > 0.0) {
      factor += sigma_hat_[k] / latest_sqrt_w_[i - 1] * rng.next_normal();
      if (factor <= 0.0) factor = 1.0;
    }
    ws.z[i - 1] = (factor - 1.0) * latest_[i - 1];
  }
  return assemble_loss(ws);
}

double ScrEngine::scenario_bootstrap(RngStream& rng, ScrWorkspace& ws) const {
  return scenario_bootstrap(pool_, rng, ws);
}

double ScrEngine::scenario_bootstrap(const std::vector<double>& pool,
                                     RngStream& rng, ScrWorkspace& ws) const {
  if (pool.size() < 2)
    throw EstimationError("bootstrap needs a residue pool of size >= 2");
  ensure_workspace(ws, n_);

  for (int k = 1; k <= n_; ++k) {
    if (est_.sigma2hat[k] <= 0.0) {
      ws.f_col[k] = est_.fhat[k];
      ws.s2_col[k] = 0.0;
      continue;
    }
    const int cnt = n_ - k + 1;
    double num = 0.0;
    for (int i = 0; i < cnt; ++i) {
      const double zstar = pool[rng.next_below(pool.size())];
      const double fstar =
          est_.fhat[k] + sigma_hat_[k] / cell_sqrt_w_[k][i] * zstar;
      ws.f_star[i] = fstar;
      num += cell_w_[k][i] * fstar;
    }
    const double fbt = num / col_sum_w_[k];
    double ss = 0.0;
    for (int i = 0; i < cnt; ++i) {
      const double d = ws.f_star[i] - fbt;
      ss += cell_w_[k][i] * d * d;
    }
    ws.f_col[k] = fbt;
    ws.s2_col[k] = ss / (n_ - k);
  }

  for (int i = 1; i <= n_; ++i) {
    const int k = n_ - i + 1;
    double factor = ws.f_col[k];
    if (ws.s2_col[k] > 0.0) {
      factor +=
          std::sqrt(ws.s2_col[k]) / latest_sqrt_w_[i - 1] * rng.next_normal();
      if (factor <= 0.0) factor = 1.0;
    }
    ws.z[i - 1] = (factor - 1.0) * latest_[i - 1];
  }
  return assemble_loss(ws);
}

void ScrEngine::draw_inversion_into(RngStream& rng, ScrWorkspace& ws) const {
  if (what_total_ <= 0.0)
    throw EstimationError(
        "inversion needs at least one column with sigma2hat > 0");
  ensure_workspace(ws, n_);

  for (int k = 1; k <= n_ - 1; ++k) {
    if (est_.sigma2hat[k] <= 0.0) {
      ws.r_col[k] = 0.0;
      ws.m_col[k] = 1.0;
      ws.f_col[k] = est_.fhat[k];
      ws.s2_col[k] = 0.0;
      continue;
    }
    const int cnt = n_ - k + 1;
    double rp = 0.0;
    double mp = 0.0;
    do {
      double s = 0.0;
      for (int i = 0; i < cnt; ++i) {
        const double z = rng.next_normal();
        ws.f_star[i] = z;
        s += cell_sqrt_w_[k][i] * z;
      }
      rp = s / col_sum_w_[k];
      double ss = 0.0;
      for (int i = 0; i < cnt; ++i) {
        const double d = ws.f_star[i] - rp * cell_sqrt_w_[k][i];
        ss += d * d;
      }
      mp = ss / (n_ - k);
    } while (mp < 1e-12);
    ws.r_col[k] = rp;
    ws.m_col[k] = mp;
    const double s2sim = est_.sigma2hat[k] / mp;
    ws.s2_col[k] = s2sim;
    ws.f_col[k] = est_.fhat[k] - std::sqrt(s2sim) * rp;
  }

  double inv = 0.0;
  double dir = 0.0;
  for (int k = 1; k <= n_ - 1; ++k) {
    inv += what_[k] / ws.m_col[k];
    dir += what_[k] * ws.m_col[k];
  }
  ws.ahat = 1.0 / std::sqrt(inv * dir);
}

double ScrEngine::scenario_inversion_adj(RngStream& rng,
                                         ScrWorkspace& ws) const {
  draw_inversion_into(rng, ws);

  for (int i = 1; i <= n_; ++i) {
    const int k = n_ - i + 1;
    double factor;
    if (k <= n_ - 1 && ws.s2_col[k] > 0.0) {
      factor = ws.f_col[k] +
               std::sqrt(ws.s2_col[k]) / latest_sqrt_w_[i - 1] *
                   rng.next_normal();
      if (factor <= 0.0) factor = 1.0;
    } else {
      factor = (k == n_) ? est_.fhat[k] : ws.f_col[k];
    }
    const double zmodel = (factor - 1.0) * latest_[i - 1];
    ws.z[i - 1] = (1.0 - ws.ahat) * zhat_[i - 1] + ws.ahat * zmodel;
  }
  return assemble_loss(ws);
}

InversionDraw ScrEngine::draw_inversion(RngStream& rng) const {
  ScrWorkspace ws;
  draw_inversion_into(rng, ws);
  InversionDraw d;
  d.rprime.assign(n_, 0.0);
  d.mprime.assign(n_, 1.0);
  d.fsim.assign(n_, 0.0);
  d.sigma2sim.assign(n_, 0.0);
  for (int k = 1; k <= n_ - 1; ++k) {
    d.rprime[k] = ws.r_col[k];
    d.mprime[k] = ws.m_col[k];
    d.fsim[k] = ws.f_col[k];
    d.sigma2sim[k] = ws.s2_col[k];
  }
  d.ahat = ws.ahat;
  return d;
}

double ScrEngine::realized_loss(const NextDiagonal& diag) const {
  if (static_cast<int>(diag.z.size()) != n_)
    throw std::invalid_argument("diagonal size does not match triangle");
  return reval_.loss(diag.z);
}

double ScrEngine::assemble_loss(ScrWorkspace& ws) const {
  return reval_.loss(ws.z);
}

ScrResult compute_scr(const Triangle& tri, Method method, Gamma gamma,
                      double alpha, long t, std::uint64_t seed, int workers) {
  if (t < 1) throw std::invalid_argument("scenario count must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must be in (0,1)");

  const ScrEngine engine(tri, gamma);
  std::vector<double> losses(t);

  int nw = workers > 0 ? workers
                       : static_cast<int>(std::thread::hardware_concurrency());
  if (nw < 1) nw = 1;
  if (static_cast<long>(nw) > t) nw = static_cast<int>(t);

  std::atomic<long> next{0};
  std::mutex err_mu;
  std::exception_ptr err;

  auto worker = [&] {
    ScrWorkspace ws;
    try {
      for (;;) {
        const long j = next.fetch_add(1);
        if (j >= t) break;
        RngStream rng(seed, static_cast<std::uint64_t>(j),
                      16 + method_index(method));
        losses[j] = engine.scenario(method, rng, ws);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mu);
      if (!err) err = std::current_exception();
      next.store(t);
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
  if (err) std::rethrow_exception(err);

  ScrResult res{method, alpha, 0.0, t, seed, engine.reserve0()};
  res.scr = empirical_quantile(std::move(losses), alpha);
  return res;
}

}  // namespace resrisk
