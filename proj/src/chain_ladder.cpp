#include "resrisk/chain_ladder.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace resrisk {

Gamma gamma_from_int(int value) {
  if (value == 0) return Gamma::g0;
  if (value == 1) return Gamma::g1;
  throw std::invalid_argument("gamma must be 0 or 1");
}

DevFactorEstimates estimate(const Triangle& tri, Gamma gamma) {
  const int n = tri.horizon();
  const auto ratios = dev_ratios(tri);

  DevFactorEstimates est;
  est.gamma = gamma;
  est.fhat.assign(n + 1, 0.0);
  est.sigma2hat.assign(n + 1, 0.0);

  for (int k = 1; k <= n; ++k) {
    double wsum = 0.0;
    double num = 0.0;
    for (int i = 0; i <= n - k; ++i) {
      const double c = tri.cell(i, k - 1);
      if (gamma == Gamma::g1 && c <= 0.0) {
        std::ostringstream msg;
        msg << "gamma = 1 needs positive cells, C(" << i << "," << (k - 1)
            << ") = " << c;
        throw TriangleError(msg.str(), i + 1, k);
      }
      const double w = gamma_weight(c, gamma);
      wsum += w;
      num += w * ratios[k - 1][i];
    }
    if (wsum <= 0.0) {
      std::ostringstream msg;
      msg << "zero weight sum in development column " << k;
      throw TriangleError(msg.str(), 0, k);
    }
    est.fhat[k] = num / wsum;

    if (k < n) {
      double ss = 0.0;
      for (int i = 0; i <= n - k; ++i) {
        const double w = gamma_weight(tri.cell(i, k - 1), gamma);
        const double d = ratios[k - 1][i] - est.fhat[k];
        ss += w * d * d;
      }
      est.sigma2hat[k] = ss / (n - k);
    }
  }
  return est;
}

Reserves reserve_t0(const Triangle& tri, const DevFactorEstimates& est) {
  const int n = tri.horizon();
  Reserves res;
  res.by_year.assign(n + 1, 0.0);

  double prod = 1.0;  // prod_{k=n-i+1}^{n} fhat_k, built from i = 0 upward
  for (int i = 1; i <= n; ++i) {
    prod *= est.fhat[n - i + 1];
    res.by_year[i] = tri.cell(i, n - i) * (prod - 1.0);
    res.total += res.by_year[i];
  }
  return res;
}

double reserve_t1(const ExtendedTriangle& ext, Gamma gamma) {
  const Triangle& tri = ext.base;
  const int n = tri.horizon();

  // Re-estimate every factor on the trapezoid: column k gains the single
  // new ratio from accident year n - k + 1.
  std::vector<double> fprime(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    double wsum = 0.0;
    double num = 0.0;
    for (int i = 0; i <= n - k; ++i) {
      const double w = gamma_weight(tri.cell(i, k - 1), gamma);
      wsum += w;
      num += w * tri.cell(i, k) / tri.cell(i, k - 1);
    }
    const int i_new = n - k + 1;
    const double c_prev = tri.cell(i_new, k - 1);
    const double w_new = gamma_weight(c_prev, gamma);
    wsum += w_new;
    num += w_new * ext.new_cumulative[i_new - 1] / c_prev;
    fprime[k] = num / wsum;
  }

  double total = 0.0;
  double prod = 1.0;  // prod_{k=n-i+2}^{n} fprime_k
  for (int i = 2; i <= n; ++i) {
    prod *= fprime[n - i + 2];
    total += ext.new_cumulative[i - 1] * (prod - 1.0);
  }
  return total;
}

double cdr_loss(const Triangle& tri, const DevFactorEstimates& est,
                const NextDiagonal& diag) {
  double zsum = 0.0;
  for (double z : diag.z) zsum += z;
  const auto ext = extend(tri, diag);
  return zsum + reserve_t1(ext, est.gamma) - reserve_t0(tri, est).total;
}

OneYearReval::OneYearReval(const Triangle& tri, const DevFactorEstimates& est)
    : n_(tri.horizon()) {
  base_num_.assign(n_ + 1, 0.0);
  base_den_.assign(n_ + 1, 0.0);
  for (int k = 1; k <= n_; ++k) {
    for (int i = 0; i <= n_ - k; ++i) {
      const double w = gamma_weight(tri.cell(i, k - 1), est.gamma);
      base_den_[k] += w;
      base_num_[k] += w * tri.cell(i, k) / tri.cell(i, k - 1);
    }
  }
  latest_.resize(n_);
  latest_w_.resize(n_);
  for (int i = 1; i <= n_; ++i) {
    latest_[i - 1] = tri.cell(i, n_ - i);
    latest_w_[i - 1] = gamma_weight(latest_[i - 1], est.gamma);
  }
  r0_ = reserve_t0(tri, est).total;
}

double OneYearReval::reserve1(const std::vector<double>& z) const {
  double r1 = 0.0;
  double prod = 1.0;
  for (int i = 2; i <= n_; ++i) {
    const int k = n_ - i + 2;  // column that gains accident year i - 1
    const double f_new = (latest_[i - 2] + z[i - 2]) / latest_[i - 2];
    const double fp = (base_num_[k] + latest_w_[i - 2] * f_new) /
                      (base_den_[k] + latest_w_[i - 2]);
    prod *= fp;
    r1 += (latest_[i - 1] + z[i - 1]) * (prod - 1.0);
  }
  return r1;
}

double OneYearReval::loss(const std::vector<double>& z) const {
  double zsum = 0.0;
  for (double v : z) zsum += v;
  return zsum + reserve1(z) - r0_;
}

}  // namespace resrisk
