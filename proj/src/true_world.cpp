#include "resrisk/true_world.hpp"

#include <cmath>
#include <stdexcept>

namespace resrisk {

void TrueParams::validate() const {
  if (f.size() < 3)
    throw std::invalid_argument("true params need horizon n >= 2");
  if (sigma.size() != f.size())
    throw std::invalid_argument("f and sigma must have the same length");
  if (!(f0 > 0.0))
    throw std::invalid_argument("f0 must be positive");
  if (sigma0 < 0.0)
    throw std::invalid_argument("sigma0 must be nonnegative");
  const int n = horizon();
  for (int k = 1; k <= n; ++k) {
    if (!std::isfinite(f[k]) || !std::isfinite(sigma[k]))
      throw std::invalid_argument("true params must be finite");
    if (sigma[k] < 0.0)
      throw std::invalid_argument("sigma_k must be nonnegative");
  }
  if (f[n] != 1.0)
    throw std::invalid_argument("last development factor must be 1");
  if (sigma[n] != 0.0)
    throw std::invalid_argument("last sigma must be 0");
}

SimulatedTriangle simulate_triangle(const TrueParams& params, RngStream& rng) {
  params.validate();
  const int n = params.horizon();

  std::vector<std::vector<double>> rows(n + 1);
  SimulatedTriangle out;

  for (int i = 0; i <= n; ++i) {
    double c0 = params.f0 + params.sigma0 * rng.next_normal();
    while (c0 <= 0.0) {
      ++out.start_redraws;
      c0 = params.f0 + params.sigma0 * rng.next_normal();
    }
    rows[i].resize(n - i + 1);
    rows[i][0] = c0;
  }

  out.residues.by_column.resize(n);
  for (int k = 1; k <= n; ++k) {
    out.residues.by_column[k - 1].resize(n - k + 1);
    for (int i = 0; i <= n - k; ++i) {
      const double c = rows[i][k - 1];
      double zeta = 0.0;
      double factor = params.f[k];
      if (params.sigma[k] > 0.0) {
        const double scale =
            params.sigma[k] / std::sqrt(gamma_weight(c, params.gamma));
        zeta = rng.next_normal();
        factor = params.f[k] + scale * zeta;
        if (factor <= 0.0) {
          factor = 1.0;
          zeta = (1.0 - params.f[k]) / scale;
          ++out.factor_resets;
        }
      }
      out.residues.by_column[k - 1][i] = zeta;
      rows[i][k] = c * factor;
    }
  }

  out.tri = Triangle::from_rows(rows);
  return out;
}

SimulatedDiagonal simulate_next_diagonal(const Triangle& tri,
                                         const TrueParams& params,
                                         RngStream& rng) {
  const int n = tri.horizon();
  if (params.horizon() != n)
    throw std::invalid_argument("triangle and true params horizon mismatch");

  SimulatedDiagonal out;
  out.diag.z.resize(n);
  for (int i = 1; i <= n; ++i) {
    const int k = n - i + 1;
    const double c = tri.cell(i, n - i);
    double factor = params.f[k];
    if (params.sigma[k] > 0.0) {
      const double scale =
          params.sigma[k] / std::sqrt(gamma_weight(c, params.gamma));
      factor = params.f[k] + scale * rng.next_normal();
      if (factor <= 0.0) {
        factor = 1.0;
        ++out.factor_resets;
      }
    }
    out.diag.z[i - 1] = (factor - 1.0) * c;
  }
  return out;
}

}  // namespace resrisk
