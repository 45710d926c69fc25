#pragma once

#include <cstdint>
#include <vector>

#include "resrisk/rng.hpp"

namespace resrisk {

// Normal model with known mean 0: sigma2hat = (1/n) sum X_i^2, so
// n * sigma2hat / sigma^2 ~ chi^2(n). The fiducial distribution of the
// modelled parameter inverts that relation: sigma2_sim = n * sigma2hat / M',
// with M' an independent chi^2(n) draw (sum of n squared standard normals).

double chi2_sum_of_squares(int n, RngStream& rng);

double sample_sigma2_fiducial(int n, double sigma2hat, RngStream& rng);

// Empirical alpha-quantile over t Monte-Carlo scenarios of
// sqrt(sigma2_sim) * Z'.
double scr_fiducial(int n, double sigma2hat, double alpha, long t,
                    RngStream& rng);

// Closed form of the same quantity: sqrt(sigma2hat) * t_n-quantile(alpha).
double scr_fiducial_analytic(int n, double sigma2hat, double alpha);

// Comparison variants: "theoretical perspective" models sigma2_sim =
// sigma2hat * M'/n (the sampling distribution of the estimator); "plug-in"
// ignores parameter uncertainty entirely.
double scr_theoretical(int n, double sigma2hat, double alpha, long t,
                       RngStream& rng);
double scr_plugin(double sigma2hat, double alpha);

struct FiducialCoverageRow {
  double alpha = 0.0;
  long s = 0;
  long hits_fiducial = 0;
  long hits_theoretical = 0;
  long hits_plugin = 0;

  double coverage_fiducial() const { return double(hits_fiducial) / double(s); }
  double coverage_theoretical() const {
    return double(hits_theoretical) / double(s);
  }
  double coverage_plugin() const { return double(hits_plugin) / double(s); }
};

// s replicates of: draw n data points from N(0, sigma_true^2), estimate
// sigma2hat, compute each variant's SCR (t scenarios for the Monte-Carlo
// variants), draw the true X ~ N(0, sigma_true^2) and record X <= SCR.
// Replicate r uses substreams (seed, r, 0..2); results are independent of
// the worker count.
std::vector<FiducialCoverageRow> coverage_experiment(
    double sigma_true, int n, const std::vector<double>& alphas, long s,
    long t, std::uint64_t seed, int workers = 0);

// Density pair of the two perspectives on the pivot M ~ chi^2(n):
// density_A is the chi^2(n) density, density_B the density of 1/M, so
// density_B(x) = x^-2 * density_A(1/x).
double density_A(double x, int n);
double density_B(double x, int n);

}  // namespace resrisk
