#pragma once

namespace resrisk {

// Standard normal CDF and its inverse (accurate to ~1e-14).
double normal_cdf(double x);
double inverse_normal_cdf(double p);

// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

// Student-t distribution with dof degrees of freedom.
double student_t_cdf(double x, int dof);
double student_t_quantile(double p, int dof);

// chi-square density with dof degrees of freedom, x > 0.
double chi2_pdf(double x, int dof);

}  // namespace resrisk
