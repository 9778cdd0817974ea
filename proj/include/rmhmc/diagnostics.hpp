#pragma once

#include "rmhmc/types.hpp"

#include <span>
#include <vector>

namespace rmhmc {

struct AcfResult {
  std::vector<int> lags;
  std::vector<double> acf;
};

/// Biased estimator acf[k] = sum_t (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2
/// for k = 0..max_lag. Requires size > max_lag >= 1; throws std::domain_error
/// for a constant series.
AcfResult autocorrelation(std::span<const double> x, int max_lag);

struct KlReport {
  double sample_mean = 0.0;
  double sample_var = 0.0;
  double kl = 0.0;
};

/// KL(p || q) for p = N(true_mean, true_var) and q the Gaussian with the
/// samples' mean and (1/N) variance.
KlReport kl_to_gaussian(std::span<const double> samples, double true_mean, double true_var);

/// Closed-form KL(N(mu_p, var_p) || N(mu_q, var_q)).
double gaussian_kl(double mu_p, double var_p, double mu_q, double var_q);

/// N / (1 + 2 sum_k rho_k), summing Geyer's initial positive sequence of
/// paired autocorrelations. Requires at least 10 points.
double effective_sample_size(std::span<const double> x);

std::vector<double> column(const Matrix& samples, Eigen::Index j);

}  // namespace rmhmc
