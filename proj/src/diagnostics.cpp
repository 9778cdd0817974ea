#include "rmhmc/diagnostics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rmhmc {

namespace {

struct Centered {
  std::vector<double> values;
  double sum_sq = 0.0;
};

Centered center(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  Centered c;
  c.values.reserve(x.size());
  for (double v : x) {
    c.values.push_back(v - mean);
    c.sum_sq += (v - mean) * (v - mean);
  }
  if (!(c.sum_sq > 0.0) || !std::isfinite(c.sum_sq)) throw std::domain_error("series has zero or undefined variance");
  return c;
}

double lag_product(const std::vector<double>& c, std::size_t k) {
  double s = 0.0;
  for (std::size_t t = 0; t + k < c.size(); ++t) s += c[t] * c[t + k];
  return s;
}

}  // namespace

AcfResult autocorrelation(std::span<const double> x, int max_lag) {
  if (max_lag < 1 || static_cast<std::size_t>(max_lag) >= x.size()) {
    throw std::invalid_argument("autocorrelation: need size > max_lag >= 1");
  }
  const Centered c = center(x);
  AcfResult r;
  r.lags.resize(static_cast<std::size_t>(max_lag) + 1);
  r.acf.resize(r.lags.size());
  for (std::size_t k = 0; k < r.lags.size(); ++k) {
    r.lags[k] = static_cast<int>(k);
    r.acf[k] = k == 0 ? 1.0 : lag_product(c.values, k) / c.sum_sq;
  }
  return r;
}

double gaussian_kl(double mu_p, double var_p, double mu_q, double var_q) {
  return 0.5 * std::log(var_q / var_p) + (var_p + (mu_p - mu_q) * (mu_p - mu_q)) / (2.0 * var_q) - 0.5;
}

KlReport kl_to_gaussian(std::span<const double> samples, double true_mean, double true_var) {
  if (!(true_var > 0.0)) throw std::invalid_argument("kl_to_gaussian: true variance must be > 0");
  if (samples.size() < 2) throw std::domain_error("kl_to_gaussian: need at least two samples");
  const double n = static_cast<double>(samples.size());
  KlReport r;
  r.sample_mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : samples) ss += (v - r.sample_mean) * (v - r.sample_mean);
  r.sample_var = ss / n;
  if (!(r.sample_var > 0.0) || !std::isfinite(r.sample_var)) {
    throw std::domain_error("kl_to_gaussian: degenerate samples");
  }
  r.kl = std::max(0.0, gaussian_kl(true_mean, true_var, r.sample_mean, r.sample_var));
  return r;
}

double effective_sample_size(std::span<const double> x) {
  if (x.size() < 10) throw std::invalid_argument("effective_sample_size: need at least 10 points");
  const Centered c = center(x);
  const std::size_t n = x.size();
  auto rho = [&](std::size_t k) { return lag_product(c.values, k) / c.sum_sq; };

  // Gamma_m = rho_{2m} + rho_{2m+1}; stop at the first non-positive pair.
  double sum_pairs = 0.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double gamma = (m == 0 ? 1.0 : rho(2 * m)) + rho(2 * m + 1);
    if (gamma <= 0.0) break;
    sum_pairs += gamma;
  }
  // 1 + 2 sum_{k>=1} rho_k = 2 sum_m Gamma_m - 1, floored so that
  // anti-correlated chains report at most N log10(N).
  const double nd = static_cast<double>(n);
  const double tau = std::max(2.0 * sum_pairs - 1.0, 1.0 / std::log10(nd));
  return nd / tau;
}

std::vector<double> column(const Matrix& samples, Eigen::Index j) {
  std::vector<double> out(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index i = 0; i < samples.rows(); ++i) out[static_cast<std::size_t>(i)] = samples(i, j);
  return out;
}

}  // namespace rmhmc
