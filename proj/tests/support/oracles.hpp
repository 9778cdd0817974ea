#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library beyond the model/Hamiltonian values being differentiated.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-5) {
  Vec g(x.size());
  Vec y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y[i] = x[i] + h;
    const double fp = f(y);
    y[i] = x[i] - h;
    const double fm = f(y);
    y[i] = x[i];
    g[i] = (fp - fm) / (2 * h);
  }
  return g;
}

inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h = 1e-5) {
  const Vec f0 = f(x);
  Mat j(f0.size(), x.size());
  Vec y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y[i] = x[i] + h;
    const Vec fp = f(y);
    y[i] = x[i] - h;
    const Vec fm = f(y);
    y[i] = x[i];
    j.col(i) = (fp - fm) / (2 * h);
  }
  return j;
}

/// Componentwise relative error with an absolute floor of 1 in the scale.
inline double rel_err(const Vec& got, const Vec& want) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    worst = std::max(worst, std::abs(got[i] - want[i]) / std::max(1.0, std::abs(want[i])));
  }
  return worst;
}

inline double rel_err(const Mat& got, const Mat& want) {
  return rel_err(Vec(Eigen::Map<const Vec>(got.data(), got.size())),
                 Vec(Eigen::Map<const Vec>(want.data(), want.size())));
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double normal_pdf(double x, double mu, double var) {
  return std::exp(-0.5 * (x - mu) * (x - mu) / var) / std::sqrt(2 * std::numbers::pi * var);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// KL(N(mu_p, var_p) || N(mu_q, var_q)) by quadrature of p log(p / q).
inline double kl_quadrature(double mu_p, double var_p, double mu_q, double var_q) {
  const double sd = std::sqrt(var_p);
  auto integrand = [&](double x) {
    const double p = normal_pdf(x, mu_p, var_p);
    if (p == 0.0) return 0.0;
    const double log_ratio = -0.5 * (x - mu_p) * (x - mu_p) / var_p + 0.5 * (x - mu_q) * (x - mu_q) / var_q -
                             0.5 * std::log(var_p / var_q);
    return p * log_ratio;
  };
  return simpson(integrand, mu_p - 14 * sd, mu_p + 14 * sd);
}

/// Two-sided one-sample Kolmogorov-Smirnov statistic against `cdf`.
inline double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
inline double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double t = (sn + 0.12 + 0.11 / sn) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * t * t);
  }
  return std::clamp(p, 0.0, 1.0);
}

/// Leapfrog on H = q^2 / 2 + p^2 / 2.
inline std::pair<double, double> oscillator_leapfrog(double q, double p, double eps) {
  p -= 0.5 * eps * q;
  q += eps * p;
  p -= 0.5 * eps * q;
  return {q, p};
}

inline std::vector<double> ar1(std::size_t n, double phi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<double> x(n);
  x[0] = z(rng) / std::sqrt(1 - phi * phi);
  for (std::size_t t = 1; t < n; ++t) x[t] = phi * x[t - 1] + z(rng);
  return x;
}

inline std::vector<double> iid_normal(std::size_t n, double mu, double sd, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(mu, sd);
  std::vector<double> x(n);
  for (auto& v : x) v = z(rng);
  return x;
}

inline Mat random_spd(Eigen::Index d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Mat a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = z(rng);
  return a * a.transpose() + 0.5 * Mat::Identity(d, d);
}

inline Vec random_vec(Eigen::Index d, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = u(rng);
  return v;
}

/// Random point with norm at most `radius`.
inline Vec random_in_ball(Eigen::Index d, double radius, std::mt19937_64& rng) {
  Vec v = random_vec(d, 1.0, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return v.normalized() * radius * u(rng);
}

}  // namespace oracle
