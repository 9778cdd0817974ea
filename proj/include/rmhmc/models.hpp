#pragma once

#include "rmhmc/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace rmhmc {

/// Target distribution f(w): log-density and its first two derivatives.
///
/// All densities keep their normalizing constants. Evaluations are pure and
/// may be called concurrently.
class TargetModel {
 public:
  virtual ~TargetModel() = default;

  virtual std::size_t dim() const = 0;
  virtual std::string name() const = 0;

  virtual double log_prob(const Vector& w) const = 0;
  virtual Vector grad_log_prob(const Vector& w) const = 0;
  virtual Matrix hessian_log_prob(const Vector& w) const = 0;
};

/// Independent Gaussian with per-coordinate means and variances.
class GaussianModel final : public TargetModel {
 public:
  GaussianModel(Vector mean, Vector variances);

  static GaussianModel standard(std::size_t dim);

  std::size_t dim() const override { return static_cast<std::size_t>(mean_.size()); }
  std::string name() const override { return "gaussian"; }

  double log_prob(const Vector& w) const override;
  Vector grad_log_prob(const Vector& w) const override;
  Matrix hessian_log_prob(const Vector& w) const override;

  const Vector& mean() const { return mean_; }
  const Vector& variances() const { return variances_; }

 private:
  Vector mean_;
  Vector variances_;
};

/// Neal's funnel: v ~ N(0, 9), x_i | v ~ N(0, exp(-v)).
/// Coordinate 0 is v, coordinates 1..n_latent are the x_i.
class FunnelModel final : public TargetModel {
 public:
  static constexpr double kVVariance = 9.0;

  explicit FunnelModel(std::size_t n_latent = 10);

  std::size_t dim() const override { return n_latent_ + 1; }
  std::string name() const override { return "funnel"; }
  std::size_t n_latent() const { return n_latent_; }

  double log_prob(const Vector& w) const override;
  Vector grad_log_prob(const Vector& w) const override;
  Matrix hessian_log_prob(const Vector& w) const override;

 private:
  std::size_t n_latent_;
};

/// Bayesian logistic regression with an isotropic Gaussian prior of
/// precision beta. Column 0 of the design matrix is the constant 1, so
/// w[0] is the bias.
class LogRegModel final : public TargetModel {
 public:
  LogRegModel(Matrix features, Vector labels, double beta);

  std::size_t dim() const override { return static_cast<std::size_t>(features_.cols()); }
  std::string name() const override { return "logreg"; }

  double log_prob(const Vector& w) const override;
  Vector grad_log_prob(const Vector& w) const override;
  Matrix hessian_log_prob(const Vector& w) const override;

  std::size_t n_data() const { return static_cast<std::size_t>(features_.rows()); }
  const Matrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }
  double beta() const { return beta_; }

  LogRegModel with_beta(double beta) const { return LogRegModel(features_, labels_, beta); }

 private:
  Matrix features_;
  Vector labels_;
  double beta_;
};

struct SyntheticLogReg {
  LogRegModel model;
  Vector true_weights;  // the single draw from N(mean, cov) that generated y
};

struct LogRegDataOptions {
  double beta = 0.2;
  double feature_scale = 1.0;  // std-dev of the normal non-bias features
};

/// Draws true weights ~ N(mean, cov) once, standard normal features with a
/// leading bias column, and labels y_i ~ Bernoulli(sigmoid(w^T x_i)).
/// Deterministic in `seed`. Throws ConfigError if cov is not SPD.
SyntheticLogReg generate_logreg_data(const Vector& mean, const Matrix& cov, std::size_t n,
                                     std::uint64_t seed, const LogRegDataOptions& options = {});

/// CSV with header `y,x0,x1,...`; values written with round-trip precision.
void write_logreg_csv(std::ostream& out, const LogRegModel& model);
LogRegModel read_logreg_csv(std::istream& in, double beta);

double log_sigmoid(double z);
double sigmoid(double z);

}  // namespace rmhmc
