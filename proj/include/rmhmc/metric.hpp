#pragma once

#include "rmhmc/counters.hpp"
#include "rmhmc/models.hpp"
#include "rmhmc/types.hpp"

#include <functional>
#include <memory>
#include <random>
#include <vector>

namespace rmhmc {

/// G(w) factorized as Q diag(eigvals) Q^T. Immutable once built.
struct MetricEval {
  Matrix g;
  Vector eigvals;
  Matrix eigvecs;
  double log_det = 0.0;
  Vector position;

  std::size_t dim() const { return static_cast<std::size_t>(g.rows()); }
};

struct MetricDerivative {
  enum class Method { analytic, finite_difference };

  std::vector<Matrix> partials;  // partials[i] = dG/dw_i
  Method method = Method::finite_difference;
  double step = 0.0;             // finite-difference step, 0 for analytic
};

using MetricDerivativeFn = std::function<MetricDerivative(const TargetModel&, const Vector&)>;

/// Either a constant SPD mass matrix, or the SoftAbs-regularized negative
/// Hessian of the log-density.
class MetricSpec {
 public:
  enum class Kind { euclidean, neg_hessian_softabs };

  static MetricSpec euclidean(const Matrix& mass);
  static MetricSpec identity(std::size_t dim);
  static MetricSpec softabs(double alpha = 1e6, double fd_step = 1e-5);

  Kind kind() const { return kind_; }
  bool position_dependent() const { return kind_ == Kind::neg_hessian_softabs; }
  double alpha() const { return alpha_; }
  double fd_step() const { return fd_step_; }

  /// Precomputed factorization of M; only valid for euclidean specs.
  const MetricEval& constant() const;

  /// Replaces the finite-difference dG/dw with a model-specific formula.
  MetricSpec& with_analytic_derivative(MetricDerivativeFn fn);
  const MetricDerivativeFn& analytic_derivative() const { return analytic_derivative_; }

 private:
  MetricSpec() = default;

  Kind kind_ = Kind::euclidean;
  double alpha_ = 1e6;
  double fd_step_ = 1e-5;
  std::shared_ptr<const MetricEval> constant_;
  MetricDerivativeFn analytic_derivative_;
};

/// lambda * coth(alpha * lambda), with the limit 1/alpha + alpha lambda^2 / 3
/// near zero.
double softabs(double lambda, double alpha);

/// Eigendecomposes a symmetric matrix with a deterministic sign convention:
/// the largest-magnitude entry of every eigenvector is positive.
void symmetric_eigen(const Matrix& a, Vector& eigvals, Matrix& eigvecs);

/// Factorizes an SPD matrix. Throws UnstableRegionError if it is not.
MetricEval make_metric_eval(const Matrix& g, const Vector& position);

MetricEval evaluate(const MetricSpec& spec, const TargetModel& model, const Vector& w,
                    DerivCounter* counter = nullptr);

/// dG/dw_i for every coordinate. Throws std::logic_error for euclidean specs.
MetricDerivative metric_derivative(const MetricSpec& spec, const TargetModel& model, const Vector& w,
                                   DerivCounter* counter = nullptr);

/// p = Q diag(sqrt(eigvals)) z with z ~ N(0, I), so Cov[p] = G.
Vector sample_momentum(const MetricEval& eval, std::mt19937_64& rng);

/// p^T G^{-1} p through the eigendecomposition.
double quad_form_inv(const MetricEval& eval, const Vector& p);

/// G^{-1} p through the eigendecomposition.
Vector solve(const MetricEval& eval, const Vector& p);

}  // namespace rmhmc
