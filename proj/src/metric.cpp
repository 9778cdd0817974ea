#include "rmhmc/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace rmhmc {

namespace {

// Below this |alpha * lambda| the two-term series is exact to double precision.
constexpr double kSoftAbsSeriesCutoff = 1e-4;

}  // namespace

MetricSpec MetricSpec::euclidean(const Matrix& mass) {
  if (mass.rows() == 0 || mass.rows() != mass.cols()) throw ConfigError("euclidean metric: mass must be square");
  if (!mass.allFinite() || !mass.isApprox(mass.transpose(), 1e-12)) {
    throw ConfigError("euclidean metric: mass must be finite and symmetric");
  }
  MetricSpec spec;
  spec.kind_ = Kind::euclidean;
  try {
    spec.constant_ = std::make_shared<const MetricEval>(make_metric_eval(mass, Vector()));
  } catch (const UnstableRegionError&) {
    throw ConfigError("euclidean metric: mass must be positive definite");
  }
  return spec;
}

MetricSpec MetricSpec::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return euclidean(Matrix::Identity(d, d));
}

MetricSpec MetricSpec::softabs(double alpha, double fd_step) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("softabs metric: alpha must be > 0");
  if (!(fd_step > 0.0)) throw ConfigError("softabs metric: fd_step must be > 0");
  MetricSpec spec;
  spec.kind_ = Kind::neg_hessian_softabs;
  spec.alpha_ = alpha;
  spec.fd_step_ = fd_step;
  return spec;
}

const MetricEval& MetricSpec::constant() const {
  if (!constant_) throw std::logic_error("metric spec is position dependent");
  return *constant_;
}

MetricSpec& MetricSpec::with_analytic_derivative(MetricDerivativeFn fn) {
  analytic_derivative_ = std::move(fn);
  return *this;
}

double softabs(double lambda, double alpha) {
  const double x = alpha * lambda;
  if (std::abs(x) < kSoftAbsSeriesCutoff) return 1.0 / alpha + alpha * lambda * lambda / 3.0;
  return lambda / std::tanh(x);
}

void symmetric_eigen(const Matrix& a, Vector& eigvals, Matrix& eigvecs) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw UnstableRegionError("eigendecomposition failed");
  eigvals = solver.eigenvalues();
  eigvecs = solver.eigenvectors();
  for (Eigen::Index k = 0; k < eigvecs.cols(); ++k) {
    Eigen::Index arg = 0;
    eigvecs.col(k).cwiseAbs().maxCoeff(&arg);
    if (eigvecs(arg, k) < 0.0) eigvecs.col(k) = -eigvecs.col(k);
  }
}

MetricEval make_metric_eval(const Matrix& g, const Vector& position) {
  if (!g.allFinite()) throw UnstableRegionError("metric has non-finite entries");
  MetricEval eval;
  symmetric_eigen(g, eval.eigvals, eval.eigvecs);
  if (!(eval.eigvals.minCoeff() > 0.0)) throw UnstableRegionError("metric is not positive definite");
  eval.g = g;
  eval.log_det = eval.eigvals.array().log().sum();
  eval.position = position;
  return eval;
}

MetricEval evaluate(const MetricSpec& spec, const TargetModel& model, const Vector& w, DerivCounter* counter) {
  if (counter) ++counter->metric_evals;
  if (!spec.position_dependent()) {
    MetricEval eval = spec.constant();
    eval.position = w;
    return eval;
  }

  if (counter) ++counter->hessian_calls;
  const Matrix neg_hessian = -model.hessian_log_prob(w);
  if (!neg_hessian.allFinite()) throw UnstableRegionError(model.name() + ": non-finite Hessian");

  MetricEval eval;
  symmetric_eigen(neg_hessian, eval.eigvals, eval.eigvecs);
  const double alpha = spec.alpha();
  for (Eigen::Index k = 0; k < eval.eigvals.size(); ++k) eval.eigvals[k] = softabs(eval.eigvals[k], alpha);
  eval.g = eval.eigvecs * eval.eigvals.asDiagonal() * eval.eigvecs.transpose();
  eval.log_det = eval.eigvals.array().log().sum();
  eval.position = w;
  if (!eval.g.allFinite() || !std::isfinite(eval.log_det)) throw UnstableRegionError("non-finite SoftAbs metric");
  return eval;
}

MetricDerivative metric_derivative(const MetricSpec& spec, const TargetModel& model, const Vector& w,
                                   DerivCounter* counter) {
  if (!spec.position_dependent()) throw std::logic_error("euclidean metric is not position dependent");
  if (counter) ++counter->metric_derivative_evals;
  if (spec.analytic_derivative()) {
    MetricDerivative d = spec.analytic_derivative()(model, w);
    d.method = MetricDerivative::Method::analytic;
    d.step = 0.0;
    return d;
  }

  const double h = spec.fd_step();
  const auto n = w.size();
  MetricDerivative d;
  d.method = MetricDerivative::Method::finite_difference;
  d.step = h;
  d.partials.reserve(static_cast<std::size_t>(n));
  Vector shifted = w;
  for (Eigen::Index i = 0; i < n; ++i) {
    shifted[i] = w[i] + h;
    const Matrix plus = evaluate(spec, model, shifted).g;
    shifted[i] = w[i] - h;
    const Matrix minus = evaluate(spec, model, shifted).g;
    shifted[i] = w[i];
    Matrix partial = (plus - minus) / (2.0 * h);
    d.partials.emplace_back(0.5 * (partial + partial.transpose()));
  }
  if (counter) counter->hessian_calls += 2 * static_cast<std::uint64_t>(n);
  return d;
}

Vector sample_momentum(const MetricEval& eval, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(eval.eigvals.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
  return eval.eigvecs * (eval.eigvals.array().sqrt() * z.array()).matrix();
}

double quad_form_inv(const MetricEval& eval, const Vector& p) {
  const Vector y = eval.eigvecs.transpose() * p;
  return (y.array().square() / eval.eigvals.array()).sum();
}

Vector solve(const MetricEval& eval, const Vector& p) {
  const Vector y = eval.eigvecs.transpose() * p;
  return eval.eigvecs * (y.array() / eval.eigvals.array()).matrix();
}

}  // namespace rmhmc
