#include "rmhmc/models.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

namespace rmhmc {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // ln(2*pi)

void check_dim(const TargetModel& model, const Vector& w) {
  if (static_cast<std::size_t>(w.size()) != model.dim()) {
    throw std::invalid_argument(model.name() + ": position has dimension " + std::to_string(w.size()) +
                                ", expected " + std::to_string(model.dim()));
  }
}

}  // namespace

double log_sigmoid(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------- Gaussian

GaussianModel::GaussianModel(Vector mean, Vector variances)
    : mean_(std::move(mean)), variances_(std::move(variances)) {
  if (mean_.size() == 0) throw ConfigError("gaussian: dimension must be positive");
  if (mean_.size() != variances_.size()) throw ConfigError("gaussian: mean/variance size mismatch");
  if ((variances_.array() <= 0.0).any()) throw ConfigError("gaussian: variances must be positive");
}

GaussianModel GaussianModel::standard(std::size_t dim) {
  return GaussianModel(Vector::Zero(static_cast<Eigen::Index>(dim)), Vector::Ones(static_cast<Eigen::Index>(dim)));
}

double GaussianModel::log_prob(const Vector& w) const {
  check_dim(*this, w);
  const auto d = (w - mean_).array();
  return -0.5 * (d.square() / variances_.array()).sum() - 0.5 * variances_.array().log().sum() -
         0.5 * static_cast<double>(dim()) * kLog2Pi;
}

Vector GaussianModel::grad_log_prob(const Vector& w) const {
  check_dim(*this, w);
  return -((w - mean_).array() / variances_.array()).matrix();
}

Matrix GaussianModel::hessian_log_prob(const Vector& w) const {
  check_dim(*this, w);
  return (-variances_.array().inverse()).matrix().asDiagonal();
}

// ---------------------------------------------------------------- Funnel
//
// log f = sum_i [ -ln(2 pi)/2 + v/2 - x_i^2 e^v / 2 ] - ln(2 pi 9)/2 - v^2/18

FunnelModel::FunnelModel(std::size_t n_latent) : n_latent_(n_latent) {
  if (n_latent == 0) throw ConfigError("funnel: n_latent must be positive");
}

double FunnelModel::log_prob(const Vector& w) const {
  check_dim(*this, w);
  const double v = w[0];
  const double n = static_cast<double>(n_latent_);
  const double sq = w.tail(static_cast<Eigen::Index>(n_latent_)).squaredNorm();
  return -0.5 * n * kLog2Pi + 0.5 * n * v - 0.5 * sq * std::exp(v) -
         0.5 * (kLog2Pi + std::log(kVVariance)) - 0.5 * v * v / kVVariance;
}

Vector FunnelModel::grad_log_prob(const Vector& w) const {
  check_dim(*this, w);
  const double v = w[0];
  const double ev = std::exp(v);
  const auto x = w.tail(static_cast<Eigen::Index>(n_latent_));
  Vector g(w.size());
  g[0] = 0.5 * static_cast<double>(n_latent_) - 0.5 * x.squaredNorm() * ev - v / kVVariance;
  g.tail(static_cast<Eigen::Index>(n_latent_)) = -ev * x;
  return g;
}

Matrix FunnelModel::hessian_log_prob(const Vector& w) const {
  check_dim(*this, w);
  const double v = w[0];
  const double ev = std::exp(v);
  const auto n = static_cast<Eigen::Index>(n_latent_);
  const auto x = w.tail(n);
  Matrix h = Matrix::Zero(w.size(), w.size());
  h(0, 0) = -0.5 * x.squaredNorm() * ev - 1.0 / kVVariance;
  h.block(1, 0, n, 1) = -ev * x;
  h.block(0, 1, 1, n) = (-ev * x).transpose();
  h.diagonal().tail(n).setConstant(-ev);
  return h;
}

// ---------------------------------------------------------------- LogReg
//
// log f = sum_i [ y_i log s(w^T x_i) + (1 - y_i) log(1 - s(w^T x_i)) ] - beta/2 w^T w

LogRegModel::LogRegModel(Matrix features, Vector labels, double beta)
    : features_(std::move(features)), labels_(std::move(labels)), beta_(beta) {
  if (features_.cols() == 0) throw ConfigError("logreg: need at least the bias column");
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw ConfigError("logreg: beta must be > 0");
  if (labels_.size() != features_.rows()) throw ConfigError("logreg: label count does not match rows");
  for (Eigen::Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 0.0 && labels_[i] != 1.0) throw ConfigError("logreg: labels must be 0 or 1");
    if (features_(i, 0) != 1.0) throw ConfigError("logreg: first feature column must be 1");
  }
}

double LogRegModel::log_prob(const Vector& w) const {
  check_dim(*this, w);
  double lp = -0.5 * beta_ * w.squaredNorm();
  if (features_.rows() == 0) return lp;
  const Vector z = features_ * w;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    lp += labels_[i] == 1.0 ? log_sigmoid(z[i]) : log_sigmoid(-z[i]);
  }
  return lp;
}

Vector LogRegModel::grad_log_prob(const Vector& w) const {
  check_dim(*this, w);
  Vector g = -beta_ * w;
  if (features_.rows() == 0) return g;
  const Vector z = features_ * w;
  const Vector resid = labels_ - z.unaryExpr([](double t) { return sigmoid(t); });
  g.noalias() += features_.transpose() * resid;
  return g;
}

Matrix LogRegModel::hessian_log_prob(const Vector& w) const {
  check_dim(*this, w);
  Matrix h = -beta_ * Matrix::Identity(w.size(), w.size());
  if (features_.rows() == 0) return h;
  const Vector z = features_ * w;
  const Vector s = z.unaryExpr([](double t) {
    const double sg = sigmoid(t);
    return sg * (1.0 - sg);
  });
  h.noalias() -= features_.transpose() * s.asDiagonal() * features_;
  return h;
}

SyntheticLogReg generate_logreg_data(const Vector& mean, const Matrix& cov, std::size_t n,
                                     std::uint64_t seed, const LogRegDataOptions& options) {
  const Eigen::Index d = mean.size();
  if (d == 0) throw ConfigError("generate_logreg_data: empty mean");
  if (cov.rows() != d || cov.cols() != d) throw ConfigError("generate_logreg_data: covariance shape mismatch");
  if (!cov.isApprox(cov.transpose(), 1e-12)) throw ConfigError("generate_logreg_data: covariance not symmetric");
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw ConfigError("generate_logreg_data: covariance not positive definite");
  if (!(options.feature_scale > 0.0)) throw ConfigError("generate_logreg_data: feature_scale must be > 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Vector z(d);
  for (Eigen::Index j = 0; j < d; ++j) z[j] = normal(rng);
  const Vector truth = mean + llt.matrixL() * z;

  const auto rows = static_cast<Eigen::Index>(n);
  Matrix x(rows, d);
  Vector y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    x(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < d; ++j) x(i, j) = options.feature_scale * normal(rng);
    y[i] = uniform(rng) < sigmoid(x.row(i).dot(truth)) ? 1.0 : 0.0;
  }
  return {LogRegModel(std::move(x), std::move(y), options.beta), truth};
}

void write_logreg_csv(std::ostream& out, const LogRegModel& model) {
  const auto& x = model.features();
  out << "y";
  for (Eigen::Index j = 0; j < x.cols(); ++j) out << ",x" << j;
  out << '\n';
  out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out << static_cast<int>(model.labels()[i]);
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << ',' << x(i, j);
    out << '\n';
  }
}

LogRegModel read_logreg_csv(std::istream& in, double beta) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("logreg csv: missing header");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header[0] != "y") throw ConfigError("logreg csv: header must be y,x0,...");
  for (std::size_t j = 1; j < header.size(); ++j) {
    if (header[j] != "x" + std::to_string(j - 1)) throw ConfigError("logreg csv: bad column " + header[j]);
  }
  const std::size_t d = header.size() - 1;
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t cols = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("logreg csv: bad number '" + cell + "'");
      }
      ++cols;
    }
    if (cols != d + 1) throw ConfigError("logreg csv: row " + std::to_string(rows + 1) + " has wrong width");
    ++rows;
  }
  Matrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d));
  Vector y(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    y[static_cast<Eigen::Index>(i)] = values[i * (d + 1)];
    for (std::size_t j = 0; j < d; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * (d + 1) + 1 + j];
    }
  }
  return LogRegModel(std::move(x), std::move(y), beta);
}

}  // namespace rmhmc
