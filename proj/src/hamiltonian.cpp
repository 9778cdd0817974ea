#include "rmhmc/hamiltonian.hpp"

#include <cmath>

namespace rmhmc {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw UnstableRegionError(std::string("non-finite ") + what);
}

}  // namespace

HamiltonianEval Hamiltonian::evaluate(const Vector& q, const Vector& p, DerivCounter* counter) const {
  require_finite(q, "position");
  require_finite(p, "momentum");
  HamiltonianEval h;
  h.potential = -model_.log_prob(q);
  if (!std::isfinite(h.potential)) throw UnstableRegionError(model_.name() + ": non-finite log density");

  const double d = static_cast<double>(dim());
  if (separable()) {
    if (counter) ++counter->metric_evals;
    const MetricEval& m = spec_.constant();
    h.log_det_term = 0.5 * (d * kLog2Pi + m.log_det);
    h.kinetic = 0.5 * quad_form_inv(m, p);
  } else {
    const MetricEval m = rmhmc::evaluate(spec_, model_, q, counter);
    h.log_det_term = 0.5 * (d * kLog2Pi + m.log_det);
    h.kinetic = 0.5 * quad_form_inv(m, p);
  }
  h.value = h.potential + h.log_det_term + h.kinetic;
  if (!std::isfinite(h.value)) throw UnstableRegionError("non-finite Hamiltonian");
  return h;
}

Vector Hamiltonian::dh_dp(const Vector& q, const Vector& p, DerivCounter* counter) const {
  if (counter) ++counter->dp_evals;
  Vector v = separable() ? solve(spec_.constant(), p) : solve(rmhmc::evaluate(spec_, model_, q, counter), p);
  if (separable() && counter) ++counter->metric_evals;
  require_finite(v, "dH/dp");
  return v;
}

Vector Hamiltonian::dh_dq(const Vector& q, const Vector& p, DerivCounter* counter) const {
  if (counter) {
    ++counter->dq_evals;
    ++counter->grad_calls;
  }
  Vector g = -model_.grad_log_prob(q);
  if (separable()) {
    require_finite(g, "dH/dq");
    return g;
  }

  const MetricEval m = rmhmc::evaluate(spec_, model_, q, counter);
  const MetricDerivative dg = metric_derivative(spec_, model_, q, counter);
  const Vector v = solve(m, p);
  // Both factors are symmetric, so tr(G^{-1} dG) is the sum of their elementwise product.
  const Matrix g_inv = m.eigvecs * m.eigvals.cwiseInverse().asDiagonal() * m.eigvecs.transpose();
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const Matrix& partial = dg.partials[static_cast<std::size_t>(i)];
    const double trace = (g_inv.array() * partial.array()).sum();
    g[i] += 0.5 * trace - 0.5 * v.dot(partial * v);
  }
  require_finite(g, "dH/dq");
  return g;
}

}  // namespace rmhmc
