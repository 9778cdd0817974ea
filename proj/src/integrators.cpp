#include "rmhmc/integrators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmhmc {

void StepConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("step: epsilon must be > 0");
  if (!(omega_bind >= 0.0) || !std::isfinite(omega_bind)) throw ConfigError("step: omega_bind must be >= 0");
  if (!(fp_threshold > 0.0)) throw ConfigError("step: fp_threshold must be > 0");
  if (fp_max_iters < 1) throw ConfigError("step: fp_max_iters must be >= 1");
}

namespace {

double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

void finish(StepReport* report, const DerivCounter& counter, bool diverged) {
  if (!report) return;
  report->counter += counter;
  report->diverged = report->diverged || diverged;
}

}  // namespace

PhasePoint leapfrog_step(const Hamiltonian& h, const PhasePoint& z, const StepConfig& cfg, StepReport* report) {
  if (!h.separable()) throw std::logic_error("leapfrog_step needs a separable Hamiltonian");
  DerivCounter c;
  PhasePoint out = z;
  try {
    out.p -= 0.5 * cfg.epsilon * h.dh_dq(out.q, out.p, &c);
    out.q += cfg.epsilon * h.dh_dp(out.q, out.p, &c);
    out.p -= 0.5 * cfg.epsilon * h.dh_dq(out.q, out.p, &c);
  } catch (const UnstableRegionError&) {
    finish(report, c, true);
    return out;
  }
  finish(report, c, !out.q.allFinite() || !out.p.allFinite());
  return out;
}

PhasePoint implicit_step(const Hamiltonian& h, const PhasePoint& z, const StepConfig& cfg, StepReport* report) {
  const double half = 0.5 * cfg.epsilon;
  DerivCounter c;
  PhasePoint out = z;
  bool exhausted = false;
  int p_iters = 0;
  int q_iters = 0;
  try {
    // p = p0 - e/2 dH/dq(q0, p)
    Vector p = z.p;
    double delta = std::numeric_limits<double>::infinity();
    while (delta > cfg.fp_threshold) {
      if (p_iters == cfg.fp_max_iters) {
        exhausted = true;
        break;
      }
      Vector next = z.p - half * h.dh_dq(z.q, p, &c);
      delta = max_abs_diff(p, next);
      p = std::move(next);
      ++p_iters;
    }

    // q = q0 + e/2 [dH/dp(q0, p) + dH/dp(q, p)]
    Vector q = z.q;
    delta = std::numeric_limits<double>::infinity();
    while (!exhausted && delta > cfg.fp_threshold) {
      if (q_iters == cfg.fp_max_iters) {
        exhausted = true;
        break;
      }
      Vector next = z.q + half * (h.dh_dp(z.q, p, &c) + h.dh_dp(q, p, &c));
      delta = max_abs_diff(q, next);
      q = std::move(next);
      ++q_iters;
    }

    if (!exhausted) p -= half * h.dh_dq(q, p, &c);
    out = {std::move(q), std::move(p)};
  } catch (const UnstableRegionError&) {
    exhausted = true;
  }
  if (report) {
    report->momentum_iterations = p_iters;
    report->position_iterations = q_iters;
  }
  finish(report, c, exhausted || !out.q.allFinite() || !out.p.allFinite());
  return out;
}

Vector binding_rotation(const Vector& stacked, double epsilon, double omega) {
  if (stacked.size() % 2 != 0) throw std::invalid_argument("binding_rotation: length must be even");
  const Eigen::Index d = stacked.size() / 2;
  const double c = std::cos(2.0 * omega * epsilon);
  const double s = std::sin(2.0 * omega * epsilon);
  Vector out(stacked.size());
  out.head(d) = c * stacked.head(d) + s * stacked.tail(d);
  out.tail(d) = -s * stacked.head(d) + c * stacked.tail(d);
  return out;
}

AugmentedPhasePoint binding_flow(const AugmentedPhasePoint& z, double epsilon, double omega) {
  const Eigen::Index d = z.q.size();
  Vector diff(2 * d);
  diff << z.q - z.q_tilde, z.p - z.p_tilde;
  const Vector rotated = binding_rotation(diff, epsilon, omega);
  const Vector q_sum = z.q + z.q_tilde;
  const Vector p_sum = z.p + z.p_tilde;
  // All four outputs come from the same pre-rotation snapshot.
  return {0.5 * (q_sum + rotated.head(d)), 0.5 * (p_sum + rotated.tail(d)), 0.5 * (q_sum - rotated.head(d)),
          0.5 * (p_sum - rotated.tail(d))};
}

AugmentedPhasePoint explicit_step(const Hamiltonian& h, const AugmentedPhasePoint& z, const StepConfig& cfg,
                                  StepReport* report) {
  const double half = 0.5 * cfg.epsilon;
  DerivCounter c;
  AugmentedPhasePoint s = z;
  try {
    // H1 = H(q, p~): kicks p, drifts q~.
    s.p -= half * h.dh_dq(s.q, s.p_tilde, &c);
    s.q_tilde += half * h.dh_dp(s.q, s.p_tilde, &c);
    // H2 = H(q~, p): kicks p~, drifts q.
    s.p_tilde -= half * h.dh_dq(s.q_tilde, s.p, &c);
    s.q += half * h.dh_dp(s.q_tilde, s.p, &c);

    s = binding_flow(s, cfg.epsilon, cfg.omega_bind);

    s.p_tilde -= half * h.dh_dq(s.q_tilde, s.p, &c);
    s.q += half * h.dh_dp(s.q_tilde, s.p, &c);
    s.p -= half * h.dh_dq(s.q, s.p_tilde, &c);
    s.q_tilde += half * h.dh_dp(s.q, s.p_tilde, &c);
  } catch (const UnstableRegionError&) {
    finish(report, c, true);
    return s;
  }
  const bool bad = !s.q.allFinite() || !s.p.allFinite() || !s.q_tilde.allFinite() || !s.p_tilde.allFinite();
  finish(report, c, bad);
  return s;
}

namespace {

template <class State, class Step>
TrajectoryResult<State> integrate(const Hamiltonian& h, const State& start, const StepConfig& cfg, int n_steps,
                                  const TrajectoryOptions& options, Step step) {
  cfg.validate();
  TrajectoryResult<State> result;
  result.end = start;
  if (options.record_path) result.path.push_back(start);

  // For the augmented state the guard watches the (q, p) block.
  auto energy = [&](const State& s) { return h.value(s.q, s.p, &result.counter); };

  double h0 = 0.0;
  try {
    h0 = energy(start);
  } catch (const UnstableRegionError&) {
    result.diverged = true;
    return result;
  }

  for (int i = 0; i < n_steps; ++i) {
    StepReport report;
    State next = step(h, result.end, cfg, &report);
    result.counter += report.counter;
    if (options.record_reports) result.reports.push_back(report);
    if (report.diverged) {
      result.diverged = true;
      break;
    }
    result.end = std::move(next);
    ++result.steps_taken;
    if (options.record_path) result.path.push_back(result.end);
    try {
      if (std::abs(energy(result.end) - h0) > options.max_energy_error) {
        result.diverged = true;
        break;
      }
    } catch (const UnstableRegionError&) {
      result.diverged = true;
      break;
    }
  }
  return result;
}

}  // namespace

TrajectoryResult<PhasePoint> integrate_leapfrog(const Hamiltonian& h, const PhasePoint& start, const StepConfig& cfg,
                                                int n_steps, const TrajectoryOptions& options) {
  return integrate(h, start, cfg, n_steps, options, leapfrog_step);
}

TrajectoryResult<PhasePoint> integrate_implicit(const Hamiltonian& h, const PhasePoint& start, const StepConfig& cfg,
                                                int n_steps, const TrajectoryOptions& options) {
  return integrate(h, start, cfg, n_steps, options, implicit_step);
}

TrajectoryResult<AugmentedPhasePoint> integrate_explicit(const Hamiltonian& h, const AugmentedPhasePoint& start,
                                                         const StepConfig& cfg, int n_steps,
                                                         const TrajectoryOptions& options) {
  return integrate(h, start, cfg, n_steps, options, explicit_step);
}

Vector flatten(const PhasePoint& z) {
  Vector out(2 * z.q.size());
  out << z.q, z.p;
  return out;
}

Vector flatten(const AugmentedPhasePoint& z) {
  Vector out(4 * z.q.size());
  out << z.q, z.q_tilde, z.p, z.p_tilde;
  return out;
}

PhasePoint unflatten_phase(const Vector& flat) {
  const Eigen::Index d = flat.size() / 2;
  return {flat.head(d), flat.tail(d)};
}

AugmentedPhasePoint unflatten_augmented(const Vector& flat) {
  const Eigen::Index d = flat.size() / 4;
  return {flat.segment(0, d), flat.segment(2 * d, d), flat.segment(d, d), flat.segment(3 * d, d)};
}

FlatMap step_map(Integrator integrator, const Hamiltonian& h, const StepConfig& cfg) {
  switch (integrator) {
    case Integrator::leapfrog:
      return [&h, cfg](const Vector& z) { return flatten(leapfrog_step(h, unflatten_phase(z), cfg)); };
    case Integrator::implicit_leapfrog:
      return [&h, cfg](const Vector& z) { return flatten(implicit_step(h, unflatten_phase(z), cfg)); };
    case Integrator::explicit_leapfrog:
      return [&h, cfg](const Vector& z) { return flatten(explicit_step(h, unflatten_augmented(z), cfg)); };
  }
  throw std::invalid_argument("unknown integrator");
}

FlatMap binding_map(double epsilon, double omega) {
  return [epsilon, omega](const Vector& z) { return flatten(binding_flow(unflatten_augmented(z), epsilon, omega)); };
}

Matrix numerical_jacobian(const FlatMap& map, const Vector& z, double fd_step) {
  const Eigen::Index n = z.size();
  Matrix jac(n, n);
  Vector shifted = z;
  for (Eigen::Index j = 0; j < n; ++j) {
    shifted[j] = z[j] + fd_step;
    const Vector plus = map(shifted);
    shifted[j] = z[j] - fd_step;
    const Vector minus = map(shifted);
    shifted[j] = z[j];
    jac.col(j) = (plus - minus) / (2.0 * fd_step);
  }
  return jac;
}

Matrix symplectic_form(Eigen::Index n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

double symplectic_defect(const Matrix& jacobian) {
  const Matrix j = symplectic_form(jacobian.rows() / 2);
  return (jacobian.transpose() * j * jacobian - j).cwiseAbs().maxCoeff();
}

double symplecticity_check(const FlatMap& map, const Vector& z, double fd_step) {
  return symplectic_defect(numerical_jacobian(map, z, fd_step));
}

}  // namespace rmhmc
