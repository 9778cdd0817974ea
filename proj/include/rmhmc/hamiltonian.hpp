#pragma once

#include "rmhmc/counters.hpp"
#include "rmhmc/metric.hpp"
#include "rmhmc/models.hpp"
#include "rmhmc/types.hpp"

namespace rmhmc {

struct PhasePoint {
  Vector q;  // position
  Vector p;  // momentum
};

/// State on the doubled phase space: (q, p) and the copies (q~, p~).
struct AugmentedPhasePoint {
  Vector q;
  Vector p;
  Vector q_tilde;
  Vector p_tilde;

  static AugmentedPhasePoint duplicate(const PhasePoint& z) { return {z.q, z.p, z.q, z.p}; }
  PhasePoint primary() const { return {q, p}; }
};

/// H = potential + log_det_term + kinetic, with
///   potential    = -log f(q)
///   log_det_term = (D ln(2 pi) + ln|G(q)|) / 2
///   kinetic      = p^T G(q)^{-1} p / 2
struct HamiltonianEval {
  double value = 0.0;
  double potential = 0.0;
  double kinetic = 0.0;
  double log_det_term = 0.0;
};

/// The Riemannian (or, for a euclidean spec, separable) Hamiltonian of a
/// target model. Holds references: the spec and model must outlive it.
class Hamiltonian {
 public:
  Hamiltonian(const MetricSpec& spec, const TargetModel& model) : spec_(spec), model_(model) {}
  Hamiltonian(MetricSpec&&, const TargetModel&) = delete;

  const MetricSpec& spec() const { return spec_; }
  const TargetModel& model() const { return model_; }
  std::size_t dim() const { return model_.dim(); }
  bool separable() const { return !spec_.position_dependent(); }

  /// Throws UnstableRegionError on any non-finite component.
  HamiltonianEval evaluate(const Vector& q, const Vector& p, DerivCounter* counter = nullptr) const;
  double value(const Vector& q, const Vector& p, DerivCounter* counter = nullptr) const {
    return evaluate(q, p, counter).value;
  }

  /// dH/dp = G(q)^{-1} p.
  Vector dh_dp(const Vector& q, const Vector& p, DerivCounter* counter = nullptr) const;

  /// dH/dq, component i:
  ///   -dL/dq_i + tr(G^{-1} dG_i) / 2 - p^T G^{-1} dG_i G^{-1} p / 2
  Vector dh_dq(const Vector& q, const Vector& p, DerivCounter* counter = nullptr) const;

 private:
  const MetricSpec& spec_;
  const TargetModel& model_;
};

inline HamiltonianEval h_eval(const MetricSpec& spec, const TargetModel& model, const Vector& q, const Vector& p) {
  return Hamiltonian(spec, model).evaluate(q, p);
}

inline Vector dH_dp(const MetricSpec& spec, const TargetModel& model, const Vector& q, const Vector& p,
                    DerivCounter* counter = nullptr) {
  return Hamiltonian(spec, model).dh_dp(q, p, counter);
}

inline Vector dH_dq(const MetricSpec& spec, const TargetModel& model, const Vector& q, const Vector& p,
                    DerivCounter* counter = nullptr) {
  return Hamiltonian(spec, model).dh_dq(q, p, counter);
}

}  // namespace rmhmc
