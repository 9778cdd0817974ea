#pragma once

#include "rmhmc/counters.hpp"
#include "rmhmc/hamiltonian.hpp"
#include "rmhmc/types.hpp"

#include <functional>
#include <vector>

namespace rmhmc {

struct StepConfig {
  double epsilon = 0.1;
  double omega_bind = 0.0;     // binding strength of the extended phase space
  double fp_threshold = 1e-3;  // max-abs change that ends a fixed-point loop
  int fp_max_iters = 1000;

  void validate() const;
};

/// Per-step bookkeeping. Iteration counts are only set by implicit steps.
struct StepReport {
  bool diverged = false;
  int momentum_iterations = 0;
  int position_iterations = 0;
  DerivCounter counter;
};

enum class Integrator { leapfrog, implicit_leapfrog, explicit_leapfrog };

/// Stormer-Verlet: half kick, drift, half kick. Requires a separable
/// (euclidean) Hamiltonian.
PhasePoint leapfrog_step(const Hamiltonian& h, const PhasePoint& z, const StepConfig& cfg,
                         StepReport* report = nullptr);

/// Generalized leapfrog with fixed-point solves for the momentum half step
/// and the position step. Exhausting fp_max_iters marks the step diverged.
PhasePoint implicit_step(const Hamiltonian& h, const PhasePoint& z, const StepConfig& cfg,
                         StepReport* report = nullptr);

/// Explicit step on the extended phase space: the symmetric composition
///   H1(e/2) H2(e/2) binding(e) H2(e/2) H1(e/2)
/// where H1 = H(q, p~), H2 = H(q~, p) and the binding flow rotates the
/// differences (q - q~, p - p~).
AugmentedPhasePoint explicit_step(const Hamiltonian& h, const AugmentedPhasePoint& z, const StepConfig& cfg,
                                  StepReport* report = nullptr);

/// Applies [c I, s I; -s I, c I] with c = cos(2 omega eps), s = sin(2 omega eps)
/// to a stacked vector (a, b) of length 2D.
Vector binding_rotation(const Vector& stacked, double epsilon, double omega);

/// Exact flow of omega * (|q - q~|^2 + |p - p~|^2) / 2 over time epsilon.
/// Leaves q + q~ and p + p~ unchanged.
AugmentedPhasePoint binding_flow(const AugmentedPhasePoint& z, double epsilon, double omega);

template <class State>
struct TrajectoryResult {
  State end;
  int steps_taken = 0;
  DerivCounter counter;
  bool diverged = false;
  std::vector<State> path;          // start + every step, only when recorded
  std::vector<StepReport> reports;  // one per completed step, only when recorded
};

struct TrajectoryOptions {
  bool record_path = false;
  bool record_reports = false;
  double max_energy_error = 1e6;  // |H - H_start| beyond this aborts as diverged
};

TrajectoryResult<PhasePoint> integrate_leapfrog(const Hamiltonian& h, const PhasePoint& start, const StepConfig& cfg,
                                                int n_steps, const TrajectoryOptions& options = {});
TrajectoryResult<PhasePoint> integrate_implicit(const Hamiltonian& h, const PhasePoint& start, const StepConfig& cfg,
                                                int n_steps, const TrajectoryOptions& options = {});
TrajectoryResult<AugmentedPhasePoint> integrate_explicit(const Hamiltonian& h, const AugmentedPhasePoint& start,
                                                         const StepConfig& cfg, int n_steps,
                                                         const TrajectoryOptions& options = {});

// Flat coordinates: [q; p] for PhasePoint, [q; q~; p; p~] for the augmented
// state, so that positions precede their conjugate momenta.
Vector flatten(const PhasePoint& z);
Vector flatten(const AugmentedPhasePoint& z);
PhasePoint unflatten_phase(const Vector& flat);
AugmentedPhasePoint unflatten_augmented(const Vector& flat);

using FlatMap = std::function<Vector(const Vector&)>;

FlatMap step_map(Integrator integrator, const Hamiltonian& h, const StepConfig& cfg);
FlatMap binding_map(double epsilon, double omega);

/// Central-difference Jacobian of `map` at z.
Matrix numerical_jacobian(const FlatMap& map, const Vector& z, double fd_step);

/// J = [0 I; -I 0] of size 2n.
Matrix symplectic_form(Eigen::Index n);

/// max |M^T J M - J|.
double symplectic_defect(const Matrix& jacobian);

/// Symplectic defect of the numerical Jacobian of one application of `map`.
double symplecticity_check(const FlatMap& map, const Vector& z, double fd_step);

}  // namespace rmhmc
