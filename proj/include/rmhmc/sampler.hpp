#pragma once

#include "rmhmc/counters.hpp"
#include "rmhmc/hamiltonian.hpp"
#include "rmhmc/integrators.hpp"
#include "rmhmc/metric.hpp"
#include "rmhmc/models.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rmhmc {

enum class Scheme { hmc, rmhmc_implicit, rmhmc_explicit };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);  // throws ConfigError

struct SamplerConfig {
  Scheme scheme = Scheme::hmc;
  StepConfig step;
  int traj_len = 10;
  int n_samples = 1000;
  std::optional<int> burn_in;  // defaults to n_samples / 10
  std::uint64_t seed = 0;
  Vector init;
  bool record_step_reports = false;

  int effective_burn_in() const { return burn_in.value_or(n_samples / 10); }
  void validate(const TargetModel& model) const;
};

struct ChainResult {
  Matrix samples;                  // n_samples x D, burn-in excluded
  std::vector<bool> accept_flags;  // per retained sample
  std::vector<double> delta_h;     // H_end - H_start per retained sample
  DerivCounter counters;           // all iterations, burn-in included
  double wall_time_s = 0.0;        // all iterations, burn-in included
  double acceptance_rate = 0.0;
  int divergences = 0;             // retained iterations whose trajectory diverged
  long total_steps = 0;            // integrator steps, burn-in included
  std::vector<StepReport> step_reports;  // only with record_step_reports
};

/// log u < min(0, h_start - h_end); false whenever h_end is not finite.
bool accept_test(double h_start, double h_end, double u);

struct TransitionResult {
  Vector position;
  bool accepted = false;
  bool diverged = false;
  double delta_h = 0.0;
  double start_copy_gap = 0.0;  // |q - q~| + |p - p~| at trajectory start (explicit only)
  int steps_taken = 0;
  DerivCounter counter;
  std::vector<StepReport> reports;  // only with cfg.record_step_reports
};

/// One Gibbs sweep: momentum refresh at the current position, L integrator
/// steps, Metropolis-Hastings correction on H(q, p).
TransitionResult transition(const SamplerConfig& cfg, const Hamiltonian& h, const Vector& current,
                            std::mt19937_64& rng);

/// RNG stream for chain `chain_index` of a run seeded with `seed`.
std::mt19937_64 make_chain_rng(std::uint64_t seed, std::uint64_t chain_index);

ChainResult sample(const SamplerConfig& cfg, const MetricSpec& spec, const TargetModel& model,
                   std::uint64_t chain_index = 0);

/// Runs independent chains on worker threads; results are ordered by chain index.
std::vector<ChainResult> sample_chains(const SamplerConfig& cfg, const MetricSpec& spec, const TargetModel& model,
                                       int n_chains);

}  // namespace rmhmc
