#include "rmhmc/sampler.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace rmhmc {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::hmc:
      return "hmc";
    case Scheme::rmhmc_implicit:
      return "rmhmc_implicit";
    case Scheme::rmhmc_explicit:
      return "rmhmc_explicit";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "hmc") return Scheme::hmc;
  if (name == "rmhmc_implicit" || name == "implicit") return Scheme::rmhmc_implicit;
  if (name == "rmhmc_explicit" || name == "explicit") return Scheme::rmhmc_explicit;
  throw ConfigError("unknown scheme '" + name + "'");
}

void SamplerConfig::validate(const TargetModel& model) const {
  step.validate();
  if (traj_len < 1) throw ConfigError("sampler: trajectory length must be >= 1");
  if (n_samples < 1) throw ConfigError("sampler: n_samples must be >= 1");
  if (burn_in && *burn_in < 0) throw ConfigError("sampler: burn_in must be >= 0");
  if (static_cast<std::size_t>(init.size()) != model.dim()) {
    throw ConfigError("sampler: init has dimension " + std::to_string(init.size()) + ", model needs " +
                      std::to_string(model.dim()));
  }
  if (!init.allFinite() || !std::isfinite(model.log_prob(init))) {
    throw ConfigError("sampler: init is outside the model's domain");
  }
}

bool accept_test(double h_start, double h_end, double u) {
  if (!std::isfinite(h_end) || !std::isfinite(h_start)) return false;
  return std::log(u) < std::min(0.0, h_start - h_end);
}

std::mt19937_64 make_chain_rng(std::uint64_t seed, std::uint64_t chain_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chain_index), static_cast<std::uint32_t>(chain_index >> 32)};
  return std::mt19937_64(seq);
}

TransitionResult transition(const SamplerConfig& cfg, const Hamiltonian& h, const Vector& current,
                            std::mt19937_64& rng) {
  TransitionResult out;
  out.position = current;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Vector momentum;
  double h_start = 0.0;
  try {
    const MetricEval metric = evaluate(h.spec(), h.model(), current, &out.counter);
    momentum = sample_momentum(metric, rng);
    h_start = h.value(current, momentum, &out.counter);
  } catch (const UnstableRegionError&) {
    uniform(rng);
    out.diverged = true;
    out.delta_h = std::numeric_limits<double>::infinity();
    return out;
  }

  TrajectoryOptions options;
  options.record_reports = cfg.record_step_reports;
  PhasePoint proposal;
  bool diverged = false;
  const PhasePoint start{current, momentum};
  auto absorb = [&](auto&& traj) {
    out.counter += traj.counter;
    out.steps_taken = traj.steps_taken;
    out.reports = std::move(traj.reports);
    diverged = traj.diverged;
  };
  switch (cfg.scheme) {
    case Scheme::hmc: {
      auto traj = integrate_leapfrog(h, start, cfg.step, cfg.traj_len, options);
      proposal = traj.end;
      absorb(traj);
      break;
    }
    case Scheme::rmhmc_implicit: {
      auto traj = integrate_implicit(h, start, cfg.step, cfg.traj_len, options);
      proposal = traj.end;
      absorb(traj);
      break;
    }
    case Scheme::rmhmc_explicit: {
      const AugmentedPhasePoint augmented = AugmentedPhasePoint::duplicate(start);
      out.start_copy_gap = (augmented.q - augmented.q_tilde).norm() + (augmented.p - augmented.p_tilde).norm();
      auto traj = integrate_explicit(h, augmented, cfg.step, cfg.traj_len, options);
      proposal = traj.end.primary();
      absorb(traj);
      break;
    }
  }

  const double u = uniform(rng);
  out.diverged = diverged;
  if (diverged) {
    out.delta_h = std::numeric_limits<double>::infinity();
    return out;
  }
  double h_end = std::numeric_limits<double>::infinity();
  try {
    h_end = h.value(proposal.q, proposal.p, &out.counter);
  } catch (const UnstableRegionError&) {
    out.diverged = true;
  }
  out.delta_h = h_end - h_start;
  out.accepted = accept_test(h_start, h_end, u);
  if (out.accepted) out.position = std::move(proposal.q);
  return out;
}

ChainResult sample(const SamplerConfig& cfg, const MetricSpec& spec, const TargetModel& model,
                   std::uint64_t chain_index) {
  cfg.validate(model);
  if (cfg.scheme == Scheme::hmc && spec.position_dependent()) {
    throw ConfigError("sampler: hmc needs a euclidean metric");
  }
  const Hamiltonian h(spec, model);
  std::mt19937_64 rng = make_chain_rng(cfg.seed, chain_index);

  const int burn = cfg.effective_burn_in();
  const auto d = static_cast<Eigen::Index>(model.dim());
  ChainResult result;
  result.samples.resize(cfg.n_samples, d);
  result.accept_flags.reserve(static_cast<std::size_t>(cfg.n_samples));
  result.delta_h.reserve(static_cast<std::size_t>(cfg.n_samples));

  Vector current = cfg.init;
  int accepted = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int it = 0; it < burn + cfg.n_samples; ++it) {
    TransitionResult t = transition(cfg, h, current, rng);
    result.counters += t.counter;
    result.total_steps += t.steps_taken;
    if (cfg.record_step_reports) {
      result.step_reports.insert(result.step_reports.end(), t.reports.begin(), t.reports.end());
    }
    current = std::move(t.position);
    if (it < burn) continue;
    const auto row = static_cast<Eigen::Index>(it - burn);
    result.samples.row(row) = current.transpose();
    result.accept_flags.push_back(t.accepted);
    result.delta_h.push_back(t.delta_h);
    if (t.accepted) ++accepted;
    if (t.diverged) ++result.divergences;
  }
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.acceptance_rate = static_cast<double>(accepted) / cfg.n_samples;
  return result;
}

std::vector<ChainResult> sample_chains(const SamplerConfig& cfg, const MetricSpec& spec, const TargetModel& model,
                                       int n_chains) {
  if (n_chains < 1) throw ConfigError("sampler: need at least one chain");
  cfg.validate(model);
  std::vector<ChainResult> results(static_cast<std::size_t>(n_chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chains));
  std::vector<std::thread> workers;
  for (int c = 0; c < n_chains; ++c) {
    workers.emplace_back([&, c] {
      const auto i = static_cast<std::size_t>(c);
      try {
        results[i] = sample(cfg, spec, model, static_cast<std::uint64_t>(c));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace rmhmc
