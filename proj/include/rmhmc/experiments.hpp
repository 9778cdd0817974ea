#pragma once

#include "rmhmc/diagnostics.hpp"
#include "rmhmc/models.hpp"
#include "rmhmc/sampler.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rmhmc {

enum class Experiment { logreg2d, logreg10d, funnel, binding_study, custom };
enum class OutputFormat { csv, json };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);
std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& name);

/// User-facing run description. Unset sampler fields fall back to the
/// per-experiment, per-scheme defaults in `default_sampler`.
struct ExperimentConfig {
  Experiment experiment = Experiment::funnel;
  std::optional<Scheme> scheme;  // unset: every scheme the experiment compares

  std::optional<double> epsilon;
  std::optional<int> traj_len;
  std::optional<int> n_samples;
  std::optional<int> burn_in;
  std::optional<double> omega_bind;
  std::optional<double> softabs_alpha;
  std::optional<double> fp_threshold;
  std::optional<int> fp_max_iters;
  std::uint64_t seed = 0;

  std::filesystem::path output_dir;  // empty: nothing is written
  OutputFormat format = OutputFormat::csv;

  // model parameters
  std::size_t n_latent = 10;         // funnel
  std::size_t n_data = 500;          // logistic regression data set size
  double feature_scale = 1.0;        // std-dev of logistic features
  std::size_t dim = 2;               // custom Gaussian
  std::vector<double> omega_list{0.0, 1.0, 10.0, 100.0, 472.0};  // binding study

  /// Throws ConfigError on anything a module would reject later.
  void validate() const;
};

/// Overlays the keys present in `j` onto `base`. Keys mirror the long CLI
/// flags with underscores (`trajectory_length`, `omega_bind`, ...). Unknown
/// keys are a ConfigError.
ExperimentConfig apply_config_json(ExperimentConfig base, const nlohmann::json& j);
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

/// Sampler settings for `scheme` in `cfg.experiment`, overrides applied.
SamplerConfig resolve_sampler(const ExperimentConfig& cfg, Scheme scheme, const Vector& init);
MetricSpec resolve_metric(const ExperimentConfig& cfg, Scheme scheme, std::size_t dim);

/// Schemes run when `cfg.scheme` is unset.
std::vector<Scheme> default_schemes(Experiment e);

struct BenchmarkRow {
  std::string scheme;
  double kl = 0.0;  // +inf when the chain never moved
  double wall_time_s = 0.0;
  double acceptance_rate = 0.0;
  int n = 0;
  int l = 0;
  double epsilon = 0.0;
  std::optional<double> alpha;       // none for euclidean HMC
  std::optional<double> omega_bind;  // explicit scheme only
};

nlohmann::ordered_json to_json(const BenchmarkRow& row);
BenchmarkRow benchmark_row_from_json(const nlohmann::json& j);

struct FunnelOutcome {
  BenchmarkRow row;
  KlReport kl;  // kl.kl is +inf when the v samples are degenerate
  double ess_v = 0.0;
  ChainResult chain;
  std::vector<std::string> warnings;
};

/// Funnel benchmark for every selected scheme. With an output directory,
/// writes per-scheme samples, ACF of v and a summary, plus
/// funnel_benchmark.json.
std::vector<FunnelOutcome> run_funnel(const ExperimentConfig& cfg);

/// Initial point for funnel chains: v = 0, x_i = 1.
Vector funnel_init(std::size_t n_latent);

struct BindingRun {
  double omega = 0.0;
  std::vector<Vector> path;  // positions, start included
  double endpoint_distance = 0.0;
  double max_deviation = 0.0;  // max over steps of |q_k - q_ref,k|
  bool diverged = false;
};

struct BindingStudy {
  std::vector<Vector> reference;  // implicit integrator positions
  Vector start_momentum;
  std::vector<BindingRun> runs;
};

/// Single trajectories of the explicit integrator at each omega against an
/// implicit reference with a tight fixed-point threshold, on the
/// two-parameter (bias, weight) logistic model started at the origin.
BindingStudy run_binding_study(const ExperimentConfig& cfg);

/// Data set shared by the two-parameter logistic experiments: weights drawn
/// around (bias 0, weight 2) with covariance 0.3 I.
SyntheticLogReg logreg2d_data(const ExperimentConfig& cfg);
SyntheticLogReg logreg10d_data(const ExperimentConfig& cfg, double beta);

struct LogRegRun {
  Scheme scheme = Scheme::hmc;
  double beta = 0.0;
  ChainResult chain;
  Vector mean;
  Vector sd;
};

struct LogRegStudy {
  Vector true_weights;
  std::vector<LogRegRun> runs;
};

/// logreg2d: every selected scheme from bias 0, weight 10.
/// logreg10d: every selected scheme under beta = 0.2 and beta = 10.
LogRegStudy run_logreg(const ExperimentConfig& cfg);

struct CustomRun {
  ChainResult chain;
  Vector mean;
  Matrix covariance;
  std::vector<double> ess;
};

/// Standard Gaussian of dimension cfg.dim under the selected scheme.
CustomRun run_custom(const ExperimentConfig& cfg);

/// Runs whatever cfg.experiment names. Returns false when no run accepted a
/// single proposal.
bool run_experiment(const ExperimentConfig& cfg);

}  // namespace rmhmc
