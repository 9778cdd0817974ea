#include "rmhmc/experiments.hpp"

#include "rmhmc/io.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace rmhmc {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::logreg2d:
      return "logreg2d";
    case Experiment::logreg10d:
      return "logreg10d";
    case Experiment::funnel:
      return "funnel";
    case Experiment::binding_study:
      return "binding_study";
    case Experiment::custom:
      return "custom";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::logreg2d, Experiment::logreg10d, Experiment::funnel, Experiment::binding_study,
                       Experiment::custom}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + name + "'");
}

void ExperimentConfig::validate() const {
  auto positive = [](const auto& v, const char* what) {
    if (v && !(*v > 0)) throw ConfigError(std::string(what) + " must be > 0");
  };
  positive(epsilon, "epsilon");
  positive(traj_len, "trajectory_length");
  positive(n_samples, "n_samples");
  positive(softabs_alpha, "softabs_alpha");
  positive(fp_threshold, "fp_threshold");
  positive(fp_max_iters, "fp_max_iters");
  if (epsilon && !std::isfinite(*epsilon)) throw ConfigError("epsilon must be finite");
  if (burn_in && *burn_in < 0) throw ConfigError("burn_in must be >= 0");
  if (omega_bind && !(*omega_bind >= 0.0 && std::isfinite(*omega_bind))) throw ConfigError("omega_bind must be >= 0");
  if (n_latent < 1) throw ConfigError("n_latent must be >= 1");
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (!(feature_scale > 0.0)) throw ConfigError("feature_scale must be > 0");
  if (experiment == Experiment::binding_study) {
    if (omega_list.empty()) throw ConfigError("omega_list must not be empty");
    for (double w : omega_list) {
      if (!(w >= 0.0 && std::isfinite(w))) throw ConfigError("omega_list entries must be >= 0");
    }
    if (scheme && *scheme != Scheme::rmhmc_explicit) {
      throw ConfigError("binding_study only runs the explicit scheme");
    }
  }
}

namespace {

// null clears an override, so a written config.json can be fed back in
template <class T>
void take(const json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    dst.reset();
  } else {
    dst = j.at(key).get<T>();
  }
}

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

const std::set<std::string> kConfigKeys{
    "experiment", "scheme",       "epsilon", "trajectory_length", "n_samples", "burn_in",
    "omega_bind", "softabs_alpha", "fp_threshold", "fp_max_iters", "seed",      "output_dir",
    "format",     "n_latent",     "n_data",  "feature_scale",     "dim",       "omega_list"};

}  // namespace

ExperimentConfig apply_config_json(ExperimentConfig cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
  }
  try {
    if (j.contains("experiment")) cfg.experiment = parse_experiment(j.at("experiment").get<std::string>());
    if (j.contains("scheme")) {
      if (j.at("scheme").is_null()) {
        cfg.scheme.reset();
      } else {
        cfg.scheme = parse_scheme(j.at("scheme").get<std::string>());
      }
    }
    take(j, "epsilon", cfg.epsilon);
    take(j, "trajectory_length", cfg.traj_len);
    take(j, "n_samples", cfg.n_samples);
    take(j, "burn_in", cfg.burn_in);
    take(j, "omega_bind", cfg.omega_bind);
    take(j, "softabs_alpha", cfg.softabs_alpha);
    take(j, "fp_threshold", cfg.fp_threshold);
    take(j, "fp_max_iters", cfg.fp_max_iters);
    take(j, "seed", cfg.seed);
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("format")) cfg.format = parse_format(j.at("format").get<std::string>());
    take(j, "n_latent", cfg.n_latent);
    take(j, "n_data", cfg.n_data);
    take(j, "feature_scale", cfg.feature_scale);
    take(j, "dim", cfg.dim);
    take(j, "omega_list", cfg.omega_list);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ordered_json to_json(const ExperimentConfig& cfg) {
  auto opt = [](const auto& v) -> ordered_json { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json j;
  j["experiment"] = to_string(cfg.experiment);
  j["scheme"] = cfg.scheme ? ordered_json(to_string(*cfg.scheme)) : ordered_json(nullptr);
  j["epsilon"] = opt(cfg.epsilon);
  j["trajectory_length"] = opt(cfg.traj_len);
  j["n_samples"] = opt(cfg.n_samples);
  j["burn_in"] = opt(cfg.burn_in);
  j["omega_bind"] = opt(cfg.omega_bind);
  j["softabs_alpha"] = opt(cfg.softabs_alpha);
  j["fp_threshold"] = opt(cfg.fp_threshold);
  j["fp_max_iters"] = opt(cfg.fp_max_iters);
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir.string();
  j["format"] = to_string(cfg.format);
  j["n_latent"] = cfg.n_latent;
  j["n_data"] = cfg.n_data;
  j["feature_scale"] = cfg.feature_scale;
  j["dim"] = cfg.dim;
  j["omega_list"] = cfg.omega_list;
  return j;
}

std::vector<Scheme> default_schemes(Experiment e) {
  switch (e) {
    case Experiment::funnel:
    case Experiment::logreg2d:
      return {Scheme::hmc, Scheme::rmhmc_implicit, Scheme::rmhmc_explicit};
    case Experiment::logreg10d:
      return {Scheme::hmc, Scheme::rmhmc_explicit};
    case Experiment::binding_study:
      return {Scheme::rmhmc_explicit};
    case Experiment::custom:
      return {Scheme::hmc};
  }
  return {};
}

namespace {

struct Defaults {
  double epsilon;
  int traj_len;
  int n_samples;
  std::optional<int> burn_in;
  double omega_bind;
};

// Hand-tuned per experiment and scheme. The explicit scheme's binding
// strength is chosen with 2 * omega * epsilon well inside the stable band.
Defaults defaults_for(Experiment e, Scheme s) {
  const bool rm = s != Scheme::hmc;
  switch (e) {
    case Experiment::funnel:
      if (s == Scheme::hmc) return {0.2, 25, 20000, std::nullopt, 0.0};
      if (s == Scheme::rmhmc_implicit) return {0.15, 25, 1000, std::nullopt, 0.0};
      return {0.14, 25, 1000, std::nullopt, 10.0};
    case Experiment::logreg2d:
      // no burn-in: the path from the far initialization is part of the output
      return rm ? Defaults{0.03, 20, 500, 0, 5.0} : Defaults{0.1, 10, 500, 0, 0.0};
    case Experiment::logreg10d:
      return rm ? Defaults{0.04, 3, 500, std::nullopt, 4.0} : Defaults{0.2, 1, 500, std::nullopt, 0.0};
    case Experiment::binding_study:
      return {0.012, 40, 1, 0, 10.0};
    case Experiment::custom:
      return rm ? Defaults{0.2, 10, 1000, std::nullopt, 1.0} : Defaults{0.2, 10, 1000, std::nullopt, 0.0};
  }
  return {0.1, 10, 1000, std::nullopt, 0.0};
}

}  // namespace

SamplerConfig resolve_sampler(const ExperimentConfig& cfg, Scheme scheme, const Vector& init) {
  const Defaults d = defaults_for(cfg.experiment, scheme);
  SamplerConfig s;
  s.scheme = scheme;
  s.step.epsilon = cfg.epsilon.value_or(d.epsilon);
  s.step.omega_bind = cfg.omega_bind.value_or(d.omega_bind);
  if (cfg.fp_threshold) s.step.fp_threshold = *cfg.fp_threshold;
  if (cfg.fp_max_iters) s.step.fp_max_iters = *cfg.fp_max_iters;
  s.traj_len = cfg.traj_len.value_or(d.traj_len);
  s.n_samples = cfg.n_samples.value_or(d.n_samples);
  s.burn_in = cfg.burn_in ? cfg.burn_in : d.burn_in;
  s.seed = cfg.seed;
  s.init = init;
  return s;
}

MetricSpec resolve_metric(const ExperimentConfig& cfg, Scheme scheme, std::size_t dim) {
  if (scheme == Scheme::hmc) return MetricSpec::identity(dim);
  return MetricSpec::softabs(cfg.softabs_alpha.value_or(1e6));
}

ordered_json to_json(const BenchmarkRow& row) {
  auto num = [](double v) -> ordered_json { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  ordered_json j;
  j["scheme"] = row.scheme;
  j["kl"] = num(row.kl);
  j["wall_time_s"] = num(row.wall_time_s);
  j["acceptance_rate"] = num(row.acceptance_rate);
  j["n"] = row.n;
  j["l"] = row.l;
  j["epsilon"] = row.epsilon;
  j["alpha"] = row.alpha ? ordered_json(*row.alpha) : ordered_json(nullptr);
  j["omega_bind"] = row.omega_bind ? ordered_json(*row.omega_bind) : ordered_json(nullptr);
  return j;
}

BenchmarkRow benchmark_row_from_json(const json& j) {
  auto num = [&](const char* key) {
    const json& v = j.at(key);
    return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
  };
  BenchmarkRow row;
  row.scheme = j.at("scheme").get<std::string>();
  row.kl = num("kl");
  row.wall_time_s = num("wall_time_s");
  row.acceptance_rate = num("acceptance_rate");
  row.n = j.at("n").get<int>();
  row.l = j.at("l").get<int>();
  row.epsilon = j.at("epsilon").get<double>();
  if (!j.at("alpha").is_null()) row.alpha = j.at("alpha").get<double>();
  if (!j.at("omega_bind").is_null()) row.omega_bind = j.at("omega_bind").get<double>();
  return row;
}

namespace {

std::vector<Scheme> selected_schemes(const ExperimentConfig& cfg) {
  if (cfg.scheme) return {*cfg.scheme};
  return default_schemes(cfg.experiment);
}

bool writing(const ExperimentConfig& cfg) { return !cfg.output_dir.empty(); }

std::filesystem::path out_path(const ExperimentConfig& cfg, const std::string& stem, OutputFormat f) {
  return cfg.output_dir / (stem + (f == OutputFormat::csv ? ".csv" : ".json"));
}

void write_matrix(const ExperimentConfig& cfg, const std::string& stem, const LabeledMatrix& m) {
  if (!writing(cfg)) return;
  if (cfg.format == OutputFormat::csv) {
    std::ostringstream out;
    write_matrix_csv(out, m);
    write_text_file(out_path(cfg, stem, OutputFormat::csv), out.str());
  } else {
    write_text_file(out_path(cfg, stem, OutputFormat::json), matrix_to_json(m).dump(1) + "\n");
  }
}

void write_json(const ExperimentConfig& cfg, const std::string& stem, const ordered_json& j) {
  if (!writing(cfg)) return;
  write_text_file(out_path(cfg, stem, OutputFormat::json), j.dump(2) + "\n");
}

ordered_json counters_json(const DerivCounter& c) {
  ordered_json j;
  j["grad_calls"] = c.grad_calls;
  j["hessian_calls"] = c.hessian_calls;
  j["metric_evals"] = c.metric_evals;
  j["metric_derivative_evals"] = c.metric_derivative_evals;
  j["dq_evals"] = c.dq_evals;
  j["dp_evals"] = c.dp_evals;
  return j;
}

ordered_json chain_json(const ChainResult& r) {
  ordered_json j;
  j["acceptance_rate"] = r.acceptance_rate;
  j["wall_time_s"] = r.wall_time_s;
  j["divergences"] = r.divergences;
  j["integrator_steps"] = r.total_steps;
  j["counters"] = counters_json(r.counters);
  return j;
}

ordered_json vector_json(const Vector& v) { return ordered_json(std::vector<double>(v.data(), v.data() + v.size())); }

LabeledMatrix samples_matrix(const Matrix& samples, std::vector<std::string> columns, const ChainResult& r) {
  LabeledMatrix m;
  m.columns = std::move(columns);
  m.columns.push_back("accepted");
  m.columns.push_back("delta_h");
  m.values.resize(samples.rows(), samples.cols() + 2);
  m.values.leftCols(samples.cols()) = samples;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    m.values(i, samples.cols()) = r.accept_flags[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    m.values(i, samples.cols() + 1) = r.delta_h[static_cast<std::size_t>(i)];
  }
  return m;
}

LabeledMatrix acf_matrix(const std::vector<std::vector<double>>& series, const std::vector<std::string>& names,
                         int max_lag) {
  LabeledMatrix m;
  m.columns.push_back("lag");
  m.values = Matrix::Zero(max_lag + 1, static_cast<Eigen::Index>(series.size()) + 1);
  for (int k = 0; k <= max_lag; ++k) m.values(k, 0) = k;
  for (std::size_t c = 0; c < series.size(); ++c) {
    m.columns.push_back(names[c]);
    Eigen::Index col = static_cast<Eigen::Index>(c) + 1;
    try {
      const AcfResult acf = autocorrelation(series[c], max_lag);
      for (int k = 0; k <= max_lag; ++k) m.values(k, col) = acf.acf[static_cast<std::size_t>(k)];
    } catch (const std::domain_error&) {
      m.values.col(col).setConstant(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return m;
}

std::vector<std::string> indexed_names(const std::string& prefix, std::size_t n, std::size_t first = 0) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(first + i));
  return names;
}

int acf_max_lag(Eigen::Index n) { return static_cast<int>(std::min<Eigen::Index>(50, n - 1)); }

void warn(std::vector<std::string>& warnings, const std::string& msg) {
  std::cerr << "warning: " << msg << "\n";
  warnings.push_back(msg);
}

}  // namespace

Vector funnel_init(std::size_t n_latent) {
  Vector init = Vector::Ones(static_cast<Eigen::Index>(n_latent) + 1);
  init[0] = 0.0;
  return init;
}

std::vector<FunnelOutcome> run_funnel(const ExperimentConfig& cfg) {
  cfg.validate();
  const FunnelModel model(cfg.n_latent);
  std::vector<FunnelOutcome> outcomes;
  ordered_json rows = ordered_json::array();

  for (Scheme scheme : selected_schemes(cfg)) {
    const SamplerConfig sc = resolve_sampler(cfg, scheme, funnel_init(cfg.n_latent));
    const MetricSpec spec = resolve_metric(cfg, scheme, model.dim());
    FunnelOutcome o;
    o.chain = sample(sc, spec, model);
    const std::string name = to_string(scheme);
    const std::vector<double> v = column(o.chain.samples, 0);

    try {
      o.kl = kl_to_gaussian(v, 0.0, FunnelModel::kVVariance);
    } catch (const std::domain_error&) {
      o.kl = {v.empty() ? 0.0 : v.front(), 0.0, std::numeric_limits<double>::infinity()};
      warn(o.warnings, name + ": v samples are degenerate, KL is undefined");
    }
    try {
      o.ess_v = v.size() >= 10 ? effective_sample_size(v) : 0.0;
    } catch (const std::domain_error&) {
      o.ess_v = 0.0;
    }
    const double div_rate = static_cast<double>(o.chain.divergences) / sc.n_samples;
    if (div_rate > 0.5) {
      std::ostringstream msg;
      msg << name << ": " << o.chain.divergences << " of " << sc.n_samples << " trajectories diverged";
      warn(o.warnings, msg.str());
    }

    o.row.scheme = name;
    o.row.kl = o.kl.kl;
    o.row.wall_time_s = o.chain.wall_time_s;
    o.row.acceptance_rate = o.chain.acceptance_rate;
    o.row.n = sc.n_samples;
    o.row.l = sc.traj_len;
    o.row.epsilon = sc.step.epsilon;
    if (spec.position_dependent()) o.row.alpha = spec.alpha();
    if (scheme == Scheme::rmhmc_explicit) o.row.omega_bind = sc.step.omega_bind;

    std::vector<std::string> cols{"v"};
    for (const auto& n : indexed_names("x", cfg.n_latent, 1)) cols.push_back(n);
    write_matrix(cfg, "funnel_" + name + "_samples", samples_matrix(o.chain.samples, cols, o.chain));
    if (v.size() >= 2) write_matrix(cfg, "funnel_" + name + "_acf_v", acf_matrix({v}, {"v"}, acf_max_lag(v.size())));

    ordered_json summary;
    summary["row"] = to_json(o.row);
    summary["kl_report"] = {{"sample_mean", o.kl.sample_mean},
                            {"sample_var", o.kl.sample_var},
                            {"kl", std::isfinite(o.kl.kl) ? ordered_json(o.kl.kl) : ordered_json(nullptr)}};
    summary["ess_v"] = o.ess_v;
    summary["chain"] = chain_json(o.chain);
    summary["burn_in"] = sc.effective_burn_in();
    summary["fp_threshold"] = sc.step.fp_threshold;
    summary["fp_max_iters"] = sc.step.fp_max_iters;
    summary["warnings"] = o.warnings;
    write_json(cfg, "funnel_" + name + "_summary", summary);

    rows.push_back(to_json(o.row));
    outcomes.push_back(std::move(o));
  }

  ordered_json bench;
  bench["baseline_note"] = "The NUTS baseline is not implemented; hmc is the hand-tuned HMC baseline.";
  bench["rows"] = rows;
  write_json(cfg, "funnel_benchmark", bench);
  return outcomes;
}

SyntheticLogReg logreg2d_data(const ExperimentConfig& cfg) {
  Vector mean(2);
  mean << 0.0, 2.0;  // (bias, weight)
  return generate_logreg_data(mean, 0.3 * Matrix::Identity(2, 2), cfg.n_data, cfg.seed,
                              {0.2, cfg.feature_scale});
}

SyntheticLogReg logreg10d_data(const ExperimentConfig& cfg, double beta) {
  return generate_logreg_data(Vector::Ones(11), 0.3 * Matrix::Identity(11, 11), cfg.n_data, cfg.seed,
                              {beta, cfg.feature_scale});
}

BindingStudy run_binding_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const SyntheticLogReg data = logreg2d_data(cfg);
  const LogRegModel& model = data.model;
  const SamplerConfig sc = resolve_sampler(cfg, Scheme::rmhmc_explicit, Vector::Zero(2));
  const MetricSpec spec = resolve_metric(cfg, Scheme::rmhmc_explicit, 2);
  const Hamiltonian h(spec, model);

  BindingStudy study;
  std::mt19937_64 rng = make_chain_rng(cfg.seed, 0);
  study.start_momentum = sample_momentum(evaluate(spec, model, sc.init), rng);
  const PhasePoint start{sc.init, study.start_momentum};

  StepConfig ref_cfg = sc.step;
  ref_cfg.fp_threshold = cfg.fp_threshold.value_or(1e-6);
  TrajectoryOptions opts;
  opts.record_path = true;
  const auto ref = integrate_implicit(h, start, ref_cfg, sc.traj_len, opts);
  for (const auto& z : ref.path) study.reference.push_back(z.q);
  if (ref.diverged) std::cerr << "warning: implicit reference trajectory diverged\n";

  const std::vector<std::string> cols{"step", "bias", "w"};
  auto path_matrix = [&](const std::vector<Vector>& path, bool with_distance) {
    LabeledMatrix m;
    m.columns = cols;
    if (with_distance) m.columns.push_back("distance");
    m.values.resize(static_cast<Eigen::Index>(path.size()), static_cast<Eigen::Index>(m.columns.size()));
    for (std::size_t k = 0; k < path.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      m.values(r, 0) = static_cast<double>(k);
      m.values(r, 1) = path[k][0];
      m.values(r, 2) = path[k][1];
      if (with_distance) {
        m.values(r, 3) = k < study.reference.size() ? (path[k] - study.reference[k]).norm()
                                                    : std::numeric_limits<double>::quiet_NaN();
      }
    }
    return m;
  };
  write_matrix(cfg, "binding_implicit_path", path_matrix(study.reference, false));

  ordered_json summary = ordered_json::array();
  for (double omega : cfg.omega_list) {
    StepConfig step = sc.step;
    step.omega_bind = omega;
    const auto traj = integrate_explicit(h, AugmentedPhasePoint::duplicate(start), step, sc.traj_len, opts);
    BindingRun run;
    run.omega = omega;
    run.diverged = traj.diverged || ref.diverged;
    for (const auto& z : traj.path) run.path.push_back(z.q);
    for (std::size_t k = 0; k < run.path.size() && k < study.reference.size(); ++k) {
      run.max_deviation = std::max(run.max_deviation, (run.path[k] - study.reference[k]).norm());
    }
    run.endpoint_distance = run.diverged ? std::numeric_limits<double>::infinity()
                                         : (run.path.back() - study.reference.back()).norm();
    if (run.diverged) run.max_deviation = std::numeric_limits<double>::infinity();

    std::ostringstream stem;
    stem << "binding_omega_" << omega << "_path";
    write_matrix(cfg, stem.str(), path_matrix(run.path, true));
    auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
    summary.push_back({{"omega", omega},
                       {"endpoint_distance", num(run.endpoint_distance)},
                       {"max_deviation", num(run.max_deviation)},
                       {"diverged", run.diverged},
                       {"steps", traj.steps_taken}});
    study.runs.push_back(std::move(run));
  }
  ordered_json out;
  out["epsilon"] = sc.step.epsilon;
  out["trajectory_length"] = sc.traj_len;
  out["start_momentum"] = vector_json(study.start_momentum);
  out["reference_fp_threshold"] = ref_cfg.fp_threshold;
  out["runs"] = summary;
  write_json(cfg, "binding_summary", out);
  return study;
}

namespace {

LogRegRun run_logreg_chain(const ExperimentConfig& cfg, const LogRegModel& model, Scheme scheme, const Vector& init,
                           const std::string& stem, Eigen::Index summary_from) {
  const SamplerConfig sc = resolve_sampler(cfg, scheme, init);
  const MetricSpec spec = resolve_metric(cfg, scheme, model.dim());
  LogRegRun run;
  run.scheme = scheme;
  run.beta = model.beta();
  run.chain = sample(sc, spec, model);
  const Matrix tail = run.chain.samples.bottomRows(run.chain.samples.rows() - summary_from);
  run.mean = tail.colwise().mean().transpose();
  run.sd = ((tail.rowwise() - run.mean.transpose()).array().square().colwise().sum() /
            static_cast<double>(tail.rows()))
               .sqrt()
               .transpose();

  std::vector<std::string> cols{"bias"};
  for (const auto& n : indexed_names("w", model.dim() - 1, 1)) cols.push_back(n);
  write_matrix(cfg, stem + "_samples", samples_matrix(run.chain.samples, cols, run.chain));
  std::vector<std::vector<double>> series;
  for (Eigen::Index j = 0; j < run.chain.samples.cols(); ++j) series.push_back(column(run.chain.samples, j));
  if (run.chain.samples.rows() >= 2) {
    write_matrix(cfg, stem + "_acf", acf_matrix(series, cols, acf_max_lag(run.chain.samples.rows())));
  }
  return run;
}

ordered_json run_json(const LogRegRun& run, const SamplerConfig& sc) {
  ordered_json j;
  j["scheme"] = to_string(run.scheme);
  j["beta"] = run.beta;
  j["epsilon"] = sc.step.epsilon;
  j["trajectory_length"] = sc.traj_len;
  j["omega_bind"] = run.scheme == Scheme::rmhmc_explicit ? ordered_json(sc.step.omega_bind) : ordered_json(nullptr);
  j["mean"] = vector_json(run.mean);
  j["sd"] = vector_json(run.sd);
  j["mean_norm"] = run.mean.norm();
  j["chain"] = chain_json(run.chain);
  return j;
}

}  // namespace

LogRegStudy run_logreg(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.experiment != Experiment::logreg2d && cfg.experiment != Experiment::logreg10d) {
    throw ConfigError("run_logreg needs experiment logreg2d or logreg10d");
  }
  LogRegStudy study;
  ordered_json runs = ordered_json::array();
  ordered_json summary;

  if (cfg.experiment == Experiment::logreg2d) {
    const SyntheticLogReg data = logreg2d_data(cfg);
    study.true_weights = data.true_weights;
    if (writing(cfg)) {
      std::ostringstream out;
      write_logreg_csv(out, data.model);
      write_text_file(cfg.output_dir / "logreg2d_data.csv", out.str());
    }
    Vector init(2);
    init << 0.0, 10.0;  // bias 0, weight 10
    for (Scheme s : selected_schemes(cfg)) {
      const SamplerConfig sc = resolve_sampler(cfg, s, init);
      // the recorded path starts far out; statistics use the second half
      LogRegRun run =
          run_logreg_chain(cfg, data.model, s, init, "logreg2d_" + to_string(s), sc.n_samples / 2);
      runs.push_back(run_json(run, sc));
      study.runs.push_back(std::move(run));
    }
    summary["summary_from_sample"] = "second half of each chain";
  } else {
    for (double beta : {0.2, 10.0}) {
      const SyntheticLogReg data = logreg10d_data(cfg, beta);
      study.true_weights = data.true_weights;
      const Vector init = Vector::Zero(static_cast<Eigen::Index>(data.model.dim()));
      std::ostringstream tag;
      tag << "logreg10d_beta" << beta << "_";
      for (Scheme s : selected_schemes(cfg)) {
        const SamplerConfig sc = resolve_sampler(cfg, s, init);
        LogRegRun run = run_logreg_chain(cfg, data.model, s, init, tag.str() + to_string(s), 0);
        runs.push_back(run_json(run, sc));
        study.runs.push_back(std::move(run));
      }
    }
  }
  summary["experiment"] = to_string(cfg.experiment);
  summary["true_weights"] = vector_json(study.true_weights);
  summary["runs"] = runs;
  write_json(cfg, to_string(cfg.experiment) + "_summary", summary);
  return study;
}

CustomRun run_custom(const ExperimentConfig& cfg) {
  cfg.validate();
  const GaussianModel model = GaussianModel::standard(cfg.dim);
  const Scheme scheme = cfg.scheme.value_or(Scheme::hmc);
  const SamplerConfig sc = resolve_sampler(cfg, scheme, Vector::Zero(static_cast<Eigen::Index>(cfg.dim)));
  const MetricSpec spec = resolve_metric(cfg, scheme, cfg.dim);
  CustomRun run;
  run.chain = sample(sc, spec, model);
  const Matrix& s = run.chain.samples;
  run.mean = s.colwise().mean().transpose();
  const Matrix centered = s.rowwise() - run.mean.transpose();
  run.covariance = centered.transpose() * centered / static_cast<double>(s.rows());
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    try {
      run.ess.push_back(s.rows() >= 10 ? effective_sample_size(column(s, j)) : 0.0);
    } catch (const std::domain_error&) {
      run.ess.push_back(0.0);
    }
  }

  write_matrix(cfg, "custom_" + to_string(scheme) + "_samples",
               samples_matrix(s, indexed_names("q", cfg.dim), run.chain));
  ordered_json summary;
  summary["scheme"] = to_string(scheme);
  summary["dim"] = cfg.dim;
  summary["mean"] = vector_json(run.mean);
  ordered_json cov = ordered_json::array();
  for (Eigen::Index i = 0; i < run.covariance.rows(); ++i) cov.push_back(vector_json(run.covariance.row(i)));
  summary["covariance"] = cov;
  summary["ess"] = run.ess;
  summary["chain"] = chain_json(run.chain);
  write_json(cfg, "custom_summary", summary);
  return run;
}

bool run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (writing(cfg)) write_json(cfg, "config", to_json(cfg));
  auto moved = [](const ChainResult& r) { return r.acceptance_rate > 0.0; };
  switch (cfg.experiment) {
    case Experiment::funnel: {
      bool any = false;
      for (const auto& o : run_funnel(cfg)) any = any || moved(o.chain);
      return any;
    }
    case Experiment::logreg2d:
    case Experiment::logreg10d: {
      bool any = false;
      for (const auto& r : run_logreg(cfg).runs) any = any || moved(r.chain);
      return any;
    }
    case Experiment::binding_study: {
      const BindingStudy study = run_binding_study(cfg);
      bool any = false;
      for (const auto& r : study.runs) any = any || !r.diverged;
      return any;
    }
    case Experiment::custom:
      return moved(run_custom(cfg).chain);
  }
  return false;
}

}  // namespace rmhmc
