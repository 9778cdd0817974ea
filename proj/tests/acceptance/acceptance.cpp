// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
// (with indented detail lines) and exits non-zero if any criterion fails.

#include "rmhmc/diagnostics.hpp"
#include "rmhmc/experiments.hpp"
#include "rmhmc/integrators.hpp"
#include "rmhmc/sampler.hpp"

#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace rmhmc;

namespace {

int g_failures = 0;

template <class... Args>
void detail(const char* fmt, Args... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

void report(int id, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double inf_norm(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

const std::uint64_t kSeeds[] = {1, 2, 3};

struct FunnelRun {
  ChainResult chain;
  double kl = 0.0;
};

FunnelRun funnel_chain(Scheme scheme, std::uint64_t seed, bool record_steps) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  const FunnelModel model(10);
  SamplerConfig sc = resolve_sampler(cfg, scheme, funnel_init(10));
  sc.record_step_reports = record_steps;
  const MetricSpec spec = resolve_metric(cfg, scheme, model.dim());
  FunnelRun r;
  r.chain = sample(sc, spec, model);
  try {
    r.kl = kl_to_gaussian(column(r.chain.samples, 0), 0.0, FunnelModel::kVVariance).kl;
  } catch (const std::domain_error&) {
    r.kl = std::numeric_limits<double>::infinity();  // the chain never left its start
  }
  return r;
}

// Fixed typical-set start on the funnel: q from the target, p ~ N(0, G(q)).
PhasePoint funnel_start(const MetricSpec& spec, const FunnelModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Vector q(11);
  q[0] = 1.5 * z(rng);
  for (int i = 1; i < 11; ++i) q[i] = std::exp(-0.5 * q[0]) * z(rng);
  return {q, sample_momentum(evaluate(spec, model, q), rng)};
}

// ---------------------------------------------------------------------------

std::vector<FunnelRun> g_explicit;
std::vector<FunnelRun> g_implicit;

void funnel_benchmark() {
  int explicit_ok = 0;
  int implicit_ok = 0;
  for (std::uint64_t seed : kSeeds) {
    g_explicit.push_back(funnel_chain(Scheme::rmhmc_explicit, seed, true));
    g_implicit.push_back(funnel_chain(Scheme::rmhmc_implicit, seed, true));
    const FunnelRun& e = g_explicit.back();
    const FunnelRun& i = g_implicit.back();
    const bool e_ok = e.kl <= 0.30 && e.chain.acceptance_rate >= 0.65 && e.chain.acceptance_rate <= 0.95;
    const bool i_ok = i.kl <= 0.30 && i.chain.acceptance_rate >= 0.80;
    explicit_ok += e_ok;
    implicit_ok += i_ok;
    detail("seed %llu explicit (omega 10, eps 0.14): kl %.4f acceptance %.3f divergences %d  %s",
           static_cast<unsigned long long>(seed), e.kl, e.chain.acceptance_rate, e.chain.divergences,
           e_ok ? "ok" : "miss");
    detail("seed %llu implicit (eps 0.15):           kl %.4f acceptance %.3f divergences %d  %s",
           static_cast<unsigned long long>(seed), i.kl, i.chain.acceptance_rate, i.chain.divergences,
           i_ok ? "ok" : "miss");
  }
  detail("majority: explicit %d/3, implicit %d/3", explicit_ok, implicit_ok);
  report(1, explicit_ok >= 2 && implicit_ok >= 2,
         "funnel N=1000 L=25: explicit kl <= 0.30 and acceptance in [0.65, 0.95]; implicit kl <= 0.30 and "
         "acceptance >= 0.80 (majority of 3 seeds)");
}

void relative_speed() {
  // Wall time per integrator step: an explicit chain whose trajectories
  // abort early would otherwise look fast for the wrong reason.
  double explicit_time = 0.0, implicit_time = 0.0;
  long explicit_steps = 0, implicit_steps = 0;
  for (std::size_t k = 0; k < g_explicit.size(); ++k) {
    explicit_time += g_explicit[k].chain.wall_time_s;
    implicit_time += g_implicit[k].chain.wall_time_s;
    explicit_steps += g_explicit[k].chain.total_steps;
    implicit_steps += g_implicit[k].chain.total_steps;
  }
  const double raw_ratio = explicit_time / implicit_time;
  const double per_step_ratio = (explicit_time / std::max(1L, explicit_steps)) / (implicit_time / implicit_steps);
  detail("wall time: explicit %.2f s over %ld steps, implicit %.2f s over %ld steps", explicit_time, explicit_steps,
         implicit_time, implicit_steps);
  detail("explicit / implicit: raw %.3f, per integrator step %.3f (need <= 0.7)", raw_ratio, per_step_ratio);

  long explicit_reports = 0, explicit_not_eight = 0;
  for (const auto& r : g_explicit) {
    for (const auto& s : r.chain.step_reports) {
      if (s.diverged) continue;
      ++explicit_reports;
      if (s.counter.partial_evals() != 8) ++explicit_not_eight;
    }
  }
  long both_loops = 0, below_eleven = 0, arithmetic_mismatch = 0, min_evals = 1L << 40;
  for (const auto& r : g_implicit) {
    for (const auto& s : r.chain.step_reports) {
      if (s.diverged) continue;
      const auto expected = static_cast<std::uint64_t>(s.momentum_iterations + 2 * s.position_iterations + 1);
      if (s.counter.partial_evals() != expected) ++arithmetic_mismatch;
      if (s.momentum_iterations >= 2 && s.position_iterations >= 2) {
        ++both_loops;
        min_evals = std::min<long>(min_evals, static_cast<long>(s.counter.partial_evals()));
        if (s.counter.partial_evals() < 11) ++below_eleven;
      }
    }
  }
  detail("explicit: %ld completed steps, %ld with a count other than 8", explicit_reports, explicit_not_eight);
  detail("implicit: count = momentum iters + 2 x position iters + 1 mismatches: %ld", arithmetic_mismatch);
  detail("implicit: %ld steps with both loops >= 2 iterations, %ld of them below 11 evaluations (minimum %ld)",
         both_loops, below_eleven, both_loops ? min_evals : 0L);
  const bool time_ok = per_step_ratio <= 0.7;
  const bool explicit_ok = explicit_reports > 0 && explicit_not_eight == 0;
  const bool implicit_ok = both_loops > 0 && below_eleven == 0 && arithmetic_mismatch == 0;
  report(2, time_ok && explicit_ok && implicit_ok,
         "explicit wall time <= 0.7 x implicit; exactly 8 partial derivatives per explicit step; >= 11 per "
         "implicit step whenever both fixed-point loops iterate >= 2 times");
}

void beats_hmc() {
  int wins = 0;
  for (std::size_t k = 0; k < std::size(kSeeds); ++k) {
    const FunnelRun hmc = funnel_chain(Scheme::hmc, kSeeds[k], false);
    const double e = g_explicit[k].kl;
    const bool win = e < hmc.kl;
    wins += win;
    detail("seed %llu: explicit kl %.4f, hmc (eps 0.2, L 25, N 20000) kl %.4f  %s",
           static_cast<unsigned long long>(kSeeds[k]), e, hmc.kl, win ? "ok" : "miss");
  }
  report(3, wins == 3, "explicit RMHMC funnel kl (N=1000) below hand-tuned HMC kl (N=20000) on all 3 seeds");
}

void symplecticity() {
  const FunnelModel model(10);
  const MetricSpec spec = MetricSpec::softabs();
  const Hamiltonian h(spec, model);
  const Vector z = flatten(AugmentedPhasePoint::duplicate(funnel_start(spec, model, 2)));
  const Matrix jac = numerical_jacobian(step_map(Integrator::explicit_leapfrog, h, StepConfig{1e-3, 10.0}), z, 1e-5);
  const double defect = symplectic_defect(jac);
  const double det = std::abs(jac.determinant());
  detail("max |M^T J M - J| = %.3e, |det M| - 1 = %.3e", defect, det - 1.0);
  report(4, defect < 1e-5 && std::abs(det - 1.0) < 1e-6,
         "explicit step on funnel + SoftAbs at eps 1e-3, omega 10: symplectic defect < 1e-5 and |det| = 1 +- 1e-6");
}

void integrator_order() {
  const FunnelModel model(10);
  const MetricSpec spec = MetricSpec::softabs();
  const Hamiltonian h(spec, model);
  const PhasePoint z = funnel_start(spec, model, 2);
  const double h0 = h.value(z.q, z.p);
  auto energy_error = [&](Integrator which, double eps, int steps) {
    StepConfig cfg{eps, 10.0};
    cfg.fp_threshold = 1e-12;
    if (which == Integrator::explicit_leapfrog) {
      const auto r = integrate_explicit(h, AugmentedPhasePoint::duplicate(z), cfg, steps);
      return r.diverged ? std::numeric_limits<double>::infinity() : std::abs(h.value(r.end.q, r.end.p) - h0);
    }
    const auto r = integrate_implicit(h, z, cfg, steps);
    return r.diverged ? std::numeric_limits<double>::infinity() : std::abs(h.value(r.end.q, r.end.p) - h0);
  };
  // explicit over T = 0.2 (2 omega eps stays in the stable band), implicit over T = 0.4
  const double ex_ratio = energy_error(Integrator::explicit_leapfrog, 0.01, 20) /
                          energy_error(Integrator::explicit_leapfrog, 0.005, 40);
  const double im_ratio = energy_error(Integrator::implicit_leapfrog, 0.1, 4) /
                          energy_error(Integrator::implicit_leapfrog, 0.05, 8);
  detail("|dH(eps)| / |dH(eps/2)|: explicit %.3f, implicit %.3f", ex_ratio, im_ratio);
  auto in_band = [](double r) { return r >= 3.0 && r <= 5.0; };
  report(5, in_band(ex_ratio) && in_band(im_ratio),
         "halving eps shrinks the fixed-time funnel energy error by a factor in [3, 5]");
}

void reversibility() {
  const FunnelModel model(10);
  const MetricSpec soft = MetricSpec::softabs();
  const MetricSpec id = MetricSpec::identity(11);
  const PhasePoint z = funnel_start(soft, model, 2);

  const Hamiltonian hl(id, model);
  auto fwd = integrate_leapfrog(hl, z, StepConfig{0.01}, 10);
  fwd.end.p = -fwd.end.p;
  const auto back = integrate_leapfrog(hl, fwd.end, StepConfig{0.01}, 10);
  const double lf_err = std::max(inf_norm(back.end.q - z.q), inf_norm(back.end.p + z.p));

  const Hamiltonian hs(soft, model);
  const StepConfig cfg{0.01, 10.0};
  auto efwd = integrate_explicit(hs, AugmentedPhasePoint::duplicate(z), cfg, 10);
  efwd.end.p = -efwd.end.p;
  efwd.end.p_tilde = -efwd.end.p_tilde;
  const auto eback = integrate_explicit(hs, efwd.end, cfg, 10);
  const double ex_err = std::max({inf_norm(eback.end.q - z.q), inf_norm(eback.end.q_tilde - z.q),
                                  inf_norm(eback.end.p + z.p), inf_norm(eback.end.p_tilde + z.p)});
  detail("return error: leapfrog %.3e, explicit %.3e", lf_err, ex_err);
  report(6, lf_err < 1e-8 && ex_err < 1e-8, "leapfrog and explicit step are reversible to 1e-8 over 10 steps");
}

void binding_study() {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::binding_study;
  cfg.omega_list = {0.0, 10.0};
  const BindingStudy study = run_binding_study(cfg);
  const double d0 = study.runs[0].endpoint_distance;
  const double d10 = study.runs[1].endpoint_distance;
  detail("endpoint distance to the implicit path: omega 0 %.3e, omega 10 %.3e (ratio %.3g, need >= 5)", d0, d10,
         d0 / d10);
  report(7, d0 >= 5.0 * d10, "binding study L=40: omega 0 endpoint distance >= 5 x the omega 10 distance");
}

void statistical_oracle() {
  GaussianModel g = GaussianModel::standard(2);
  const MetricSpec id = MetricSpec::identity(2);
  SamplerConfig cfg;
  cfg.step.epsilon = 0.3;
  cfg.traj_len = 5;
  cfg.n_samples = 20000;
  cfg.burn_in = 1000;
  cfg.seed = 8;
  cfg.init = Vector::Zero(2);
  const ChainResult r = sample(cfg, id, g);
  bool ks_ok = true;
  for (Eigen::Index j = 0; j < 2; ++j) {
    const double d = oracle::ks_statistic(column(r.samples, j), oracle::normal_cdf);
    const double p = oracle::ks_pvalue(d, static_cast<std::size_t>(cfg.n_samples));
    detail("coordinate %ld: KS D = %.4f, p = %.4f", static_cast<long>(j), d, p);
    ks_ok = ks_ok && p > 0.001;
  }
  const double kl = kl_to_gaussian(oracle::iid_normal(100000, 0.0, 3.0, 21), 0.0, 9.0).kl;
  detail("exact-sampler KL on N(0, 9) from 1e5 draws: %.2e", kl);
  report(8, ks_ok && kl < 0.005, "HMC on the 2D unit Gaussian passes KS at 0.001; exact-sampler KL < 0.005");
}

void derivative_consistency() {
  bool ok = true;
  std::mt19937_64 rng(2024);

  const FunnelModel funnel(10);
  Vector mean = Vector::Ones(4);
  const LogRegModel logreg = generate_logreg_data(mean, 0.3 * Matrix::Identity(4, 4), 60, 11, {0.7, 1.0}).model;
  Vector var(3);
  var << 0.5, 2.0, 4.0;
  const GaussianModel gauss(Vector::LinSpaced(3, -1, 1), var);
  const TargetModel* models[] = {&funnel, &logreg, &gauss};
  double worst_grad = 0.0, worst_hess = 0.0;
  for (const TargetModel* m : models) {
    const auto d = static_cast<Eigen::Index>(m->dim());
    for (int trial = 0; trial < 20; ++trial) {
      const Vector w = oracle::random_in_ball(d, 3.0, rng);
      worst_grad = std::max(worst_grad, oracle::rel_err(m->grad_log_prob(w), oracle::fd_gradient(
                                                                                 [&](const Vector& x) {
                                                                                   return m->log_prob(x);
                                                                                 },
                                                                                 w)));
      worst_hess = std::max(worst_hess, oracle::rel_err(m->hessian_log_prob(w), oracle::fd_jacobian(
                                                                                    [&](const Vector& x) {
                                                                                      return m->grad_log_prob(x);
                                                                                    },
                                                                                    w)));
    }
  }
  detail("model gradients: worst rel err %.2e (< 1e-6); Hessians %.2e (< 1e-5)", worst_grad, worst_hess);
  ok = ok && worst_grad < 1e-6 && worst_hess < 1e-5;

  const MetricSpec spec = MetricSpec::softabs();
  const double ln2pi = std::log(2 * std::numbers::pi);
  double worst_dp = 0.0, worst_dq = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vector q = oracle::random_in_ball(11, 2.5, rng);
    const Vector p = oracle::random_vec(11, 2.0, rng);
    auto h_ref = [&](const Vector& qq, const Vector& pp) {
      const Matrix g = evaluate(spec, funnel, qq).g;
      return -funnel.log_prob(qq) + 0.5 * (11 * ln2pi + std::log(g.determinant())) + 0.5 * pp.dot(g.inverse() * pp);
    };
    worst_dp = std::max(worst_dp, oracle::rel_err(dH_dp(spec, funnel, q, p),
                                                  oracle::fd_gradient([&](const Vector& x) { return h_ref(q, x); }, p)));
    worst_dq = std::max(worst_dq,
                        oracle::rel_err(dH_dq(spec, funnel, q, p),
                                        oracle::fd_gradient([&](const Vector& x) { return h_ref(x, p); }, q, 1e-4)));
  }
  detail("funnel + SoftAbs: dH/dp worst rel err %.2e (< 1e-6), dH/dq %.2e (< 1e-4)", worst_dp, worst_dq);
  ok = ok && worst_dp < 1e-6 && worst_dq < 1e-4;

  long grid_points = 0, grid_bad = 0;
  for (double alpha : {0.5, 1.0, 4.0, 100.0, 1e6}) {
    for (long k = -100000; k <= 100000; ++k) {
      const double lambda = k * 1e-4;
      const double s = softabs(lambda, alpha);
      ++grid_points;
      if (!(s >= std::max(std::abs(lambda), 1.0 / alpha)) || s != softabs(-lambda, alpha)) ++grid_bad;
    }
    if (std::abs(softabs(0.0, alpha) * alpha - 1.0) > 1e-15) ++grid_bad;
    if (std::abs(softabs(1e-12, alpha) * alpha - 1.0) > 1e-9) ++grid_bad;
  }
  detail("SoftAbs grid over [-10, 10]: %ld points, %ld violations", grid_points, grid_bad);
  ok = ok && grid_bad == 0;
  report(9, ok, "analytic derivatives match finite differences; SoftAbs property grid holds");
}

}  // namespace

int main() {
  funnel_benchmark();
  relative_speed();
  beats_hmc();
  symplecticity();
  integrator_order();
  reversibility();
  binding_study();
  statistical_oracle();
  derivative_consistency();
  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
