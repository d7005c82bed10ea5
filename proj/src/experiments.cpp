#include "tbc/experiments.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#include <Eigen/Core>
#include <unsupported/Eigen/KroneckerProduct>

#include "tbc/channel.hpp"
#include "tbc/fcs.hpp"
#include "tbc/random_states.hpp"
#include "tbc/single_atom.hpp"
#include "tbc/statistics.hpp"
#include "tbc/tolerances.hpp"
#include "tbc/verify.hpp"

namespace tbc {

namespace {

using I64 = std::int64_t;

void describe(const RunConfig& cfg, ResultTable& t) {
  const ModelParams& p = cfg.params;
  t.set_meta("program", std::string("tbcurrent ") + kVersion);
  t.set_meta("eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION));
  t.set_meta("experiment", experiment_name(cfg.experiment));
  t.set_meta("E", format_double(p.E()));
  t.set_meta("F", format_double(p.F()));
  t.set_meta("lambda", format_double(p.lambda()));
  t.set_meta("tau", format_double(p.tau()));
  t.set_meta("beta", format_double(p.beta()));
  t.set_meta("seed", std::to_string(cfg.seed));
  t.set_meta("n", std::to_string(cfg.n));
  t.set_meta("trials", std::to_string(cfg.trials));
  t.set_meta("window", std::to_string(cfg.window));
  t.set_meta("M", std::to_string(cfg.M));
  t.set_meta("points", std::to_string(cfg.points));
  t.set_meta("check", std::to_string(cfg.check));
  t.set_meta("tol_trace", format_double(kTolerances.trace));
  t.set_meta("tol_leakage", format_double(kTolerances.leakage));
  t.set_meta("tol_bessel_norm", format_double(kTolerances.bessel_norm));
  t.set_meta("tol_bessel_tail", format_double(kTolerances.bessel_tail));
  t.set_meta("tol_legendre_slope", format_double(kTolerances.legendre_slope));
}

ResultTable spectrum(const RunConfig& cfg) {
  ResultTable t;
  const double F = cfg.params.F();
  const BesselTable table = BesselTable::for_force(F, std::max(cfg.window, bessel_reach(2.0 / F, kTolerances.bessel_tail)));
  t.columns = {"k", "energy", "psi_k_at_origin"};
  for (int k = -cfg.window; k <= cfg.window; ++k) t.add_row({I64{k}, 2.0 - F * k, table.psi(k, 0)});
  return t;
}

ResultTable single_atom(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  const LatticeWindow w = LatticeWindow::make(-cfg.window, cfg.window, 0);
  // particle in psi_0, atom excited
  JointOperator rho = JointOperator::zero(w);
  rho.m(2 * w.index(0) + 1, 2 * w.index(0) + 1) = 1.0;
  const ParticleOperator x = position_operator(w, p.F());
  const Eigen::MatrixXcd xi = Eigen::kroneckerProduct(x.m, Eigen::Matrix2cd::Identity());
  const double x0 = position_expectation(0.0, rho, p);
  const double bound = position_excursion_bound(p);

  ResultTable t;
  t.columns = {"t", "x_closed", "x_oracle", "excursion", "bound"};
  const double span = cfg.n * p.tau();
  for (int i = 0; i < cfg.points; ++i) {
    const double time = span * i / (cfg.points - 1);
    const double closed = position_expectation(time, rho, p);
    const double oracle = (propagate_oracle(rho, time, p).m * xi).trace().real();
    t.add_row({time, closed, oracle, std::abs(closed - x0), bound});
  }
  return t;
}

ResultTable channel_evolve(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  const LatticeWindow w = LatticeWindow::for_interactions(0, 0, cfg.n, 2, 0);
  ParticleOperator rho = basis_operator(w, 0, 0);
  const ParticleOperator x = position_operator(w, p.F());
  Eigen::VectorXd k(w.size());
  for (int i = 0; i < w.size(); ++i) k(i) = w.k_of(i);

  ResultTable t;
  t.columns = {"step", "trace", "mean_k", "variance_k", "mean_x"};
  for (int s = 0; s <= cfg.n; ++s) {
    const Eigen::VectorXd d = rho.m.diagonal().real();
    const double tr = d.sum();
    const double mean = d.dot(k) / tr;
    const double var = d.dot(k.cwiseProduct(k)) / tr - mean * mean;
    t.add_row({I64{s}, tr, mean, var, (rho.m * x.m).trace().real()});
    if (s < cfg.n) rho = apply_channel(rho, 0.0, p);
  }
  return t;
}

ResultTable walk(const RunConfig& cfg) {
  const WalkLaw law = walk_pmf_exact(cfg.n, cfg.params);
  const WalkSample mc = sample_walk(cfg.n, cfg.trials, cfg.seed, cfg.params);
  ResultTable t;
  t.set_meta("exact_mean", format_double(law.mean()));
  t.set_meta("exact_variance", format_double(law.variance()));
  t.set_meta("mc_mean", format_double(mc.mean()));
  t.set_meta("mc_variance", format_double(mc.variance()));
  t.columns = {"displacement", "p_exact", "log_p_exact", "p_monte_carlo"};
  for (int k = -cfg.n; k <= cfg.n; ++k) {
    const double pe = law.prob(k);
    const I64 count = mc.counts[static_cast<std::size_t>(k + cfg.n)];
    if (pe == 0.0 && count == 0) continue;
    t.add_row({I64{k}, pe, law.log_prob(k), static_cast<double>(count) / static_cast<double>(cfg.trials)});
  }
  return t;
}

ResultTable rate(const RunConfig& cfg) {
  ResultTable t;
  t.columns = {"x", "I_closed", "I_numeric", "abs_diff"};
  double worst = 0.0;
  for (int i = 0; i < cfg.points; ++i) {
    const double x = -0.999 + 1.998 * i / (cfg.points - 1);
    const double closed = rate_function(x, cfg.params);
    const double numeric = rate_function_numeric(x, cfg.params);
    const double diff = std::abs(closed - numeric);
    worst = std::max(worst, diff);
    t.add_row({x, closed, numeric, diff});
  }
  t.set_meta("max_abs_diff", format_double(worst));
  return t;
}

ResultTable fcs_energy(const RunConfig& cfg) {
  const ReservoirConfig rc{cfg.params, LatticeWindow::make(-cfg.window, cfg.window - 1, 0), cfg.M, cfg.n};
  CounterRng rng = CounterRng::stream(cfg.seed, 0);
  const ParticleOperator rho = random_density_matrix(rc.window, -2, 2, rng);
  const EnergyFcs fcs = run_energy_fcs(rc, rho);
  const double be = cfg.params.beta_e();
  ResultTable t;
  t.set_meta("initial_state", "random density matrix on k in [-2, 2]");
  t.set_meta("total", format_double(fcs.total()));
  t.set_meta("off_diagonal_mass", format_double(fcs.off_diagonal_mass()));
  t.columns = {"delta_k", "delta_m", "delta_S_p", "delta_S_env", "probability"};
  for (const auto& [key, prob] : fcs.prob)
    t.add_row({I64{key.first}, I64{key.second}, -be * key.first, -be * key.second, prob});
  return t;
}

ResultTable fcs_position(const RunConfig& cfg) {
  const int r = PositionGrid::for_force(cfg.params.F()).reach;
  const LatticeWindow w = LatticeWindow::make(-cfg.window, cfg.window, r);
  CounterRng rng = CounterRng::stream(cfg.seed, 0);
  const ParticleOperator rho = random_density_matrix(w, -2, 2, rng);
  const PositionFcs q = run_position_fcs(cfg.n, rho, cfg.params);
  ResultTable t;
  t.set_meta("initial_state", "random density matrix on k in [-2, 2]");
  t.set_meta("mean", format_double(q.mean()));
  t.set_meta("variance", format_double(q.variance()));
  t.columns = {"delta_x", "probability"};
  for (int d = q.delta_min; d <= q.delta_max(); ++d)
    if (q.at(d) > 0.0) t.add_row({I64{d}, q.at(d)});
  return t;
}

ResultTable verify_all(const RunConfig& cfg) {
  std::vector<CheckResult> results;
  if (cfg.check == 0) {
    results = run_acceptance();
  } else {
    results.push_back(run_check(cfg.check));
  }
  ResultTable t;
  t.columns = {"id", "criterion", "metric", "value", "lower", "upper", "passed"};
  bool all = true;
  for (const CheckResult& r : results) {
    all = all && r.passed();
    for (const Metric& m : r.metrics) t.add_row({I64{r.id}, r.name, m.name, m.value, m.lo, m.hi, I64{m.ok() ? 1 : 0}});
  }
  t.set_meta("all_passed", all ? "true" : "false");
  return t;
}

}  // namespace

ResultTable run_experiment(const RunConfig& cfg) {
  ResultTable body;
  try {
    switch (cfg.experiment) {
      case Experiment::spectrum: body = spectrum(cfg); break;
      case Experiment::single_atom: body = single_atom(cfg); break;
      case Experiment::channel_evolve: body = channel_evolve(cfg); break;
      case Experiment::walk: body = walk(cfg); break;
      case Experiment::rate: body = rate(cfg); break;
      case Experiment::fcs_energy: body = fcs_energy(cfg); break;
      case Experiment::fcs_position: body = fcs_position(cfg); break;
      case Experiment::verify_all: body = verify_all(cfg); break;
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(experiment_name(cfg.experiment) + ": " + e.what());
  }
  ResultTable out;
  describe(cfg, out);
  for (const auto& [k, v] : body.metadata) out.set_meta(k, v);
  out.columns = std::move(body.columns);
  out.rows = std::move(body.rows);
  return out;
}

}  // namespace tbc
