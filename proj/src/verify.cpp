#include "tbc/verify.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "tbc/channel.hpp"
#include "tbc/fcs.hpp"
#include "tbc/random_states.hpp"
#include "tbc/single_atom.hpp"
#include "tbc/statistics.hpp"

namespace tbc {

namespace {

const ModelParams kRef(2.0, 1.0, 0.5, 1.0, 1.0);

std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 3);
  return std::string(buf, res.ptr);
}

Metric at_most(std::string name, double value, double limit) { return {std::move(name), value, -INFINITY, limit}; }
Metric flag(std::string name, bool value) { return {std::move(name), value ? 1.0 : 0.0, 1.0, 1.0}; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<Metric> channel_oracle_check() {
  const LatticeWindow w = LatticeWindow::make(-32, 31, 0);
  CounterRng rng = CounterRng::stream(101, 0);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const ParticleOperator rho = random_density_matrix(w, -28, 28, rng);
    for (double a : {0.0, 0.3, 1.0})
      worst = std::max(worst, trace_norm(apply_channel(rho, a, kRef).m - channel_oracle(rho, a, kRef).m));
  }
  return {at_most("trace distance", worst, 1e-10)};
}

std::vector<Metric> propagator_check() {
  const LatticeWindow w = LatticeWindow::make(-16, 16, 0);
  CounterRng rng = CounterRng::stream(102, 0);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const JointOperator rho = random_joint_state(w, -12, 12, rng);
    for (double t : {0.1, kRef.tau(), 3.0 * kRef.tau()})
      worst = std::max(worst, trace_norm(propagate_closed(rho, t, kRef).m - propagate_oracle(rho, t, kRef).m));
  }
  return {at_most("trace distance", worst, 1e-10)};
}

std::vector<Metric> theta_check() {
  const KrausTriple k = kraus_weights(kRef);
  const double be = kRef.beta_e();
  double ends = std::max(std::abs(theta(0.0, kRef) - 1.0), std::abs(theta(1.0, kRef) - 1.0));
  double sym = 0.0, kraus = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double a = -2.0 + 0.05 * i;
    sym = std::max(sym, std::abs(theta(1.0 - a, kRef) - theta(a, kRef)));
    const double expand = std::exp(a * be) * k.p_minus + k.p_zero + std::exp(-a * be) * k.p_plus;
    kraus = std::max(kraus, std::abs(theta(a, kRef) - expand));
  }
  return {at_most("theta(0), theta(1) vs 1", ends, 1e-12), at_most("theta(1-a) - theta(a)", sym, 1e-12),
          at_most("Kraus expansion", kraus, 1e-13)};
}

std::vector<Metric> transport_check() {
  const TransportCoefficients t = transport_coefficients(kRef);
  double mean_err = 0.0, var_err = 0.0;
  for (int n : {1, 50}) {
    const WalkLaw law = walk_pmf_exact(n, kRef);
    mean_err = std::max(mean_err, std::abs(law.mean() / (n * t.drift * kRef.tau()) - 1.0));
    var_err = std::max(var_err, std::abs(law.variance() / (n * 2.0 * t.diffusion * kRef.tau()) - 1.0));
  }
  const int n = 10000;
  const std::int64_t trials = 100000;
  const WalkSample s = sample_walk(n, trials, 7, kRef);
  const double var = n * 2.0 * t.diffusion * kRef.tau();
  const double mean_sigmas = std::abs(s.mean() - n * t.drift * kRef.tau()) / std::sqrt(var / trials);
  const double var_sigmas = std::abs(s.variance() - var) / (var * std::sqrt(2.0 / (trials - 1)));
  return {at_most("exact mean relative error", mean_err, 1e-10),
          at_most("exact variance relative error", var_err, 1e-10),
          at_most("Monte Carlo mean deviation (sigmas)", mean_sigmas, 4.0),
          at_most("Monte Carlo variance deviation (sigmas)", var_sigmas, 4.0)};
}

std::vector<Metric> clt_check() {
  const int n = 10000;
  const WalkLaw law = walk_pmf_exact(n, kRef);
  const TransportCoefficients t = transport_coefficients(kRef);
  const double mu = n * t.drift * kRef.tau();
  const double sigma = std::sqrt(n * 2.0 * t.diffusion * kRef.tau());
  double cdf = 0.0, dist = 0.0;
  for (int k = -n; k <= n; ++k) {
    const double phi = normal_cdf((k - mu) / sigma);
    dist = std::max(dist, std::abs(cdf - phi));
    cdf += law.prob(k);
    dist = std::max(dist, std::abs(cdf - phi));
  }
  return {at_most("Kolmogorov distance", dist, 0.02)};
}

std::vector<Metric> ldp_check() {
  const TransportCoefficients t = transport_coefficients(kRef);
  const WalkLaw laws[3] = {walk_pmf_exact(200, kRef), walk_pmf_exact(400, kRef), walk_pmf_exact(800, kRef)};
  double worst = 0.0;
  bool monotone = true;
  for (double x : {-0.3, 0.0, 0.3, t.drift * kRef.tau()}) {
    double prev = INFINITY;
    for (const WalkLaw& law : laws) {
      const double est = -law.log_prob(static_cast<int>(std::lround(x * law.n))) / law.n;
      const double err = std::abs(est - rate_function(x, kRef));
      monotone = monotone && err < prev;
      prev = err;
    }
    worst = std::max(worst, prev);
  }
  double closed = 0.0;
  for (int i = -999; i <= 999; ++i) {
    const double x = 1e-3 * i;
    closed = std::max(closed, std::abs(rate_function(x, kRef) - rate_function_numeric(x, kRef)));
  }
  return {at_most("|-(1/n) log P - I| at n = 800", worst, 0.05), flag("error decreasing in n", monotone),
          at_most("closed vs numeric rate function", closed, 1e-8)};
}

std::vector<Metric> fluctuation_check() {
  const double be = kRef.beta_e();
  double walk = 0.0;
  for (int n = 1; n <= 200; ++n) {
    const WalkLaw law = walk_pmf_exact(n, kRef);
    for (int k = 1; k <= n; ++k) walk = std::max(walk, std::abs(std::expm1(law.log_prob(-k) - law.log_prob(k) + be * k)));
  }
  double energy = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const ReservoirConfig cfg{kRef, LatticeWindow::make(-16, 15, 0), n, n};
    CounterRng rng = CounterRng::stream(107, static_cast<std::uint64_t>(n));
    const auto law = run_energy_fcs(cfg, random_density_matrix(cfg.window, -4, 4, rng)).entropy_law();
    for (const auto& [k, p] : law) {
      if (k <= 0) continue;
      // Delta S = -beta E k: P[Delta S = beta E k] = e^{-beta E k} P[Delta S = -beta E k]
      const double down = law.count(-k) ? law.at(-k) : 0.0;
      energy = std::max(energy, std::abs(down / (std::exp(-be * k) * p) - 1.0));
    }
  }
  return {at_most("walk, n <= 200 (relative)", walk, 1e-10), at_most("energy counting, n <= 3 (relative)", energy, 1e-10)};
}

std::vector<Metric> energy_fcs_check() {
  const ReservoirConfig cfg{kRef, LatticeWindow::make(-16, 15, 0), 3, 3};
  CounterRng rng = CounterRng::stream(108, 0);
  const EnergyFcs fcs = run_energy_fcs(cfg, random_density_matrix(cfg.window, -4, 4, rng));
  double moment = 0.0;
  for (double a : {-1.0, 0.0, 0.5, 1.0, 2.0})
    moment = std::max(moment, std::abs(fcs.moment(a) / std::pow(theta(a, kRef), cfg.n) - 1.0));
  return {{"mass off the diagonal", fcs.off_diagonal_mass(), 0.0, 0.0},
          at_most("normalization", std::abs(fcs.total() - 1.0), 1e-10),
          at_most("E[exp(a dS)] / theta(a)^n - 1", moment, 1e-8)};
}

std::vector<Metric> position_fcs_check() {
  const int n = 500;
  const LatticeWindow w = LatticeWindow::make(-30, 30, 20);
  CounterRng rng = CounterRng::stream(109, 0);
  const ParticleOperator rho = random_density_matrix(w, -2, 2, rng);
  double cgf = 0.0;
  for (double eta : {-0.5, 0.5}) {
    const PositionCgf g = position_cgf(n, eta, rho, kRef);
    cgf = std::max(cgf, std::abs(g.value / n - g.limit));
  }
  const PositionFcs q = run_position_fcs(n, rho, kRef);
  const double v = 0.1, delta = 0.02;
  const int lo = static_cast<int>(std::lround(n * (v - delta)));
  const int hi = static_cast<int>(std::lround(n * (v + delta)));
  const double ratio = std::log(q.mass(-hi, -lo) / q.mass(lo, hi)) / n;
  const double be = kRef.beta_e();
  return {at_most("|g_n/n - log theta| at n = 500", cgf, 0.02),
          {"(1/n) log Q(-v)/Q(v)", ratio, -be * (v + delta), -be * (v - delta)}};
}

std::vector<Metric> einstein_check() {
  const ModelParams p(1e-3, 1e-3, 0.3, 1.0, 1.0);
  const TransportCoefficients t = transport_coefficients(p);
  if (!t.mobility) throw std::logic_error("mobility undefined for E = F");
  return {at_most("|D beta / mu - 1|", std::abs(t.diffusion * p.beta() / *t.mobility - 1.0), 1e-6)};
}

std::vector<Metric> bookkeeping_check() {
  const ReservoirConfig cfg{kRef, LatticeWindow::make(-16, 15, 0), 3, 3};
  CounterRng rng = CounterRng::stream(111, 0);
  const EnergyFcs fcs = run_energy_fcs(cfg, random_density_matrix(cfg.window, -4, 4, rng));
  const TransportCoefficients t = transport_coefficients(kRef);
  const double drift = std::abs(fcs.mean_total_energy_change() / cfg.n - (kRef.E() - kRef.F()) * t.drift * kRef.tau());

  const ModelParams matched(1.3, 1.3, 0.4, 0.9, 0.7);
  const ReservoirConfig eq{matched, cfg.window, 3, 3};
  const Eigen::VectorXd h = total_energy_diagonal(eq);
  const Eigen::MatrixXcd d = h.cast<cplx>().asDiagonal();
  double comm = 0.0;
  for (int j = 0; j < eq.M; ++j) {
    const Eigen::MatrixXcd u(interaction_step(eq, j));
    comm = std::max(comm, (d * u - u * d).cwiseAbs().maxCoeff());
  }
  const double conserved = std::abs(run_energy_fcs(eq, random_density_matrix(eq.window, -4, 4, rng)).mean_total_energy_change());
  return {at_most("|mean change per step - (E-F) v_d tau|", drift, 1e-6),
          at_most("E = F: [H_p + H_env, step] max entry", comm, 1e-12),
          at_most("E = F: |mean total energy change|", conserved, 1e-12)};
}

std::vector<Metric> boundedness_check() {
  const LatticeWindow w = LatticeWindow::make(-12, 12, 0);
  CounterRng rng = CounterRng::stream(112, 0);
  const JointOperator rho = random_joint_state(w, -5, 5, rng);
  const ParticleOperator x = position_operator(w, kRef.F());
  const Eigen::MatrixXcd xi = Eigen::kroneckerProduct(x.m, Eigen::Matrix2cd::Identity());
  const double x0 = position_expectation(0.0, rho, kRef);
  const double bound = position_excursion_bound(kRef);
  double oracle = 0.0, excursion = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t = 0.25 * i * kRef.tau();
    const double closed = position_expectation(t, rho, kRef);
    oracle = std::max(oracle, std::abs(closed - (propagate_oracle(rho, t, kRef).m * xi).trace().real()));
    excursion = std::max(excursion, std::abs(closed - x0));
  }
  return {at_most("closed form vs oracle", oracle, 1e-9), at_most("max |<X(t)> - <X(0)>|", excursion, bound)};
}

struct Entry {
  const char* name;
  std::vector<Metric> (*run)();
};

const Entry kChecks[kAcceptanceCount] = {
    {"channel vs partial-trace oracle", channel_oracle_check},
    {"closed vs block propagator", propagator_check},
    {"theta identities", theta_check},
    {"transport moments and Monte Carlo", transport_check},
    {"central limit theorem", clt_check},
    {"large deviations", ldp_check},
    {"exact fluctuation identity", fluctuation_check},
    {"energy counting statistics", energy_fcs_check},
    {"position counting statistics", position_fcs_check},
    {"Einstein relation", einstein_check},
    {"energy bookkeeping", bookkeeping_check},
    {"bounded single-atom motion", boundedness_check},
};

}  // namespace

bool CheckResult::passed() const {
  if (metrics.empty()) return false;
  for (const Metric& m : metrics)
    if (!m.ok()) return false;
  return true;
}

std::string CheckResult::summary() const {
  std::string out = (passed() ? "PASS " : "FAIL ") + std::string(id < 10 ? " " : "") + std::to_string(id) + " " + name + ":";
  bool first = true;
  for (const Metric& m : metrics) {
    out += first ? " " : "; ";
    first = false;
    out += m.name + " " + number(m.value);
    if (m.lo == m.hi) {
      out += " == " + number(m.lo);
    } else if (std::isinf(m.lo)) {
      out += " <= " + number(m.hi);
    } else {
      out += " in [" + number(m.lo) + ", " + number(m.hi) + "]";
    }
  }
  return out;
}

CheckResult run_check(int id) {
  if (id < 1 || id > kAcceptanceCount) throw std::out_of_range("acceptance check id must be in 1.." + std::to_string(kAcceptanceCount));
  const Entry& e = kChecks[id - 1];
  CheckResult r{id, e.name, {}};
  try {
    r.metrics = e.run();
  } catch (const std::exception& ex) {
    r.metrics = {{std::string("error: ") + ex.what(), 1.0, 0.0, 0.0}};
  }
  return r;
}

std::vector<CheckResult> run_acceptance() {
  std::vector<CheckResult> out;
  for (int id = 1; id <= kAcceptanceCount; ++id) out.push_back(run_check(id));
  return out;
}

}  // namespace tbc
