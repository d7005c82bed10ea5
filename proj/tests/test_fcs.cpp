#include <cmath>

#include "doctest.h"
#include "tbc/errors.hpp"
#include "tbc/fcs.hpp"
#include "tbc/random_states.hpp"
#include "tbc/statistics.hpp"

using namespace tbc;

namespace {

const ModelParams kRef(2.0, 1.0, 0.5, 1.0, 1.0);

ReservoirConfig reservoir(const ModelParams& params, int M, int n, int half = 16) {
  return {params, LatticeWindow::make(-half, half - 1, 0), M, n};
}

ParticleOperator interior_state(const LatticeWindow& w, int lo, int hi, std::uint64_t seed) {
  CounterRng rng = CounterRng::stream(seed, 0);
  return random_density_matrix(w, lo, hi, rng);
}

double commutator_norm(const Eigen::SparseMatrix<cplx>& u, const Eigen::VectorXd& diag) {
  const Eigen::MatrixXcd dense = Eigen::MatrixXcd(u);
  const Eigen::MatrixXcd d = diag.cast<cplx>().asDiagonal();
  return (d * dense - dense * d).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("repeated interaction propagator: trivial cases") {
  const Eigen::MatrixXcd id = repeated_interaction_propagator(reservoir(kRef, 2, 0));
  CHECK((id - Eigen::MatrixXcd::Identity(id.rows(), id.cols())).cwiseAbs().maxCoeff() == 0.0);

  const ModelParams free(2.0, 1.0, 0.0, 1.0, 1.0);
  const ReservoirConfig cfg = reservoir(free, 2, 2, 4);
  const Eigen::MatrixXcd u = repeated_interaction_propagator(cfg);
  const Eigen::VectorXd e = total_energy_diagonal(cfg);
  double err = 0.0;
  for (int i = 0; i < u.rows(); ++i)
    for (int j = 0; j < u.cols(); ++j) {
      const cplx expect = (i == j) ? std::polar(1.0, -2.0 * e(i)) : cplx(0.0);
      err = std::max(err, std::abs(u(i, j) - expect));
    }
  CHECK(err < 1e-14);
}

TEST_CASE("reduced reservoir dynamics equals the channel") {
  const ReservoirConfig cfg = reservoir(kRef, 3, 3);
  const ParticleOperator rho = interior_state(cfg.window, -4, 4, 11);
  const Eigen::MatrixXcd u = repeated_interaction_propagator(cfg);
  const Eigen::MatrixXcd full = u * reservoir_initial_state(rho, cfg) * u.adjoint();
  const ParticleOperator reduced = trace_environment(full, cfg);
  ParticleOperator chan = rho;
  for (int s = 0; s < cfg.n; ++s) chan = apply_channel(chan, 0.0, kRef);
  CHECK(trace_norm(reduced.m - chan.m) <= 1e-10);
}

TEST_CASE("budget") {
  CHECK_THROWS_AS(check_budget(reservoir(kRef, 5, 1)), BudgetError);
  CHECK_THROWS_AS(check_budget({kRef, LatticeWindow::make(0, 64, 0), 2, 1}), BudgetError);
  CHECK_THROWS_AS(check_budget(reservoir(kRef, 2, 3)), std::invalid_argument);
  CHECK_NOTHROW(check_budget({kRef, LatticeWindow::make(0, 63, 0), 4, 4}));
}

TEST_CASE("entropy charge commutes with every step") {
  const ReservoirConfig cfg = reservoir(kRef, 3, 3);
  const Eigen::VectorXd q = entropy_charge_diagonal(cfg);
  for (int j = 0; j < cfg.M; ++j) CHECK(commutator_norm(interaction_step(cfg, j), q) <= 1e-12);

  const ModelParams matched(1.3, 1.3, 0.4, 0.9, 0.7);
  const ReservoirConfig eq = reservoir(matched, 3, 3);
  const Eigen::VectorXd h = total_energy_diagonal(eq);
  for (int j = 0; j < eq.M; ++j) CHECK(commutator_norm(interaction_step(eq, j), h) <= 1e-12);

  const Eigen::VectorXd h_ref = total_energy_diagonal(cfg);
  CHECK(commutator_norm(interaction_step(cfg, 0), h_ref) > 1e-3);
}

TEST_CASE("energy counting statistics") {
  const ReservoirConfig cfg = reservoir(kRef, 3, 3);
  const ParticleOperator rho = interior_state(cfg.window, -3, 3, 5);
  const EnergyFcs fcs = run_energy_fcs(cfg, rho);

  CHECK(std::abs(fcs.total() - 1.0) <= 1e-10);
  CHECK(fcs.off_diagonal_mass() == 0.0);
  for (const auto& [key, p] : fcs.prob) CHECK(key.first == key.second);

  for (double alpha : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    const double expect = std::pow(theta(alpha, kRef), cfg.n);
    CHECK(std::abs(fcs.moment(alpha) / expect - 1.0) <= 1e-8);
  }

  const TransportCoefficients tc = transport_coefficients(kRef);
  const double be = kRef.beta_e();
  CHECK(std::abs(fcs.mean_entropy() + be * tc.drift * cfg.n * kRef.tau()) <= 1e-8);
  CHECK(std::abs(fcs.variance_entropy() - be * be * 2.0 * tc.diffusion * kRef.tau() * cfg.n) <= 1e-8);
  CHECK(std::abs(fcs.mean_total_energy_change() / cfg.n - (kRef.E() - kRef.F()) * tc.drift * kRef.tau()) <= 1e-6);

  // P[Delta S = -s] = e^{s} P[Delta S = s] with Delta S = -beta E Delta k
  const auto law = fcs.entropy_law();
  for (const auto& [k, p] : law) {
    if (k <= 0) continue;
    const double s = -be * k;
    const double down = law.count(-k) ? law.at(-k) : 0.0;
    CHECK(std::abs(down - std::exp(s) * p) <= 1e-10 * std::max(down, 1e-300));
  }
}

TEST_CASE("energy statistics with matched energies conserve total energy") {
  const ModelParams matched(1.3, 1.3, 0.4, 0.9, 0.7);
  const ReservoirConfig cfg = reservoir(matched, 2, 2);
  const EnergyFcs fcs = run_energy_fcs(cfg, interior_state(cfg.window, -2, 2, 3));
  CHECK(std::abs(fcs.mean_total_energy_change()) <= 1e-12);
}

TEST_CASE("energy statistics do not depend on the number of atoms") {
  for (int n = 1; n <= 3; ++n) {
    const ReservoirConfig small = reservoir(kRef, n, n, 8);
    const ReservoirConfig large = reservoir(kRef, n + 1, n, 8);
    const ParticleOperator rho = interior_state(small.window, -2, 2, 17);
    const EnergyFcs a = run_energy_fcs(small, rho);
    const EnergyFcs b = run_energy_fcs(large, rho);
    REQUIRE(a.prob.size() == b.prob.size());
    for (const auto& [key, p] : a.prob) CHECK(std::abs(p - b.prob.at(key)) <= 1e-14);
  }
}

TEST_CASE("energy statistics reject edge states") {
  const ReservoirConfig cfg = reservoir(kRef, 3, 3, 6);
  CHECK_THROWS_AS(run_energy_fcs(cfg, interior_state(cfg.window, -5, 0, 1)), WindowError);
}

TEST_CASE("energy cgf") {
  CHECK(energy_cgf(7, 0.0, kRef) == 0.0);
  for (double a : {-0.7, 0.2, 1.4}) CHECK(std::abs(energy_cgf(5, 1.0 - a, kRef) - energy_cgf(5, a, kRef)) <= 1e-13);
  const int n = 10;
  const double h = 1e-4;
  const double second = (energy_cgf(n, h, kRef) - 2.0 * energy_cgf(n, 0.0, kRef) + energy_cgf(n, -h, kRef)) / (h * h);
  const TransportCoefficients tc = transport_coefficients(kRef);
  const double expect = kRef.beta_e() * kRef.beta_e() * 2.0 * tc.diffusion * kRef.tau() * n;
  CHECK(std::abs(second / expect - 1.0) <= 1e-5);
}

TEST_CASE("position statistics: zero interactions") {
  const LatticeWindow w = LatticeWindow::make(-30, 30, 20);
  const PositionFcs q = run_position_fcs(0, interior_state(w, -2, 2, 9), kRef);
  CHECK(std::abs(q.at(0) - 1.0) <= 1e-12);
  CHECK(std::abs(q.total() - 1.0) <= 1e-12);
}

TEST_CASE("position statistics against the walk and Bloch propagator") {
  const LatticeWindow w = LatticeWindow::make(-30, 30, 20);
  const ParticleOperator rho = interior_state(w, -2, 2, 21);
  for (int n : {1, 5, 20}) {
    const PositionFcs q = run_position_fcs(n, rho, kRef);
    const WalkLaw walk = walk_pmf_exact(n, kRef);
    const double z = 4.0 / kRef.F() * std::sin(0.5 * n * kRef.tau() * kRef.F());
    const BesselTable bloch = BesselTable::at(z, bessel_reach(z, 1e-20) + 1);
    double err = 0.0;
    for (int d = q.delta_min; d <= q.delta_max(); ++d) {
      double expect = 0.0;
      for (int j = -n; j <= n; ++j) expect += walk.prob(j) * bloch(d - j) * bloch(d - j);
      err = std::max(err, std::abs(q.at(d) - expect));
    }
    CHECK(err <= 1e-12);
  }
}

TEST_CASE("position statistics: covariant and literal evolutions agree") {
  const LatticeWindow w = LatticeWindow::make(-70, 70, 20);
  const ParticleOperator rho = interior_state(w, -3, 3, 4);
  for (int n : {0, 2, 4}) {
    const PositionFcs a = run_position_fcs(n, rho, kRef);
    const PositionFcs b = run_position_fcs_direct(n, rho, kRef, w);
    double err = 0.0;
    for (int d = b.delta_min; d <= b.delta_max(); ++d) err = std::max(err, std::abs(a.at(d) - b.at(d)));
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("position cgf") {
  const LatticeWindow w = LatticeWindow::make(-30, 30, 20);
  const ParticleOperator rho = interior_state(w, -2, 2, 8);
  CHECK(std::abs(position_cgf(20, 0.0, rho, kRef).value) <= 1e-12);

  const PositionFcs q = run_position_fcs(20, rho, kRef);
  for (double eta : {-0.5, 0.5, 1.0}) {
    const PositionCgf g = position_cgf(20, eta, rho, kRef);
    CHECK(std::abs(g.value - q.log_moment(eta)) <= 1e-8);
    CHECK(std::abs(g.limit - scgf(eta, kRef)) <= 1e-14);
  }
}

TEST_CASE("position statistics at n = 500") {
  const LatticeWindow w = LatticeWindow::make(-30, 30, 20);
  const ParticleOperator rho = interior_state(w, -2, 2, 2);
  const int n = 500;
  for (double eta : {-0.5, 0.5}) {
    const PositionCgf g = position_cgf(n, eta, rho, kRef);
    CHECK(std::abs(g.value / n - g.limit) <= 0.02);
  }

  const PositionFcs q = run_position_fcs(n, rho, kRef);
  const TransportCoefficients tc = transport_coefficients(kRef);
  CHECK(std::abs(q.mean() / (n * kRef.tau()) - tc.drift) <= 0.01);

  const double v = 0.1;
  const double delta = 0.02;
  const int lo = static_cast<int>(std::lround(n * (v - delta)));
  const int hi = static_cast<int>(std::lround(n * (v + delta)));
  const double ratio = std::log(q.mass(-hi, -lo) / q.mass(lo, hi)) / n;
  const double be = kRef.beta_e();
  CHECK(ratio >= -be * (v + delta));
  CHECK(ratio <= -be * (v - delta));
}
