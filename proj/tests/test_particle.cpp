#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tbc/errors.hpp"
#include "tbc/particle.hpp"
#include "tbc/random_states.hpp"

using namespace tbc;

namespace {

Eigen::VectorXd sorted_eigenvalues(const ParticleOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("window sizing") {
  const LatticeWindow w = LatticeWindow::for_interactions(-2, 3, 10, 8, 5);
  CHECK(w.k_min == -20);
  CHECK(w.k_max == 21);
  CHECK(w.x_min == -25);
  CHECK(w.x_max == 26);
  CHECK(w.size() == 42);
  CHECK(w.k_of(w.index(7)) == 7);
  CHECK_THROWS_AS(LatticeWindow::make(3, 2, 0), WindowError);
}

TEST_CASE("free evolution of diagonal states and the Bloch period") {
  const LatticeWindow w = LatticeWindow::make(-10, 10, 0);
  CounterRng rng = CounterRng::stream(1, 0);
  ParticleOperator diag = ParticleOperator::zero(w);
  for (int i = 0; i < w.size(); ++i) diag.m(i, i) = rng.uniform();
  CHECK(free_evolve(diag, 3.7, 0.8).m == diag.m);

  const ParticleOperator rho = random_density_matrix(w, -6, 6, rng);
  const double F = 0.8;
  const ParticleOperator back = free_evolve(rho, 2.0 * std::numbers::pi / F, F);
  CHECK((back.m - rho.m).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("|psi_0><psi_1| picks up exp(-itF)") {
  const LatticeWindow w = LatticeWindow::make(-3, 3, 0);
  const double t = 0.9, F = 1.3;
  const ParticleOperator op = free_evolve(basis_operator(w, 0, 1), t, F);
  CHECK(std::abs(op(0, 1) - std::polar(1.0, -t * F)) < 1e-15);
  CHECK(std::abs(op.trace()) == 0.0);
}

TEST_CASE("free evolution preserves Hermiticity, trace and spectrum") {
  const LatticeWindow w = LatticeWindow::make(-12, 12, 0);
  CounterRng rng = CounterRng::stream(2, 0);
  for (int rep = 0; rep < 5; ++rep) {
    const ParticleOperator rho = random_density_matrix(w, -10, 10, rng, 3);
    const ParticleOperator out = free_evolve(rho, 0.37 + rep, 1.1);
    CHECK(out.is_hermitian(1e-12));
    CHECK(std::abs(out.trace() - rho.trace()) < 1e-12);
    CHECK((sorted_eigenvalues(out) - sorted_eigenvalues(rho)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(out.min_eigenvalue() >= -1e-10);
  }
}

TEST_CASE("position distribution of an eigenstate is the squared Bessel profile") {
  const double F = 0.7;
  const BesselTable table = BesselTable::for_force(F, bessel_reach(2.0 / F, 1e-18));
  const LatticeWindow w = LatticeWindow::make(-5, 5, table.range());
  const PositionPmf pmf = position_distribution(basis_operator(w, 2, 2), table);
  for (int x = pmf.x_min; x <= pmf.x_max(); ++x) {
    const double j = std::cyl_bessel_j(static_cast<double>(std::abs(2 - x)), 2.0 / F);
    CHECK(std::abs(pmf.at(x) - j * j) < 1e-13);
  }
  CHECK(std::abs(pmf.total() - 1.0) < 1e-8);
}

TEST_CASE("mean position of psi_0 equals the direct Bessel sum") {
  const double F = 0.5;
  const BesselTable table = BesselTable::for_force(F, bessel_reach(2.0 / F, 1e-18));
  const LatticeWindow w = LatticeWindow::make(-2, 2, table.range());
  const PositionPmf pmf = position_distribution(basis_operator(w, 0, 0), table);
  double direct = 0.0, mass = 0.0;
  for (int x = -60; x <= 60; ++x) {
    const double j = std::cyl_bessel_j(static_cast<double>(std::abs(x)), 2.0 / F);
    direct += x * j * j;
    mass += j * j;
  }
  CHECK(std::abs(pmf.mean() - direct / mass) < 1e-12);
}

TEST_CASE("leakage outside the position range is a window error") {
  const BesselTable table = BesselTable::for_force(0.5, bessel_reach(4.0, 1e-18));
  const LatticeWindow narrow = LatticeWindow::make(-5, 5, 1);
  CHECK_THROWS_AS(position_distribution(basis_operator(narrow, 0, 0), table), WindowError);
}

TEST_CASE("position operator in the eigenbasis matches the Bessel transform") {
  const double F = 0.9;
  const BesselTable table = BesselTable::for_force(F, bessel_reach(2.0 / F, 1e-18));
  const LatticeWindow w = LatticeWindow::make(-15, 15, table.range());
  const ParticleOperator x = position_operator(w, F);
  const ParticleOperator xt = position_operator_by_transform(w, table);
  CHECK((x.m - xt.m).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mean position stays within the Bloch amplitude") {
  const double F = 0.6;
  const BesselTable table = BesselTable::for_force(F, bessel_reach(2.0 / F, 1e-18));
  const LatticeWindow w = LatticeWindow::make(-12, 12, table.range());
  CounterRng rng = CounterRng::stream(3, 0);
  const ParticleOperator rho = random_density_matrix(w, -6, 6, rng);
  const double m0 = position_distribution(rho, table).mean();
  for (double t = 0.0; t <= 30.0; t += 0.25) {
    const double mt = position_distribution(free_evolve(rho, t, F), table).mean();
    CHECK(std::abs(mt - m0) <= 8.0 / F);
  }
}

TEST_CASE("Bloch offset reproduces exp(itH_p) X exp(-itH_p) - X") {
  const double F = 0.75;
  const LatticeWindow w = LatticeWindow::make(-10, 10, 0);
  const ParticleOperator x = position_operator(w, F);
  for (double t : {0.3, 1.0, 4.2}) {
    const ParticleOperator heis = free_evolve(x, -t, F);
    const ParticleOperator off = bloch_offset_at(t, F).as_operator(w);
    CHECK(((heis.m - x.m) - off.m).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("Bloch offset values") {
  const ModelParams period(2.0, 2.0 * std::numbers::pi, 0.5, 1.0, 1.0);
  const BlochOffset zero = bloch_offset(1, period);
  CHECK(std::abs(zero.amplitude) < 1e-15);

  const ModelParams p(2.0, std::numbers::pi, 0.5, 1.0, 1.0);
  const BlochOffset b = bloch_offset(1, p);
  CHECK(b.amplitude == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-15));
  for (double xi : {-2.0, 0.0, 0.7, 3.0}) {
    const double direct = (4.0 / std::numbers::pi) * std::sin(std::numbers::pi / 2) * std::sin(xi + std::numbers::pi / 2);
    CHECK(std::abs(b.value(xi) - direct) < 1e-14);
    const cplx fourier = b.coeff_tstar * std::polar(1.0, xi) + b.coeff_t * std::polar(1.0, -xi);
    CHECK(std::abs(fourier - direct) < 1e-14);
  }

  const LatticeWindow w = LatticeWindow::make(-20, 20, 0);
  for (int n = 1; n <= 12; ++n) {
    const ModelParams q(1.0, 0.83, 0.2, 0.7, 1.0);
    const ParticleOperator op = bloch_offset(n, q).as_operator(w);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.m);
    CHECK(svd.singularValues()(0) <= 4.0 / 0.83 + 1e-12);
  }
}

TEST_CASE("support bounds and interior checks") {
  const LatticeWindow w = LatticeWindow::make(-5, 5, 0);
  CHECK_FALSE(support_bounds(ParticleOperator::zero(w)).has_value());
  const ParticleOperator op = basis_operator(w, -2, 3);
  const auto s = support_bounds(op);
  REQUIRE(s.has_value());
  CHECK(s->first == -2);
  CHECK(s->second == 3);
  CHECK_NOTHROW(require_interior(op, 2, "test"));
  CHECK_THROWS_AS(require_interior(op, 3, "test"), WindowError);
}

TEST_CASE("model parameters reject F <= 0") {
  CHECK_THROWS_AS(ModelParams(1.0, 0.0, 0.5, 1.0, 1.0), InvalidParams);
  CHECK_THROWS_AS(ModelParams(1.0, -1.0, 0.5, 1.0, 1.0), InvalidParams);
  CHECK_THROWS_AS(ModelParams(1.0, 1.0, 0.5, 0.0, 1.0), InvalidParams);
}

TEST_CASE("derived parameters") {
  const DerivedParams d = derive_params(ModelParams(2.0, 1.0, 0.5, 1.0, 1.0));
  CHECK(d.omega0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(d.p - 0.21101407630865635) < 1e-15);
  CHECK(std::abs(d.cos2theta * d.cos2theta + d.sin2theta * d.sin2theta - 1.0) < 1e-14);
  CHECK(std::abs(d.cos_theta * d.cos_theta - d.sin_theta * d.sin_theta - d.cos2theta) < 1e-14);
  CHECK(std::abs(2.0 * d.cos_theta * d.sin_theta - d.sin2theta) < 1e-14);
  CHECK(d.zbeta == doctest::Approx(1.0 + std::exp(-2.0)));
  CHECK(d.bloch_freq == 1.0);
  CHECK_FALSE(d.resonant);

  const DerivedParams e = derive_params(ModelParams(0.8, 0.8, 0.3, 1.7, 1.0));
  CHECK(e.omega0 == doctest::Approx(0.6));
  CHECK(e.p == doctest::Approx(std::pow(std::sin(0.3 * 1.7), 2)).epsilon(1e-14));

  const DerivedParams z = derive_params(ModelParams(2.0, 1.0, 0.0, 1.0, 1.0));
  CHECK(z.p == 0.0);
  CHECK(z.resonant);
  CHECK(z.cos_theta == 1.0);
  CHECK(z.sin_theta == 0.0);

  const DerivedParams below = derive_params(ModelParams(0.5, 1.0, 0.0, 1.0, 1.0));
  CHECK(below.cos_theta == 0.0);
  CHECK(below.sin_theta == 1.0);

  const DerivedParams neg = derive_params(ModelParams(0.2, 1.0, -0.3, 1.0, 1.0));
  CHECK(std::abs(2.0 * neg.cos_theta * neg.sin_theta - neg.sin2theta) < 1e-14);

  const double tau = 2.0 * std::numbers::pi / std::sqrt(2.0);
  const DerivedParams r = derive_params(ModelParams(2.0, 1.0, 0.5, tau, 1.0));
  CHECK(r.p < 1e-14);
  CHECK(r.resonant);
}
