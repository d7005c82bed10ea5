#include <cmath>

#include "doctest.h"
#include "tbc/channel.hpp"
#include "tbc/errors.hpp"
#include "tbc/random_states.hpp"

using namespace tbc;

namespace {

const ModelParams kRef(2.0, 1.0, 0.5, 1.0, 1.0);

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

double pair(const ParticleOperator& b, const ParticleOperator& a) { return 0.0 + (b.m * a.m).trace().real(); }
cplx pairing(const ParticleOperator& b, const ParticleOperator& a) { return (b.m * a.m).trace(); }

}  // namespace

TEST_CASE("Kraus weights") {
  const KrausTriple k = kraus_weights(kRef);
  CHECK(std::abs(k.p_plus - 0.18586058182486645) < 1e-15);
  CHECK(std::abs(k.p_minus - 0.02515349448378993) < 1e-15);
  CHECK(std::abs(k.sum() - 1.0) <= 1e-14);
  CHECK(std::abs(k.p_minus - std::exp(-2.0) * k.p_plus) < 1e-16);
  const double p = derive_params(kRef).p;
  CHECK(std::abs(k.p_plus - k.p_minus - p * std::tanh(1.0)) < 1e-15);
  CHECK(k.p_zero == 1.0 - p);

  const KrausTriple hot = kraus_weights(ModelParams(2.0, 1.0, 0.5, 1.0, 0.0));
  CHECK(hot.p_plus == hot.p_minus);
  CHECK(hot.p_plus == 0.5 * p);

  const KrausTriple cold = kraus_weights(ModelParams(2.0, 1.0, 0.5, 1.0, 400.0));
  CHECK(cold.p_minus == 0.0);
  CHECK(cold.p_plus == p);
}

TEST_CASE("theta identities") {
  CHECK(std::abs(theta(0.0, kRef) - 1.0) <= 1e-15);
  CHECK(std::abs(theta(1.0, kRef) - 1.0) <= 1e-15);
  CHECK(std::abs(theta(0.5, kRef) - 0.9257344976464056) < 1e-15);
  const double p = derive_params(kRef).p;
  CHECK(std::abs(theta(0.5, kRef) - (1.0 - p + p / std::cosh(1.0))) < 1e-15);
  const KrausTriple k = kraus_weights(kRef);
  for (double a = -2.0; a <= 3.0; a += 0.05) {
    CHECK(std::abs(theta(1.0 - a, kRef) - theta(a, kRef)) <= 1e-12);
    const double kraus = std::exp(a * 2.0) * k.p_minus + k.p_zero + std::exp(-a * 2.0) * k.p_plus;
    CHECK(std::abs(kraus - theta(a, kRef)) <= 1e-13 * theta(a, kRef));
    CHECK(std::abs(deformed_weights(a, kRef).sum() - theta(a, kRef)) <= 1e-13 * theta(a, kRef));
  }
  const ModelParams big(40.0, 1.0, 0.5, 1.0, 30.0);
  CHECK(std::isfinite(theta(0.25, big)));
  CHECK(std::abs(theta(0.0, big) - 1.0) < 1e-14);
}

TEST_CASE("deformed map on a basis projector is the trinomial mixture") {
  const LatticeWindow w = LatticeWindow::make(-4, 4, 0);
  const KrausTriple k = kraus_weights(kRef);
  const ParticleOperator out = apply_deformed(basis_operator(w, 1, 1), 0.0, kRef);
  CHECK(out(0, 0).real() == k.p_minus);
  CHECK(out(1, 1).real() == k.p_zero);
  CHECK(out(2, 2).real() == k.p_plus);
  CHECK(std::abs(out.trace() - 1.0) < 1e-15);
  CHECK(max_abs(apply_channel(basis_operator(w, 1, 1), 0.0, kRef).m - out.m) == 0.0);
}

TEST_CASE("trace scales by theta and alpha = 0 is completely positive") {
  const LatticeWindow w = LatticeWindow::make(-20, 20, 0);
  CounterRng rng = CounterRng::stream(21, 0);
  for (double a : {-1.0, 0.0, 0.3, 1.0, 2.5}) {
    const ParticleOperator A = random_operator(w, -15, 15, rng);
    CHECK(std::abs(apply_deformed(A, a, kRef).trace() - theta(a, kRef) * A.trace()) < 1e-12 * std::abs(A.trace()) + 1e-13);
  }
  for (int rep = 0; rep < 100; ++rep) {
    const ParticleOperator rho = random_density_matrix(w, -15, 15, rng, 1 + rep % 5);
    const ParticleOperator out = apply_channel(rho, 0.0, kRef);
    CHECK(out.min_eigenvalue() >= -1e-10);
    CHECK(std::abs(out.trace() - 1.0) < 1e-12);
    CHECK(out.is_hermitian(1e-12));
  }
}

TEST_CASE("apply_channel agrees with the partial-trace oracle") {
  const LatticeWindow w = LatticeWindow::make(-16, 16, 0);
  CounterRng rng = CounterRng::stream(22, 0);
  for (const ModelParams& p : {kRef, ModelParams(0.3, 1.1, -0.6, 0.8, 2.0), ModelParams(1.0, 1.0, 0.4, 1.3, 0.0)}) {
    for (double a : {0.0, 0.3, 1.0, -0.7}) {
      for (int rep = 0; rep < 3; ++rep) {
        const ParticleOperator rho = random_density_matrix(w, -10, 10, rng);
        const ParticleOperator fast = apply_channel(rho, a, p);
        const ParticleOperator slow = channel_oracle(rho, a, p);
        CHECK(trace_norm(fast.m - slow.m) <= 1e-10);
      }
    }
  }
  const ParticleOperator rho = random_density_matrix(w, -10, 10, rng);
  const ParticleOperator out = channel_oracle(rho, 0.0, kRef);
  CHECK(out.min_eigenvalue() >= -1e-10);
  CHECK(std::abs(out.trace() - 1.0) < 1e-12);
}

TEST_CASE("the channel commutes with free evolution") {
  const LatticeWindow w = LatticeWindow::make(-16, 16, 0);
  CounterRng rng = CounterRng::stream(23, 0);
  const ParticleOperator rho = random_density_matrix(w, -10, 10, rng);
  for (double t : {0.4, 2.0}) {
    const ParticleOperator a = free_evolve(apply_channel(rho, 0.0, kRef), t, kRef.F());
    const ParticleOperator b = apply_channel(free_evolve(rho, t, kRef.F()), 0.0, kRef);
    CHECK(max_abs(a.m - b.m) <= 1e-12);
  }
}

TEST_CASE("adjoint duality and L*(I) = theta I") {
  const LatticeWindow w = LatticeWindow::make(-16, 16, 0);
  CounterRng rng = CounterRng::stream(24, 0);
  for (double a : {0.0, 0.3, 1.0, 2.0}) {
    for (int rep = 0; rep < 4; ++rep) {
      const ParticleOperator A = random_operator(w, -10, 10, rng);
      const ParticleOperator B = random_operator(w, -16, 16, rng);
      const cplx lhs = pairing(B, apply_channel(A, a, kRef));
      const cplx rhs = pairing(adjoint_apply(B, a, kRef), A);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
    }
    const ParticleOperator img = adjoint_apply(ParticleOperator::identity(w), a, kRef);
    const Eigen::Index n = w.size();
    const Eigen::MatrixXcd interior = img.m.block(1, 1, n - 2, n - 2);
    CHECK(max_abs(interior - theta(a, kRef) * Eigen::MatrixXcd::Identity(n - 2, n - 2)) <= 1e-15);
  }
  for (int rep = 0; rep < 10; ++rep) {
    const ParticleOperator B = random_density_matrix(w, -16, 16, rng);
    CHECK(adjoint_apply(B, 0.0, kRef).min_eigenvalue() >= -1e-12);
  }
  CHECK(pair(ParticleOperator::identity(w), ParticleOperator::identity(w)) == w.size());
}

TEST_CASE("time reversal") {
  const LatticeWindow w = LatticeWindow::make(-16, 16, 0);
  CounterRng rng = CounterRng::stream(25, 0);
  const ParticleOperator A = random_operator(w, -10, 10, rng);
  CHECK(time_reversal_conjugate(time_reversal_conjugate(A)).m == A.m);
  const ParticleOperator x = position_operator(w, 0.8);
  CHECK(time_reversal_conjugate(x).m == x.m);
  for (double a : {0.0, 0.5, 1.0}) {
    for (int rep = 0; rep < 3; ++rep) {
      const ParticleOperator B = random_operator(w, -10, 10, rng);
      const ParticleOperator lhs = adjoint_apply(B, a, kRef);
      const ParticleOperator rhs = time_reversal_conjugate(apply_channel(time_reversal_conjugate(B), 1.0 - a, kRef));
      CHECK(max_abs(lhs.m - rhs.m) <= 1e-10);
    }
  }
}

TEST_CASE("gauge sectors are invariant") {
  const LatticeWindow w = LatticeWindow::make(-12, 12, 0);
  CounterRng rng = CounterRng::stream(26, 0);
  const ParticleOperator A = random_operator(w, -8, 8, rng);
  for (int d : {-3, 0, 2}) {
    ParticleOperator sector = ParticleOperator::zero(w);
    for (int i = 0; i < w.size(); ++i) {
      const int j = i + d;
      if (j >= 0 && j < w.size()) sector.m(i, j) = A.m(i, j);
    }
    for (double a : {0.0, 0.7}) {
      const ParticleOperator out = apply_channel(sector, a, kRef);
      for (int i = 0; i < w.size(); ++i)
        for (int j = 0; j < w.size(); ++j)
          if (j - i != d) CHECK(out.m(i, j) == cplx(0.0));
    }
  }
}

TEST_CASE("power iteration grows at rate theta") {
  const LatticeWindow w = LatticeWindow::make(-40, 40, 0);
  CounterRng rng = CounterRng::stream(27, 0);
  ParticleOperator rho = random_density_matrix(w, -2, 2, rng);
  for (double a : {-0.5, 0.3, 1.5}) {
    ParticleOperator cur = rho;
    double rate = 0.0;
    for (int n = 0; n < 30; ++n) {
      const ParticleOperator next = apply_channel(cur, a, kRef);
      rate = next.trace().real() / cur.trace().real() / theta(a, kRef);
      cur = next;
      cur.m /= theta(a, kRef);
    }
    CHECK(std::abs(rate - 1.0) <= 1e-8);
  }
}

TEST_CASE("channel rejects edge support") {
  const LatticeWindow w = LatticeWindow::make(-4, 4, 0);
  CHECK_THROWS_AS(apply_deformed(basis_operator(w, 4, 4), 0.0, kRef), WindowError);
  CHECK_THROWS_AS(apply_channel(basis_operator(w, -4, 0), 0.0, kRef), WindowError);
  CHECK_THROWS_AS(channel_oracle(basis_operator(w, -4, -4), 0.0, kRef), WindowError);
}

TEST_CASE("master equation") {
  const LatticeWindow w = LatticeWindow::make(-10, 10, 0);
  const KrausTriple k = kraus_weights(kRef);
  IndexPmf delta{w, std::vector<double>(w.size(), 0.0)};
  delta.prob[w.index(0)] = 1.0;
  const IndexPmf one = master_step(delta, kRef);
  CHECK(one.at(-1) == k.p_minus);
  CHECK(one.at(0) == k.p_zero);
  CHECK(one.at(1) == k.p_plus);

  CounterRng rng = CounterRng::stream(28, 0);
  ParticleOperator diag = ParticleOperator::zero(w);
  for (int kk = -6; kk <= 6; ++kk) diag.m(w.index(kk), w.index(kk)) = rng.uniform();
  diag.m /= diag.trace();
  const IndexPmf via_master = master_step(diagonal_pmf(diag), kRef);
  const IndexPmf via_channel = diagonal_pmf(apply_channel(diag, 0.0, kRef));
  for (int kk = w.k_min; kk <= w.k_max; ++kk) CHECK(std::abs(via_master.at(kk) - via_channel.at(kk)) <= 1e-14);

  IndexPmf edge = delta;
  edge.prob.back() = 0.1;
  CHECK_THROWS_AS(master_step(edge, kRef), WindowError);
  CHECK_NOTHROW(master_step(edge, kRef, EdgePolicy::truncate));
}

TEST_CASE("a + b exp(beta E k) is preserved in the interior") {
  const LatticeWindow w = LatticeWindow::make(-6, 6, 0);
  const double be = kRef.beta_e();
  IndexPmf f{w, std::vector<double>(w.size())};
  for (int kk = w.k_min; kk <= w.k_max; ++kk) f.prob[w.index(kk)] = 0.3 + 0.002 * std::exp(be * kk);
  const IndexPmf g = master_step(f, kRef, EdgePolicy::truncate);
  for (int kk = w.k_min + 1; kk < w.k_max; ++kk) {
    CHECK(std::abs(g.at(kk) - f.at(kk)) <= 1e-12 * f.at(kk));
  }
}

TEST_CASE("the master equation has no stationary probability vector") {
  for (int size : {3, 5, 20}) {
    const LatticeWindow w = LatticeWindow::make(0, size - 1, 0);
    for (const ModelParams& p : {kRef, ModelParams(1.0, 2.0, 0.9, 0.6, 0.3)}) {
      const Eigen::MatrixXd m = master_matrix(w, p) - Eigen::MatrixXd::Identity(size, size);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      CHECK(svd.singularValues().minCoeff() > 1e-6);
    }
  }
}
