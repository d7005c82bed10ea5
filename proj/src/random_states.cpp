#include "tbc/random_states.hpp"

#include "tbc/errors.hpp"

namespace tbc {

namespace {

Eigen::MatrixXcd gaussian(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
  Eigen::MatrixXcd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = cplx(re, im);
    }
  return g;
}

int checked_length(const LatticeWindow& w, int lo, int hi) {
  if (lo > hi || !w.contains(lo) || !w.contains(hi)) throw WindowError("random state support outside window");
  return hi - lo + 1;
}

}  // namespace

ParticleOperator random_operator(const LatticeWindow& w, int lo, int hi, CounterRng& rng) {
  const int len = checked_length(w, lo, hi);
  ParticleOperator op = ParticleOperator::zero(w);
  op.m.block(w.index(lo), w.index(lo), len, len) = gaussian(len, len, rng);
  return op;
}

ParticleOperator random_density_matrix(const LatticeWindow& w, int lo, int hi, CounterRng& rng, int rank) {
  const int len = checked_length(w, lo, hi);
  const Eigen::MatrixXcd g = gaussian(len, rank > 0 ? rank : len, rng);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  ParticleOperator op = ParticleOperator::zero(w);
  op.m.block(w.index(lo), w.index(lo), len, len) = 0.5 * (rho + rho.adjoint());
  return op;
}

JointOperator random_joint_state(const LatticeWindow& w, int lo, int hi, CounterRng& rng) {
  const int len = checked_length(w, lo, hi);
  const Eigen::MatrixXcd g = gaussian(2 * len, 2 * len, rng);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  JointOperator op = JointOperator::zero(w);
  const int start = JointOperator::index(w, lo, 0);
  op.m.block(start, start, 2 * len, 2 * len) = 0.5 * (rho + rho.adjoint());
  return op;
}

}  // namespace tbc
