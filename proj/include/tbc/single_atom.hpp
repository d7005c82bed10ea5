#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tbc/params.hpp"
#include "tbc/particle.hpp"

namespace tbc {

/// Thermal state of one two-level atom, rho_beta = diag(w_ground, w_excited)
/// in the basis {|0>, |1>}.
struct AtomGibbs {
  double beta_e = 0.0;
  double w_ground = 0.5;
  double w_excited = 0.5;

  static AtomGibbs of(const ModelParams& params);
  /// rho_beta^s as a diagonal 2x2 matrix (s may be any real power).
  Eigen::Matrix2d power(double s) const;
};

/// Operator on particle (x) atom. Basis index 2 * window.index(k) + a, with
/// a = 0 the atomic ground state and a = 1 the excited state.
struct JointOperator {
  LatticeWindow window;
  Eigen::MatrixXcd m;

  static JointOperator zero(const LatticeWindow& w);
  static int index(const LatticeWindow& w, int k, int a) { return 2 * w.index(k) + a; }

  cplx trace() const { return m.trace(); }
  bool is_hermitian(double tol) const;
  double min_eigenvalue() const;
};

JointOperator tensor(const ParticleOperator& a, const Eigen::Matrix2cd& atom);
ParticleOperator partial_trace_atom(const JointOperator& op);
/// Tr_atom[(I (x) atom) op]
ParticleOperator partial_trace_atom(const JointOperator& op, const Eigen::Matrix2cd& atom);

/// A block of H invariant under the number operator N = n_p + b^*b, where the
/// index shift of T counts as one excitation. Interior sectors pair
/// psi_k (x) |0> with psi_{k+1} (x) |1>; at the window edges one partner is
/// missing and the block is 1x1.
struct SectorBlock {
  int k = 0;           // eigenbasis index of the ground-state member
  int sector = 0;      // N eigenvalue label (-k)
  int dim = 2;         // 2 for interior sectors, 1 at the edges
  int first = 0;       // joint index of the first basis state
  int second = -1;     // joint index of the second basis state, -1 for dim 1
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();  // only h(0,0) is used when dim == 1
};

std::vector<SectorBlock> hamiltonian_blocks(const ModelParams& params, const LatticeWindow& w);

/// Dense H = H_p + E b^*b + lambda (T b^* + T^* b) on the joint window.
Eigen::MatrixXd hamiltonian_matrix(const ModelParams& params, const LatticeWindow& w);

/// exp(-itH) from the closed diagonalization H = U (H_p + omega0 (b^*b - 1/2) + (E-F)/2) U^*.
/// Exact on states without weight on the two edge basis states.
Eigen::MatrixXcd propagator_closed(const ModelParams& params, const LatticeWindow& w, double t);

/// exp(-itH) assembled from a numerical eigendecomposition of each sector block.
Eigen::MatrixXcd propagator_oracle(const ModelParams& params, const LatticeWindow& w, double t);

/// rho -> exp(-itH) rho exp(itH). Both throw WindowError when the state has
/// weight on an edge basis state (psi_{k_max} (x) |0> or psi_{k_min} (x) |1>).
JointOperator propagate_closed(const JointOperator& state, double t, const ModelParams& params);
JointOperator propagate_oracle(const JointOperator& state, double t, const ModelParams& params);

/// exp(-itH)(A (x) rho_beta)exp(itH) = a (x) b^*b + b (x) b + b_star (x) b^* + c (x) bb^*
struct HeisenbergMaps {
  ParticleOperator a;
  ParticleOperator b;
  ParticleOperator b_star;
  ParticleOperator c;

  JointOperator assemble() const;
};

HeisenbergMaps heisenberg_maps(const ParticleOperator& A, double t, const ModelParams& params);

/// exp(itH) (X (x) I) exp(-itH) on the joint window.
JointOperator position_heisenberg(double t, const LatticeWindow& w, const ModelParams& params);

/// <X(t)> for the joint initial state, from the closed Heisenberg form.
double position_expectation(double t, const JointOperator& initial, const ModelParams& params);

/// sup_t |<X(t)> - <X(0)>| allowed by the closed form.
double position_excursion_bound(const ModelParams& params);

}  // namespace tbc
