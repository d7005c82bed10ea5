#pragma once

#include <vector>

#include "tbc/params.hpp"
#include "tbc/particle.hpp"

namespace tbc {

/// Jump probabilities of one interaction: the particle moves k -> k-1 with
/// p_minus, stays with p_zero, moves k -> k+1 with p_plus.
struct KrausTriple {
  double p_minus = 0.0;
  double p_zero = 1.0;
  double p_plus = 0.0;

  double sum() const { return p_minus + p_zero + p_plus; }
};

KrausTriple kraus_weights(const ModelParams& params);

/// theta(alpha) = (1 - p) + p cosh((1/2 - alpha) beta E) / cosh(beta E / 2)
double theta(double alpha, const ModelParams& params);

/// Coefficients of the three conjugations in
/// A -> down T^*AT + stay A + up TAT^*.
struct ShiftWeights {
  double down = 0.0;
  double stay = 1.0;
  double up = 0.0;

  double sum() const { return down + stay + up; }
};

/// (e^{alpha beta E} p_-, p_0, e^{-alpha beta E} p_+)
ShiftWeights deformed_weights(double alpha, const ModelParams& params);

/// (e^{-eta} p_-, p_0, e^{eta} p_+); equals deformed_weights(-eta / (beta E)) for beta E > 0.
ShiftWeights tilted_weights(double eta, const KrausTriple& triple);

/// A -> down T^*AT + stay A + up TAT^*. Throws WindowError unless A leaves
/// the outermost index on both sides empty.
ParticleOperator apply_shifts(const ParticleOperator& A, const ShiftWeights& w);

/// B -> down TBT^* + stay B + up T^*BT, the dual of apply_shifts. Entries
/// pushed past the window edge are dropped.
ParticleOperator apply_shifts_adjoint(const ParticleOperator& B, const ShiftWeights& w);

/// Interaction-picture map L~_alpha.
ParticleOperator apply_deformed(const ParticleOperator& dm, double alpha, const ModelParams& params);

/// L_alpha = L~_alpha o U with U the free evolution over one interaction.
ParticleOperator apply_channel(const ParticleOperator& dm, double alpha, const ModelParams& params);

/// L_alpha(A) = Tr_atom (I (x) rho_beta^alpha) e^{-i tau H} (A (x) rho_beta^{1-alpha}) e^{i tau H},
/// evaluated with the dense single-atom propagator.
ParticleOperator channel_oracle(const ParticleOperator& dm, double alpha, const ModelParams& params);

/// L*_alpha, the adjoint for the pairing Tr(B A).
ParticleOperator adjoint_apply(const ParticleOperator& B, double alpha, const ModelParams& params);

/// Complex conjugation in the position basis. The eigenfunctions psi_k(x)
/// are real, so this is entrywise conjugation of eigenbasis coefficients.
ParticleOperator time_reversal_conjugate(const ParticleOperator& A);

/// Distribution over the eigenbasis indices of a window.
struct IndexPmf {
  LatticeWindow window;
  std::vector<double> prob;

  double at(int k) const;
  double total() const;
};

enum class EdgePolicy { reject, truncate };

/// p_k -> p_+ p_{k-1} + p_0 p_k + p_- p_{k+1}. With EdgePolicy::reject the
/// outermost indices must carry no mass; with truncate, mass leaving the
/// window is discarded.
IndexPmf master_step(const IndexPmf& pmf, const ModelParams& params, EdgePolicy policy = EdgePolicy::reject);

/// Matrix of master_step with EdgePolicy::truncate.
Eigen::MatrixXd master_matrix(const LatticeWindow& w, const ModelParams& params);

/// Diagonal of a particle operator as an index distribution.
IndexPmf diagonal_pmf(const ParticleOperator& dm);

}  // namespace tbc
