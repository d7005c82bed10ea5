#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "tbc/bessel.hpp"
#include "tbc/channel.hpp"
#include "tbc/params.hpp"
#include "tbc/particle.hpp"

namespace tbc {

/// Finite reservoir of M atoms coupled one after the other to the particle.
/// Joint basis psi_k (x) |a_0 ... a_{M-1}> with index window.index(k) * 2^M + bits,
/// atom j stored in bit j.
struct ReservoirConfig {
  ModelParams params;
  LatticeWindow window;
  int M = 1;
  int n = 1;

  int dim() const { return window.size() << M; }
  int index(int k, unsigned bits) const { return (window.index(k) << M) | static_cast<int>(bits); }
};

/// Largest brute-force reservoir accepted: window size and atom count.
inline constexpr int kMaxBruteWindow = 64;
inline constexpr int kMaxBruteAtoms = 4;

/// Throws BudgetError when the configuration exceeds the brute-force budget
/// and std::invalid_argument when n > M or n < 0.
void check_budget(const ReservoirConfig& cfg);

/// exp(-i tau H~_j) for the step coupling atom j: the single-atom propagator
/// on particle (x) atom j, with free phases exp(-i tau E) for each excited idle atom.
Eigen::SparseMatrix<cplx> interaction_step(const ReservoirConfig& cfg, int j);

/// U(n tau, 0) = exp(-i tau H~_n) ... exp(-i tau H~_1) as a dense matrix.
Eigen::MatrixXcd repeated_interaction_propagator(const ReservoirConfig& cfg);

/// rho_p (x) rho_beta^{(x) M}
Eigen::MatrixXcd reservoir_initial_state(const ParticleOperator& rho_p, const ReservoirConfig& cfg);

/// Partial trace over all atoms.
ParticleOperator trace_environment(const Eigen::MatrixXcd& full, const ReservoirConfig& cfg);

/// Diagonal of H_p + H_env in the joint basis.
Eigen::VectorXd total_energy_diagonal(const ReservoirConfig& cfg);

/// Diagonal of beta^* H_p + beta H_env, beta^* = beta E / F.
Eigen::VectorXd entropy_charge_diagonal(const ReservoirConfig& cfg);

/// Joint law of the increments (Delta k, Delta m) of the eigenbasis index of
/// the particle and of the number of excited atoms, from the two-time
/// measurement of (H_p, H_env). Delta S_p = -beta E Delta k and
/// Delta S_env = -beta E Delta m.
struct EnergyFcs {
  ReservoirConfig cfg;
  std::map<std::pair<int, int>, double> prob;  // (Delta k, Delta m) -> probability

  double total() const;
  /// Mass on outcomes with Delta S_p != Delta S_env.
  double off_diagonal_mass() const;
  /// P[Delta S = s] on the diagonal, keyed by Delta k.
  std::map<int, double> entropy_law() const;
  /// E[exp(alpha Delta S_p)]
  double moment(double alpha) const;
  double mean_entropy() const;
  double variance_entropy() const;
  /// E[Delta(H_p + H_env)]
  double mean_total_energy_change() const;
};

/// Throws WindowError unless rho_p keeps n + 1 empty sites to both window edges.
EnergyFcs run_energy_fcs(const ReservoirConfig& cfg, const ParticleOperator& rho_p);

/// n log theta(alpha)
double energy_cgf(int n, double alpha, const ModelParams& params);

/// Law of the position increment Delta X_n over the integers.
struct PositionFcs {
  int n = 0;
  int delta_min = 0;
  std::vector<double> prob;  // prob[i] = Q[Delta X = delta_min + i]

  double at(int delta) const;
  int delta_max() const { return delta_min + static_cast<int>(prob.size()) - 1; }
  double total() const;
  double mean() const;
  double variance() const;
  /// Q[Delta X in [lo, hi]]
  double mass(int lo, int hi) const;
  /// log E[exp(eta Delta X)]
  double log_moment(double eta) const;
};

/// Bessel table and window sizes shared by the position computations.
struct PositionGrid {
  BesselTable table;
  int reach = 0;  // profile reach R: |psi_k(x)| < 1e-18 for |k - x| > R
  static PositionGrid for_force(double F);
};

/// Two-time measurement of X with n channel steps in between. The law of
/// Delta X does not depend on the first outcome (the dynamics commutes with
/// lattice translations), so a single conditional evolution from x = 0 is
/// used. rho_p only needs to be a valid interior state.
PositionFcs run_position_fcs(int n, const ParticleOperator& rho_p, const ModelParams& params);

/// Same law computed literally: dephase rho_p in the position basis, evolve
/// every first outcome x separately on `window` and collect x' - x.
PositionFcs run_position_fcs_direct(int n, const ParticleOperator& rho_p, const ModelParams& params,
                                    const LatticeWindow& window);

struct PositionCgf {
  double value = 0.0;  // g_n(eta) = log E[exp(eta Delta X_n)]
  double limit = 0.0;  // lim g_n / n = log theta(-eta / beta E)
};

/// g_n(eta) = log Tr[L~^n_{-eta/beta E}(rho~) W_n] with rho~ the
/// position-dephased state and W_n = e^{-eta X/2} e^{i n tau H_p} e^{eta X} e^{-i n tau H_p} e^{-eta X/2}.
PositionCgf position_cgf(int n, double eta, const ParticleOperator& rho_p, const ModelParams& params);

}  // namespace tbc
