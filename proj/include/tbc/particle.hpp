#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tbc/bessel.hpp"
#include "tbc/params.hpp"

namespace tbc {

using cplx = std::complex<double>;

/// Truncation of l^2(Z) to the Wannier-Stark indices k_min..k_max. The
/// position range x_min..x_max is the set of sites that eigenstates inside
/// the window can reach through their Bessel profile.
struct LatticeWindow {
  int k_min = 0;
  int k_max = 0;
  int x_min = 0;
  int x_max = 0;

  static LatticeWindow make(int k_min, int k_max, int x_pad);

  /// Window holding support [lo, hi] after n jumps (each moves support by at
  /// most one index) with `margin` spare sites on both sides.
  static LatticeWindow for_interactions(int lo, int hi, int n, int margin, int x_pad);

  int size() const { return k_max - k_min + 1; }
  int index(int k) const { return k - k_min; }
  int k_of(int index) const { return index + k_min; }
  bool contains(int k) const { return k >= k_min && k <= k_max; }

  friend bool operator==(const LatticeWindow&, const LatticeWindow&) = default;
};

/// Operator on the particle space, expressed in the eigenbasis {psi_k} of H_p
/// restricted to a window: A = sum m(k, k') |psi_k><psi_k'|. Density matrices
/// are ParticleOperators with unit trace.
struct ParticleOperator {
  LatticeWindow window;
  Eigen::MatrixXcd m;

  static ParticleOperator zero(const LatticeWindow& w);
  static ParticleOperator identity(const LatticeWindow& w);

  cplx operator()(int k, int kp) const { return m(window.index(k), window.index(kp)); }
  cplx trace() const { return m.trace(); }

  ParticleOperator adjoint() const { return {window, m.adjoint()}; }

  bool is_hermitian(double tol) const;
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;
};

/// |psi_k><psi_kp|
ParticleOperator basis_operator(const LatticeWindow& w, int k, int kp);

/// Inclusive range of eigenbasis indices carrying a nonzero row or column
/// entry; nullopt for the zero operator.
std::optional<std::pair<int, int>> support_bounds(const ParticleOperator& op);

/// Throws WindowError unless the support keeps `margin` empty sites to both
/// window edges.
void require_interior(const ParticleOperator& op, int margin, const char* what);

/// rho_{kk'} -> exp(-i t (E_k - E_k')) rho_{kk'} with E_k = 2 - F k.
ParticleOperator free_evolve(const ParticleOperator& op, double t, double F);

/// Translation T (T psi_k = psi_{k+1}) truncated to the window.
Eigen::MatrixXcd translation_matrix(const LatticeWindow& w);

/// Position operator X in the eigenbasis: X = diag(k) - (T + T^*)/F.
ParticleOperator position_operator(const LatticeWindow& w, double F);

/// X assembled as sum_x x |x><x| through the Bessel transform; the range of
/// x covers every site reachable from the window.
ParticleOperator position_operator_by_transform(const LatticeWindow& w, const BesselTable& table);

/// f(X) = sum_x f(x) |x><x| through the Bessel transform, for x in the
/// window's position range.
template <class Fn>
ParticleOperator position_function(const LatticeWindow& w, const BesselTable& table, Fn f);

/// Column vector (psi_k(x))_k over the window.
Eigen::VectorXd position_vector(const LatticeWindow& w, const BesselTable& table, int x);

/// Probability mass function of X in a particle state.
struct PositionPmf {
  int x_min = 0;
  std::vector<double> prob;  // prob[i] = P[X = x_min + i]

  double at(int x) const;
  int x_max() const { return x_min + static_cast<int>(prob.size()) - 1; }
  double total() const;
  double mean() const;
};

/// pmf(x) = sum_{k,k'} psi_k(x) rho_{kk'} psi_k'(x) over the window's
/// position range. Throws WindowError when Tr rho - sum pmf exceeds the
/// leakage budget.
PositionPmf position_distribution(const ParticleOperator& dm, const BesselTable& table);

/// B_t = (4/F) sin(Ft/2) sin(xi + Ft/2), the bounded part of
/// exp(itH_p) X exp(-itH_p) = X + B_t, written as c_tstar T^* + c_t T
/// (T = exp(-i xi)).
struct BlochOffset {
  double amplitude = 0.0;  // (4/F) sin(Ft/2)
  double phase = 0.0;      // Ft/2
  cplx coeff_tstar;        // coefficient of exp(+i xi) = T^*
  cplx coeff_t;            // coefficient of exp(-i xi) = T

  double value(double xi) const;
  ParticleOperator as_operator(const LatticeWindow& w) const;
};

BlochOffset bloch_offset_at(double t, double F);
BlochOffset bloch_offset(int n, const ModelParams& params);

/// Sum of singular values.
double trace_norm(const Eigen::MatrixXcd& m);

// ---------------------------------------------------------------------------

template <class Fn>
ParticleOperator position_function(const LatticeWindow& w, const BesselTable& table, Fn f) {
  ParticleOperator out = ParticleOperator::zero(w);
  const int r = table.range();
  for (int x = w.x_min; x <= w.x_max; ++x) {
    const int lo = std::max(w.k_min, x - r);
    const int hi = std::min(w.k_max, x + r);
    if (lo > hi) continue;
    const int len = hi - lo + 1;
    Eigen::VectorXd v(len);
    for (int i = 0; i < len; ++i) v(i) = table.psi(lo + i, x);
    const double fx = f(x);
    out.m.block(w.index(lo), w.index(lo), len, len) += (fx * (v * v.transpose())).cast<cplx>();
  }
  return out;
}

}  // namespace tbc
