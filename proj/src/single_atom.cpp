#include "tbc/single_atom.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "tbc/errors.hpp"

namespace tbc {

namespace {

void require_no_edge_weight(const JointOperator& state, const char* what) {
  const LatticeWindow& w = state.window;
  const int edges[2] = {JointOperator::index(w, w.k_max, 0), JointOperator::index(w, w.k_min, 1)};
  for (int e : edges) {
    if ((state.m.row(e).array() != cplx(0.0)).any() || (state.m.col(e).array() != cplx(0.0)).any()) {
      throw WindowError(std::string(what) + ": state has weight on an edge sector of window [" +
                        std::to_string(w.k_min) + ", " + std::to_string(w.k_max) + "]");
    }
  }
}

void check_window(const JointOperator& state) {
  if (state.m.rows() != 2 * state.window.size() || state.m.cols() != 2 * state.window.size()) {
    throw WindowError("joint operator does not match its window");
  }
}

// Mixing weights of the Rabi oscillation at time t:
// q = sin^2(2 theta) sin^2(omega0 t / 2), kappa = (sin 2theta / 2)(i sin(omega0 t) - 2 cos 2theta sin^2(omega0 t / 2)).
struct Rabi {
  double q = 0.0;
  cplx kappa;
};

Rabi rabi(const DerivedParams& d, double t) {
  Rabi r;
  const double half = std::sin(0.5 * d.omega0 * t);
  r.q = d.sin2theta * d.sin2theta * half * half;
  r.kappa = 0.5 * d.sin2theta * cplx(-2.0 * d.cos2theta * half * half, std::sin(d.omega0 * t));
  return r;
}

// (T A T^*)_{k,k'} = A_{k-1,k'-1}
Eigen::MatrixXcd shift_up(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  if (n > 1) out.bottomRightCorner(n - 1, n - 1) = a.topLeftCorner(n - 1, n - 1);
  return out;
}

// (T^* A T)_{k,k'} = A_{k+1,k'+1}
Eigen::MatrixXcd shift_down(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  if (n > 1) out.topLeftCorner(n - 1, n - 1) = a.bottomRightCorner(n - 1, n - 1);
  return out;
}

// (A T^*)_{k,k'} = A_{k,k'-1}
Eigen::MatrixXcd times_tstar(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  if (n > 1) out.rightCols(n - 1) = a.leftCols(n - 1);
  return out;
}

// (T^* A)_{k,k'} = A_{k+1,k'}
Eigen::MatrixXcd tstar_times(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  if (n > 1) out.topRows(n - 1) = a.bottomRows(n - 1);
  return out;
}

}  // namespace

AtomGibbs AtomGibbs::of(const ModelParams& params) {
  const DerivedParams d = derive_params(params);
  return {params.beta_e(), d.gibbs_ground, d.gibbs_excited};
}

Eigen::Matrix2d AtomGibbs::power(double s) const {
  Eigen::Matrix2d r = Eigen::Matrix2d::Zero();
  if (s == 0.0) return Eigen::Matrix2d::Identity();
  r(0, 0) = std::pow(w_ground, s);
  r(1, 1) = std::pow(w_excited, s);
  return r;
}

JointOperator JointOperator::zero(const LatticeWindow& w) {
  return {w, Eigen::MatrixXcd::Zero(2 * w.size(), 2 * w.size())};
}

bool JointOperator::is_hermitian(double tol) const {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double JointOperator::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

JointOperator tensor(const ParticleOperator& a, const Eigen::Matrix2cd& atom) {
  return {a.window, Eigen::kroneckerProduct(a.m, atom)};
}

ParticleOperator partial_trace_atom(const JointOperator& op) {
  return partial_trace_atom(op, Eigen::Matrix2cd::Identity());
}

ParticleOperator partial_trace_atom(const JointOperator& op, const Eigen::Matrix2cd& atom) {
  const int n = op.window.size();
  ParticleOperator out = ParticleOperator::zero(op.window);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      if (atom(a, b) == cplx(0.0)) continue;
      // Tr[(I (x) atom) op] = sum_{a,b} atom(a,b) op_{(.,b),(.,a)}
      out.m += atom(a, b) * op.m(Eigen::seqN(b, n, 2), Eigen::seqN(a, n, 2));
    }
  }
  return out;
}

std::vector<SectorBlock> hamiltonian_blocks(const ModelParams& params, const LatticeWindow& w) {
  const double F = params.F();
  std::vector<SectorBlock> blocks;
  auto energy = [F](int k) { return 2.0 - F * k; };

  SectorBlock low;
  low.k = w.k_min - 1;
  low.sector = -low.k;
  low.dim = 1;
  low.first = JointOperator::index(w, w.k_min, 1);
  low.h(0, 0) = energy(w.k_min) + params.E();
  blocks.push_back(low);

  for (int k = w.k_min; k < w.k_max; ++k) {
    SectorBlock b;
    b.k = k;
    b.sector = -k;
    b.first = JointOperator::index(w, k, 0);
    b.second = JointOperator::index(w, k + 1, 1);
    b.h << energy(k), params.lambda(), params.lambda(), energy(k + 1) + params.E();
    blocks.push_back(b);
  }

  SectorBlock high;
  high.k = w.k_max;
  high.sector = -high.k;
  high.dim = 1;
  high.first = JointOperator::index(w, w.k_max, 0);
  high.h(0, 0) = energy(w.k_max);
  blocks.push_back(high);
  return blocks;
}

Eigen::MatrixXd hamiltonian_matrix(const ModelParams& params, const LatticeWindow& w) {
  const int n = w.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    const double ek = 2.0 - params.F() * w.k_of(i);
    h(2 * i, 2 * i) = ek;
    h(2 * i + 1, 2 * i + 1) = ek + params.E();
    if (i + 1 < n) {
      // T b^* : psi_k (x) |0>  ->  psi_{k+1} (x) |1>
      h(2 * (i + 1) + 1, 2 * i) = params.lambda();
      h(2 * i, 2 * (i + 1) + 1) = params.lambda();
    }
  }
  return h;
}

Eigen::MatrixXcd propagator_closed(const ModelParams& params, const LatticeWindow& w, double t) {
  const DerivedParams d = derive_params(params);
  const int n = w.size();
  const Eigen::MatrixXcd T = translation_matrix(w);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  Eigen::Matrix2cd bb, b, bstar, nb;  // bb^*, b, b^*, b^*b
  bb << 1, 0, 0, 0;
  nb << 0, 0, 0, 1;
  b << 0, 1, 0, 0;
  bstar << 0, 0, 1, 0;

  const Eigen::MatrixXcd U =
      d.cos_theta * (Eigen::MatrixXcd(Eigen::kroneckerProduct(T, nb)) + Eigen::MatrixXcd(Eigen::kroneckerProduct(I, bb))) -
      d.sin_theta * (Eigen::MatrixXcd(Eigen::kroneckerProduct(T, bstar)) - Eigen::MatrixXcd(Eigen::kroneckerProduct(I, b)));

  Eigen::VectorXcd phase(2 * n);
  const double shift = 0.5 * (params.E() - params.F());
  for (int i = 0; i < n; ++i) {
    const double ek = 2.0 - params.F() * w.k_of(i);
    phase(2 * i) = std::polar(1.0, -t * (ek + shift - 0.5 * d.omega0));
    phase(2 * i + 1) = std::polar(1.0, -t * (ek + shift + 0.5 * d.omega0));
  }
  return U * phase.asDiagonal() * U.adjoint();
}

Eigen::MatrixXcd propagator_oracle(const ModelParams& params, const LatticeWindow& w, double t) {
  const int dim = 2 * w.size();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (const SectorBlock& blk : hamiltonian_blocks(params, w)) {
    if (blk.dim == 1) {
      u(blk.first, blk.first) = std::polar(1.0, -t * blk.h(0, 0));
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(blk.h);
    Eigen::Vector2cd ph;
    for (int j = 0; j < 2; ++j) ph(j) = std::polar(1.0, -t * es.eigenvalues()(j));
    const Eigen::Matrix2cd v = es.eigenvectors().cast<cplx>();
    const Eigen::Matrix2cd e = v * ph.asDiagonal() * v.adjoint();
    const int idx[2] = {blk.first, blk.second};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) u(idx[r], idx[c]) = e(r, c);
  }
  return u;
}

JointOperator propagate_closed(const JointOperator& state, double t, const ModelParams& params) {
  check_window(state);
  require_no_edge_weight(state, "propagate_closed");
  const Eigen::MatrixXcd u = propagator_closed(params, state.window, t);
  return {state.window, u * state.m * u.adjoint()};
}

JointOperator propagate_oracle(const JointOperator& state, double t, const ModelParams& params) {
  check_window(state);
  require_no_edge_weight(state, "propagate_oracle");
  const Eigen::MatrixXcd u = propagator_oracle(params, state.window, t);
  return {state.window, u * state.m * u.adjoint()};
}

JointOperator HeisenbergMaps::assemble() const {
  const LatticeWindow& w = a.window;
  const int n = w.size();
  JointOperator out = JointOperator::zero(w);
  out.m(Eigen::seqN(1, n, 2), Eigen::seqN(1, n, 2)) = a.m;
  out.m(Eigen::seqN(0, n, 2), Eigen::seqN(1, n, 2)) = b.m;
  out.m(Eigen::seqN(1, n, 2), Eigen::seqN(0, n, 2)) = b_star.m;
  out.m(Eigen::seqN(0, n, 2), Eigen::seqN(0, n, 2)) = c.m;
  return out;
}

HeisenbergMaps heisenberg_maps(const ParticleOperator& A, double t, const ModelParams& params) {
  const DerivedParams d = derive_params(params);
  const Rabi r = rabi(d, t);
  const double g0 = d.gibbs_ground;
  const double g1 = d.gibbs_excited;
  const Eigen::MatrixXcd at = free_evolve(A, t, params.F()).m;
  const Eigen::MatrixXcd at_star = at.adjoint();
  const LatticeWindow& w = A.window;

  HeisenbergMaps h{ParticleOperator::zero(w), ParticleOperator::zero(w), ParticleOperator::zero(w),
                   ParticleOperator::zero(w)};
  h.a.m = g1 * (1.0 - r.q) * at + g0 * r.q * shift_up(at);
  h.c.m = g0 * (1.0 - r.q) * at + g1 * r.q * shift_down(at);
  h.b.m = r.kappa * (g0 * times_tstar(at) - g1 * tstar_times(at));
  h.b_star.m = (r.kappa * (g0 * times_tstar(at_star) - g1 * tstar_times(at_star))).adjoint();
  return h;
}

JointOperator position_heisenberg(double t, const LatticeWindow& w, const ModelParams& params) {
  const DerivedParams d = derive_params(params);
  const Rabi r = rabi(d, t);
  const int n = w.size();
  const ParticleOperator x = position_operator(w, params.F());
  const ParticleOperator offset = bloch_offset_at(t, params.F()).as_operator(w);
  const Eigen::MatrixXcd T = translation_matrix(w);

  JointOperator out = JointOperator::zero(w);
  const Eigen::MatrixXcd xt = x.m + offset.m;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  out.m(Eigen::seqN(0, n, 2), Eigen::seqN(0, n, 2)) = xt + r.q * id;
  out.m(Eigen::seqN(1, n, 2), Eigen::seqN(1, n, 2)) = xt - r.q * id;
  // (T (x) b^*) has entries <psi_{k+1} 1| . |psi_k 0>; its adjoint T^* (x) b the reverse.
  out.m(Eigen::seqN(1, n, 2), Eigen::seqN(0, n, 2)) = -r.kappa * T;
  out.m(Eigen::seqN(0, n, 2), Eigen::seqN(1, n, 2)) = -std::conj(r.kappa) * T.adjoint();
  return out;
}

double position_expectation(double t, const JointOperator& initial, const ModelParams& params) {
  check_window(initial);
  require_no_edge_weight(initial, "position_expectation");
  const JointOperator o = position_heisenberg(t, initial.window, params);
  return (initial.m * o.m).trace().real();
}

double position_excursion_bound(const ModelParams& params) {
  const DerivedParams d = derive_params(params);
  double bound = 4.0 / params.F();
  if (d.omega0 > 0.0) {
    const double lam = std::abs(params.lambda());
    const double w2 = d.omega0 * d.omega0;
    bound += 4.0 * lam * lam / w2 + 2.0 * lam * (std::abs(params.E() - params.F()) + d.omega0) / w2;
  }
  return bound;
}

}  // namespace tbc
