#include "tbc/channel.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "tbc/errors.hpp"
#include "tbc/single_atom.hpp"

namespace tbc {

KrausTriple kraus_weights(const ModelParams& params) {
  const DerivedParams d = derive_params(params);
  KrausTriple k;
  k.p_plus = d.p * d.gibbs_ground;
  k.p_minus = d.p * d.gibbs_excited;
  k.p_zero = 1.0 - d.p;
  return k;
}

namespace {

// cosh(a) / cosh(b) without overflow for large arguments.
double cosh_ratio(double a, double b) {
  a = std::abs(a);
  b = std::abs(b);
  return std::exp(a - b) * (1.0 + std::exp(-2.0 * a)) / (1.0 + std::exp(-2.0 * b));
}

}  // namespace

double theta(double alpha, const ModelParams& params) {
  const double p = derive_params(params).p;
  const double be = params.beta_e();
  return (1.0 - p) + p * cosh_ratio((0.5 - alpha) * be, 0.5 * be);
}

ShiftWeights deformed_weights(double alpha, const ModelParams& params) {
  const KrausTriple k = kraus_weights(params);
  const double be = params.beta_e();
  ShiftWeights w;
  w.down = k.p_minus == 0.0 ? 0.0 : std::exp(alpha * be) * k.p_minus;
  w.stay = k.p_zero;
  w.up = k.p_plus == 0.0 ? 0.0 : std::exp(-alpha * be) * k.p_plus;
  return w;
}

ShiftWeights tilted_weights(double eta, const KrausTriple& triple) {
  return {triple.p_minus == 0.0 ? 0.0 : std::exp(-eta) * triple.p_minus, triple.p_zero,
          triple.p_plus == 0.0 ? 0.0 : std::exp(eta) * triple.p_plus};
}

ParticleOperator apply_shifts(const ParticleOperator& A, const ShiftWeights& w) {
  require_interior(A, 1, "deformed channel");
  const Eigen::Index n = A.m.rows();
  ParticleOperator out{A.window, w.stay * A.m};
  if (n > 1) {
    if (w.down != 0.0) out.m.topLeftCorner(n - 1, n - 1) += w.down * A.m.bottomRightCorner(n - 1, n - 1);
    if (w.up != 0.0) out.m.bottomRightCorner(n - 1, n - 1) += w.up * A.m.topLeftCorner(n - 1, n - 1);
  }
  return out;
}

ParticleOperator apply_shifts_adjoint(const ParticleOperator& B, const ShiftWeights& w) {
  const Eigen::Index n = B.m.rows();
  ParticleOperator out{B.window, w.stay * B.m};
  if (n > 1) {
    if (w.down != 0.0) out.m.bottomRightCorner(n - 1, n - 1) += w.down * B.m.topLeftCorner(n - 1, n - 1);
    if (w.up != 0.0) out.m.topLeftCorner(n - 1, n - 1) += w.up * B.m.bottomRightCorner(n - 1, n - 1);
  }
  return out;
}

ParticleOperator apply_deformed(const ParticleOperator& dm, double alpha, const ModelParams& params) {
  return apply_shifts(dm, deformed_weights(alpha, params));
}

ParticleOperator apply_channel(const ParticleOperator& dm, double alpha, const ModelParams& params) {
  return apply_deformed(free_evolve(dm, params.tau(), params.F()), alpha, params);
}

ParticleOperator channel_oracle(const ParticleOperator& dm, double alpha, const ModelParams& params) {
  require_interior(dm, 1, "channel_oracle");
  const AtomGibbs g = AtomGibbs::of(params);
  const Eigen::Matrix2cd before = g.power(1.0 - alpha).cast<cplx>();
  const Eigen::Matrix2cd after = g.power(alpha).cast<cplx>();
  const JointOperator joint = tensor(dm, before);
  const JointOperator evolved = propagate_oracle(joint, params.tau(), params);
  return partial_trace_atom(evolved, after);
}

ParticleOperator adjoint_apply(const ParticleOperator& B, double alpha, const ModelParams& params) {
  return free_evolve(apply_shifts_adjoint(B, deformed_weights(alpha, params)), -params.tau(), params.F());
}

ParticleOperator time_reversal_conjugate(const ParticleOperator& A) { return {A.window, A.m.conjugate()}; }

double IndexPmf::at(int k) const {
  if (!window.contains(k)) return 0.0;
  return prob[static_cast<std::size_t>(window.index(k))];
}

double IndexPmf::total() const { return std::accumulate(prob.begin(), prob.end(), 0.0); }

IndexPmf master_step(const IndexPmf& pmf, const ModelParams& params, EdgePolicy policy) {
  const std::size_t n = pmf.prob.size();
  if (n != static_cast<std::size_t>(pmf.window.size())) throw WindowError("pmf does not match its window");
  if (policy == EdgePolicy::reject && (pmf.prob.front() != 0.0 || pmf.prob.back() != 0.0)) {
    throw WindowError("master_step: mass on the edge of window [" + std::to_string(pmf.window.k_min) + ", " +
                      std::to_string(pmf.window.k_max) + "]");
  }
  const KrausTriple k = kraus_weights(params);
  IndexPmf out{pmf.window, std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    double v = k.p_zero * pmf.prob[i];
    if (i > 0) v += k.p_plus * pmf.prob[i - 1];
    if (i + 1 < n) v += k.p_minus * pmf.prob[i + 1];
    out.prob[i] = v;
  }
  return out;
}

Eigen::MatrixXd master_matrix(const LatticeWindow& w, const ModelParams& params) {
  const KrausTriple k = kraus_weights(params);
  const int n = w.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = k.p_zero;
    if (i > 0) m(i, i - 1) = k.p_plus;
    if (i + 1 < n) m(i, i + 1) = k.p_minus;
  }
  return m;
}

IndexPmf diagonal_pmf(const ParticleOperator& dm) {
  IndexPmf out{dm.window, std::vector<double>(static_cast<std::size_t>(dm.window.size()))};
  for (int i = 0; i < dm.window.size(); ++i) out.prob[static_cast<std::size_t>(i)] = dm.m(i, i).real();
  return out;
}

}  // namespace tbc
