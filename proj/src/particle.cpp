#include <algorithm>
#include "tbc/particle.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "tbc/errors.hpp"
#include "tbc/tolerances.hpp"

namespace tbc {

LatticeWindow LatticeWindow::make(int k_min, int k_max, int x_pad) {
  if (k_max < k_min) throw WindowError("empty lattice window");
  if (x_pad < 0) throw WindowError("negative position padding");
  return {k_min, k_max, k_min - x_pad, k_max + x_pad};
}

LatticeWindow LatticeWindow::for_interactions(int lo, int hi, int n, int margin, int x_pad) {
  if (hi < lo || n < 0 || margin < 1) throw WindowError("invalid window request");
  return make(lo - n - margin, hi + n + margin, x_pad);
}

ParticleOperator ParticleOperator::zero(const LatticeWindow& w) {
  return {w, Eigen::MatrixXcd::Zero(w.size(), w.size())};
}

ParticleOperator ParticleOperator::identity(const LatticeWindow& w) {
  return {w, Eigen::MatrixXcd::Identity(w.size(), w.size())};
}

bool ParticleOperator::is_hermitian(double tol) const {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double ParticleOperator::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ParticleOperator basis_operator(const LatticeWindow& w, int k, int kp) {
  if (!w.contains(k) || !w.contains(kp)) throw WindowError("basis index outside window");
  ParticleOperator op = ParticleOperator::zero(w);
  op.m(w.index(k), w.index(kp)) = 1.0;
  return op;
}

std::optional<std::pair<int, int>> support_bounds(const ParticleOperator& op) {
  const int n = op.window.size();
  int lo = n, hi = -1;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (op.m(i, j) == cplx(0.0)) continue;
      lo = std::min({lo, i, j});
      hi = std::max({hi, i, j});
    }
  }
  if (hi < 0) return std::nullopt;
  return std::make_pair(op.window.k_of(lo), op.window.k_of(hi));
}

void require_interior(const ParticleOperator& op, int margin, const char* what) {
  const auto s = support_bounds(op);
  if (!s) return;
  if (s->first - op.window.k_min < margin || op.window.k_max - s->second < margin) {
    throw WindowError(std::string(what) + ": support [" + std::to_string(s->first) + ", " +
                      std::to_string(s->second) + "] is within " + std::to_string(margin) +
                      " site(s) of window [" + std::to_string(op.window.k_min) + ", " +
                      std::to_string(op.window.k_max) + "]");
  }
}

ParticleOperator free_evolve(const ParticleOperator& op, double t, double F) {
  const int n = op.window.size();
  // E_k - E_k' = -F (k - k'), so the factor depends only on d = k - k'.
  std::vector<cplx> phase(2 * static_cast<std::size_t>(n) - 1);
  for (int d = -(n - 1); d <= n - 1; ++d) {
    phase[static_cast<std::size_t>(d + n - 1)] = std::polar(1.0, t * F * d);
  }
  ParticleOperator out{op.window, Eigen::MatrixXcd(n, n)};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out.m(i, j) = op.m(i, j) * phase[static_cast<std::size_t>(i - j + n - 1)];
    }
  }
  return out;
}

Eigen::MatrixXcd translation_matrix(const LatticeWindow& w) {
  const int n = w.size();
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) t(i + 1, i) = 1.0;
  return t;
}

ParticleOperator position_operator(const LatticeWindow& w, double F) {
  const int n = w.size();
  ParticleOperator x = ParticleOperator::zero(w);
  for (int i = 0; i < n; ++i) {
    x.m(i, i) = static_cast<double>(w.k_of(i));
    if (i + 1 < n) {
      x.m(i, i + 1) = -1.0 / F;
      x.m(i + 1, i) = -1.0 / F;
    }
  }
  return x;
}

ParticleOperator position_operator_by_transform(const LatticeWindow& w, const BesselTable& table) {
  return position_function(w, table, [](int x) { return static_cast<double>(x); });
}

Eigen::VectorXd position_vector(const LatticeWindow& w, const BesselTable& table, int x) {
  Eigen::VectorXd v(w.size());
  for (int i = 0; i < w.size(); ++i) v(i) = table.psi(w.k_of(i), x);
  return v;
}

double PositionPmf::at(int x) const {
  if (x < x_min || x > x_max()) return 0.0;
  return prob[static_cast<std::size_t>(x - x_min)];
}

double PositionPmf::total() const { return std::accumulate(prob.begin(), prob.end(), 0.0); }

double PositionPmf::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) s += (x_min + static_cast<double>(i)) * prob[i];
  return s / total();
}

PositionPmf position_distribution(const ParticleOperator& dm, const BesselTable& table) {
  const LatticeWindow& w = dm.window;
  const int r = table.range();
  PositionPmf pmf;
  pmf.x_min = w.x_min;
  pmf.prob.assign(static_cast<std::size_t>(w.x_max - w.x_min + 1), 0.0);
  for (int x = w.x_min; x <= w.x_max; ++x) {
    const int lo = std::max(w.k_min, x - r);
    const int hi = std::min(w.k_max, x + r);
    if (lo > hi) continue;
    const int len = hi - lo + 1;
    Eigen::VectorXd v(len);
    for (int i = 0; i < len; ++i) v(i) = table.psi(lo + i, x);
    const auto block = dm.m.block(w.index(lo), w.index(lo), len, len);
    const cplx q = v.cast<cplx>().dot(block * v.cast<cplx>());
    pmf.prob[static_cast<std::size_t>(x - w.x_min)] = q.real();
  }
  const double leak = dm.trace().real() - pmf.total();
  if (std::abs(leak) > kTolerances.leakage) {
    throw WindowError("position transform leaks " + std::to_string(leak) +
                      " of the trace outside x in [" + std::to_string(w.x_min) + ", " +
                      std::to_string(w.x_max) + "]");
  }
  return pmf;
}

double BlochOffset::value(double xi) const { return amplitude * std::sin(xi + phase); }

ParticleOperator BlochOffset::as_operator(const LatticeWindow& w) const {
  const Eigen::MatrixXcd t = translation_matrix(w);
  return {w, coeff_tstar * t.adjoint() + coeff_t * t};
}

BlochOffset bloch_offset_at(double t, double F) {
  BlochOffset b;
  b.phase = 0.5 * F * t;
  b.amplitude = 4.0 / F * std::sin(b.phase);
  // sin(xi + phi) = (e^{i phi} e^{i xi} - e^{-i phi} e^{-i xi}) / (2i)
  const cplx two_i(0.0, 2.0);
  b.coeff_tstar = b.amplitude * std::polar(1.0, b.phase) / two_i;
  b.coeff_t = -b.amplitude * std::polar(1.0, -b.phase) / two_i;
  return b;
}

BlochOffset bloch_offset(int n, const ModelParams& params) {
  return bloch_offset_at(n * params.tau(), params.F());
}

double trace_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

}  // namespace tbc
