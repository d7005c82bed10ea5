#include "tbc/fcs.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tbc/errors.hpp"
#include "tbc/single_atom.hpp"
#include "tbc/tolerances.hpp"

namespace tbc {

namespace {

int excitations(unsigned bits) { return std::popcount(bits); }

void require_state(const ParticleOperator& rho, const char* what) {
  if (!rho.is_hermitian(kTolerances.hermitian)) throw std::invalid_argument(std::string(what) + ": state is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > kTolerances.trace) throw std::invalid_argument(std::string(what) + ": state trace is not 1");
}

int profile_reach(double F) { return std::max(1, bessel_reach(2.0 / F, kTolerances.bessel_tail)); }

ParticleOperator evolve_channel(ParticleOperator rho, int n, const ModelParams& params) {
  for (int s = 0; s < n; ++s) rho = apply_channel(rho, 0.0, params);
  return rho;
}

// Operator stored by its diagonals k - k' = d for |d| <= band. The shifts and
// the free evolution act on each diagonal separately.
class Diagonals {
 public:
  Diagonals(const ParticleOperator& op, int band) : w_(op.window), band_(band) {
    const int n = w_.size();
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (std::abs(i - j) > band && op.m(i, j) != cplx(0.0)) throw WindowError("operator wider than its band");
    diag_.assign(2 * static_cast<std::size_t>(band) + 1, Eigen::VectorXcd::Zero(n));
    for (int d = -band; d <= band; ++d)
      for (int i = std::max(0, d); i < std::min(n, n + d); ++i) slot(d)(i) = op.m(i, i - d);
  }

  void shift(const ShiftWeights& w, cplx phase_step) {
    const int n = w_.size();
    for (int d = -band_; d <= band_; ++d) {
      Eigen::VectorXcd& v = slot(d);
      const int lo = std::max(0, d);
      const int hi = std::min(n, n + d) - 1;
      if (lo > hi) continue;
      if (v(lo) != cplx(0.0) || v(hi) != cplx(0.0)) throw WindowError("state reached the window edge");
      const cplx ph = std::pow(phase_step, d);
      Eigen::VectorXcd next = w.stay * v;
      next.segment(lo, hi - lo) += w.down * v.segment(lo + 1, hi - lo);
      next.segment(lo + 1, hi - lo) += w.up * v.segment(lo, hi - lo);
      v = ph * next;
    }
  }

  ParticleOperator dense() const {
    ParticleOperator out = ParticleOperator::zero(w_);
    const int n = w_.size();
    for (int d = -band_; d <= band_; ++d)
      for (int i = std::max(0, d); i < std::min(n, n + d); ++i) out.m(i, i - d) = slot(d)(i);
    return out;
  }

 private:
  Eigen::VectorXcd& slot(int d) { return diag_[static_cast<std::size_t>(d + band_)]; }
  const Eigen::VectorXcd& slot(int d) const { return diag_[static_cast<std::size_t>(d + band_)]; }

  LatticeWindow w_;
  int band_;
  std::vector<Eigen::VectorXcd> diag_;
};

}  // namespace

void check_budget(const ReservoirConfig& cfg) {
  if (cfg.n < 0 || cfg.M < 0) throw std::invalid_argument("reservoir needs n >= 0 and M >= 0");
  if (cfg.n > cfg.M) throw std::invalid_argument("reservoir needs n <= M (each atom interacts once)");
  if (cfg.window.size() > kMaxBruteWindow || cfg.M > kMaxBruteAtoms) {
    throw BudgetError("brute-force reservoir limited to window <= " + std::to_string(kMaxBruteWindow) + " and M <= " +
                      std::to_string(kMaxBruteAtoms) + " (got window " + std::to_string(cfg.window.size()) + ", M " +
                      std::to_string(cfg.M) + ")");
  }
}

Eigen::SparseMatrix<cplx> interaction_step(const ReservoirConfig& cfg, int j) {
  check_budget(cfg);
  if (j < 0 || j >= cfg.M) throw std::invalid_argument("atom index out of range");
  const double tau = cfg.params.tau();
  const Eigen::MatrixXcd u1 = propagator_oracle(cfg.params, cfg.window, tau);
  const unsigned atoms = 1u << cfg.M;
  const unsigned mask = 1u << j;

  std::vector<Eigen::Triplet<cplx>> entries;
  for (int i = 0; i < cfg.window.size(); ++i) {
    for (unsigned bits = 0; bits < atoms; ++bits) {
      const int a = (bits & mask) ? 1 : 0;
      const unsigned rest = bits & ~mask;
      const cplx idle = std::polar(1.0, -tau * cfg.params.E() * excitations(rest));
      const int col = (i << cfg.M) | static_cast<int>(bits);
      const int s = 2 * i + a;
      for (int r = 0; r < u1.rows(); ++r) {
        const cplx v = u1(r, s);
        if (v == cplx(0.0)) continue;
        const unsigned row_bits = rest | ((r % 2) ? mask : 0u);
        entries.emplace_back(((r / 2) << cfg.M) | static_cast<int>(row_bits), col, v * idle);
      }
    }
  }
  Eigen::SparseMatrix<cplx> out(cfg.dim(), cfg.dim());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

Eigen::MatrixXcd repeated_interaction_propagator(const ReservoirConfig& cfg) {
  check_budget(cfg);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(cfg.dim(), cfg.dim());
  for (int j = 0; j < cfg.n; ++j) u = interaction_step(cfg, j) * u;
  return u;
}

Eigen::MatrixXcd reservoir_initial_state(const ParticleOperator& rho_p, const ReservoirConfig& cfg) {
  check_budget(cfg);
  if (!(rho_p.window == cfg.window)) throw WindowError("particle state and reservoir use different windows");
  const AtomGibbs g = AtomGibbs::of(cfg.params);
  const unsigned atoms = 1u << cfg.M;
  Eigen::VectorXd env(atoms);
  for (unsigned bits = 0; bits < atoms; ++bits) {
    const int m = excitations(bits);
    env(bits) = std::pow(g.w_excited, m) * std::pow(g.w_ground, cfg.M - m);
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(cfg.dim(), cfg.dim());
  for (int i = 0; i < cfg.window.size(); ++i)
    for (int ip = 0; ip < cfg.window.size(); ++ip)
      for (unsigned bits = 0; bits < atoms; ++bits)
        out((i << cfg.M) | bits, (ip << cfg.M) | bits) = rho_p.m(i, ip) * env(bits);
  return out;
}

ParticleOperator trace_environment(const Eigen::MatrixXcd& full, const ReservoirConfig& cfg) {
  ParticleOperator out = ParticleOperator::zero(cfg.window);
  const unsigned atoms = 1u << cfg.M;
  for (int i = 0; i < cfg.window.size(); ++i)
    for (int ip = 0; ip < cfg.window.size(); ++ip)
      for (unsigned bits = 0; bits < atoms; ++bits) out.m(i, ip) += full((i << cfg.M) | bits, (ip << cfg.M) | bits);
  return out;
}

Eigen::VectorXd total_energy_diagonal(const ReservoirConfig& cfg) {
  Eigen::VectorXd d(cfg.dim());
  const unsigned atoms = 1u << cfg.M;
  for (int i = 0; i < cfg.window.size(); ++i)
    for (unsigned bits = 0; bits < atoms; ++bits)
      d((i << cfg.M) | bits) = 2.0 - cfg.params.F() * cfg.window.k_of(i) + cfg.params.E() * excitations(bits);
  return d;
}

Eigen::VectorXd entropy_charge_diagonal(const ReservoirConfig& cfg) {
  Eigen::VectorXd d(cfg.dim());
  const double be = cfg.params.beta_e();
  const unsigned atoms = 1u << cfg.M;
  for (int i = 0; i < cfg.window.size(); ++i)
    for (unsigned bits = 0; bits < atoms; ++bits) {
      const double ep = 2.0 - cfg.params.F() * cfg.window.k_of(i);
      d((i << cfg.M) | bits) = be / cfg.params.F() * ep + be * excitations(bits);
    }
  return d;
}

double EnergyFcs::total() const {
  double s = 0.0;
  for (const auto& [key, p] : prob) s += p;
  return s;
}

double EnergyFcs::off_diagonal_mass() const {
  double s = 0.0;
  for (const auto& [key, p] : prob)
    if (key.first != key.second) s += p;
  return s;
}

std::map<int, double> EnergyFcs::entropy_law() const {
  std::map<int, double> out;
  for (const auto& [key, p] : prob)
    if (key.first == key.second) out[key.first] += p;
  return out;
}

double EnergyFcs::moment(double alpha) const {
  const double be = cfg.params.beta_e();
  double s = 0.0;
  for (const auto& [key, p] : prob) s += p * std::exp(-alpha * be * key.first);
  return s;
}

double EnergyFcs::mean_entropy() const {
  const double be = cfg.params.beta_e();
  double s = 0.0;
  for (const auto& [key, p] : prob) s += p * (-be * key.first);
  return s;
}

double EnergyFcs::variance_entropy() const {
  const double be = cfg.params.beta_e();
  const double mu = mean_entropy();
  double s = 0.0;
  for (const auto& [key, p] : prob) {
    const double d = -be * key.first - mu;
    s += p * d * d;
  }
  return s;
}

double EnergyFcs::mean_total_energy_change() const {
  double s = 0.0;
  for (const auto& [key, p] : prob) s += p * (-cfg.params.F() * key.first + cfg.params.E() * key.second);
  return s;
}

EnergyFcs run_energy_fcs(const ReservoirConfig& cfg, const ParticleOperator& rho_p) {
  check_budget(cfg);
  if (!(rho_p.window == cfg.window)) throw WindowError("particle state and reservoir use different windows");
  require_state(rho_p, "run_energy_fcs");
  require_interior(rho_p, cfg.n + 1, "run_energy_fcs");

  const Eigen::MatrixXcd u = repeated_interaction_propagator(cfg);
  const AtomGibbs g = AtomGibbs::of(cfg.params);
  const unsigned atoms = 1u << cfg.M;

  EnergyFcs out{cfg, {}};
  for (int c = 0; c < cfg.dim(); ++c) {
    const int ic = c >> cfg.M;
    const unsigned bc = static_cast<unsigned>(c) & (atoms - 1);
    const int mc = excitations(bc);
    const double weight = rho_p.m(ic, ic).real() * std::pow(g.w_excited, mc) * std::pow(g.w_ground, cfg.M - mc);
    if (weight == 0.0) continue;
    for (int b = 0; b < cfg.dim(); ++b) {
      const double amp = std::norm(u(b, c));
      if (amp == 0.0) continue;
      const int dk = cfg.window.k_of(b >> cfg.M) - cfg.window.k_of(ic);
      const int dm = excitations(static_cast<unsigned>(b) & (atoms - 1)) - mc;
      out.prob[{dk, dm}] += amp * weight;
    }
  }
  return out;
}

double energy_cgf(int n, double alpha, const ModelParams& params) {
  if (n < 0) throw std::invalid_argument("energy_cgf needs n >= 0");
  return n * std::log(theta(alpha, params));
}

double PositionFcs::at(int delta) const {
  if (delta < delta_min || delta > delta_max()) return 0.0;
  return prob[static_cast<std::size_t>(delta - delta_min)];
}

double PositionFcs::total() const { return std::accumulate(prob.begin(), prob.end(), 0.0); }

double PositionFcs::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) s += prob[i] * (delta_min + static_cast<int>(i));
  return s;
}

double PositionFcs::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double d = delta_min + static_cast<int>(i) - mu;
    s += prob[i] * d * d;
  }
  return s;
}

double PositionFcs::mass(int lo, int hi) const {
  double s = 0.0;
  for (int d = std::max(lo, delta_min); d <= std::min(hi, delta_max()); ++d) s += at(d);
  return s;
}

double PositionFcs::log_moment(double eta) const {
  // log-sum-exp around the largest term
  double top = -INFINITY;
  for (std::size_t i = 0; i < prob.size(); ++i)
    if (prob[i] > 0.0) top = std::max(top, std::log(prob[i]) + eta * (delta_min + static_cast<int>(i)));
  double s = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i)
    if (prob[i] > 0.0) s += std::exp(std::log(prob[i]) + eta * (delta_min + static_cast<int>(i)) - top);
  return top + std::log(s);
}

PositionGrid PositionGrid::for_force(double F) {
  const int r = profile_reach(F);
  return {BesselTable::for_force(F, r), r};
}

PositionFcs run_position_fcs(int n, const ParticleOperator& rho_p, const ModelParams& params) {
  if (n < 0) throw std::invalid_argument("run_position_fcs needs n >= 0");
  require_state(rho_p, "run_position_fcs");
  require_interior(rho_p, 1, "run_position_fcs");
  const PositionGrid grid = PositionGrid::for_force(params.F());
  const LatticeWindow w = LatticeWindow::for_interactions(-grid.reach, grid.reach, n, 2, grid.reach);
  const Eigen::VectorXd v = position_vector(w, grid.table, 0);
  Diagonals rho(ParticleOperator{w, (v * v.transpose()).cast<cplx>()}, 2 * grid.reach);
  const cplx phase = std::polar(1.0, params.tau() * params.F());
  const ShiftWeights weights = deformed_weights(0.0, params);
  for (int s = 0; s < n; ++s) rho.shift(weights, phase);
  const PositionPmf pmf = position_distribution(rho.dense(), grid.table);
  return {n, pmf.x_min, pmf.prob};
}

PositionFcs run_position_fcs_direct(int n, const ParticleOperator& rho_p, const ModelParams& params,
                                    const LatticeWindow& window) {
  if (n < 0) throw std::invalid_argument("run_position_fcs_direct needs n >= 0");
  require_state(rho_p, "run_position_fcs_direct");
  const PositionGrid grid = PositionGrid::for_force(params.F());
  const PositionPmf first = position_distribution(rho_p, grid.table);

  std::vector<std::pair<int, ParticleOperator>> outcomes;
  for (int x = first.x_min; x <= first.x_max(); ++x) {
    const double px = first.at(x);
    if (px == 0.0) continue;
    if (x - grid.reach - n - 1 < window.k_min || x + grid.reach + n + 1 > window.k_max) {
      throw WindowError("conditional state at x = " + std::to_string(x) + " does not fit the window for " +
                        std::to_string(n) + " interactions");
    }
    const Eigen::VectorXd v = position_vector(window, grid.table, x);
    outcomes.emplace_back(x, ParticleOperator{window, (px * v * v.transpose()).cast<cplx>()});
  }

  const int span = (window.x_max - window.x_min);
  PositionFcs out{n, -span, std::vector<double>(2 * static_cast<std::size_t>(span) + 1, 0.0)};
  for (auto& [x, rho] : outcomes) {
    const double px = rho.trace().real();
    const ParticleOperator evolved = evolve_channel(std::move(rho), n, params);
    const Eigen::MatrixXcd m = evolved.m / px;
    const PositionPmf second = position_distribution({window, m}, grid.table);
    for (int xp = second.x_min; xp <= second.x_max(); ++xp)
      out.prob[static_cast<std::size_t>(xp - x - out.delta_min)] += px * second.at(xp);
  }
  return out;
}

PositionCgf position_cgf(int n, double eta, const ParticleOperator& rho_p, const ModelParams& params) {
  if (n < 0) throw std::invalid_argument("position_cgf needs n >= 0");
  require_state(rho_p, "position_cgf");
  const auto bounds = support_bounds(rho_p);
  if (!bounds) throw std::invalid_argument("position_cgf: zero state");
  const PositionGrid grid = PositionGrid::for_force(params.F());
  const int r = grid.reach;
  const double F = params.F();

  ShiftWeights w = tilted_weights(eta, kraus_weights(params));
  const double log_theta = std::log(w.sum());
  const double norm = w.sum();
  w.down /= norm;
  w.stay /= norm;
  w.up /= norm;

  // rho~ = sum_x P[X = x] |x><x| on a window holding n jumps
  const PositionPmf first = position_distribution(rho_p, grid.table);
  const LatticeWindow win = LatticeWindow::for_interactions(bounds->first - 2 * r, bounds->second + 2 * r, n, 2, r);
  ParticleOperator rho = ParticleOperator::zero(win);
  for (int x = first.x_min; x <= first.x_max(); ++x) {
    const double px = first.at(x);
    if (px == 0.0) continue;
    const Eigen::VectorXd v = position_vector(win, grid.table, x);
    rho.m += (px * v * v.transpose()).cast<cplx>();
  }
  Diagonals evolved(rho, 2 * r);
  for (int s = 0; s < n; ++s) evolved.shift(w, cplx(1.0));
  rho = evolved.dense();

  // W_n(x, y) = sum_z conj(U(z, x)) U(z, y) e^{eta (z - (x + y)/2)} with U the
  // free propagator over n tau in the position basis. W_n is invariant under
  // lattice translations, so only w(d) = W_n(0, d) is needed.
  const double t = n * params.tau();
  auto propagator = [&](int z, int x) {
    cplx s = 0.0;
    for (int k = std::max(z, x) - r; k <= std::min(z, x) + r; ++k)
      s += grid.table.psi(k, z) * grid.table.psi(k, x) * std::polar(1.0, -t * (2.0 - F * k));
    return s;
  };
  const int band = 4 * r;
  std::vector<cplx> wd(2 * static_cast<std::size_t>(band) + 1, 0.0);
  for (int d = -band; d <= band; ++d) {
    cplx s = 0.0;
    for (int z = std::min(0, d) - 2 * r; z <= std::max(0, d) + 2 * r; ++z)
      s += std::conj(propagator(z, 0)) * propagator(z, d) * std::exp(eta * (z - 0.5 * d));
    wd[static_cast<std::size_t>(d + band)] = s;
  }

  // Tr[rho W] = sum_{x,y} <y|rho|x> w(y - x), with <k|x> nonzero for |k - x| <= r only
  auto profile = [&](int x, int& lo) {
    lo = std::max(win.k_min, x - r);
    const int hi = std::min(win.k_max, x + r);
    Eigen::VectorXcd p(std::max(0, hi - lo + 1));
    for (int i = 0; i < p.size(); ++i) p(i) = grid.table.psi(lo + static_cast<int>(i), x);
    return p;
  };
  cplx tr = 0.0;
  for (int x = win.x_min; x <= win.x_max; ++x) {
    int lo_x = 0;
    const Eigen::VectorXcd px = profile(x, lo_x);
    if (px.size() == 0) continue;
    const Eigen::VectorXcd col = rho.m.middleCols(win.index(lo_x), px.size()) * px;
    for (int yy = std::max(win.x_min, x - band); yy <= std::min(win.x_max, x + band); ++yy) {
      int lo_y = 0;
      const Eigen::VectorXcd py = profile(yy, lo_y);
      if (py.size() == 0) continue;
      tr += py.dot(col.segment(win.index(lo_y), py.size())) * wd[static_cast<std::size_t>(yy - x + band)];
    }
  }
  return {n * log_theta + std::log(tr.real()), log_theta};
}

}  // namespace tbc
