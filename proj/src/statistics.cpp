#include "tbc/statistics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "tbc/errors.hpp"
#include "tbc/rng.hpp"
#include "tbc/tolerances.hpp"

namespace tbc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_or_ninf(double v) { return v > 0.0 ? std::log(v) : -kInf; }

double log_sum_exp3(double a, double b, double c) {
  const double m = std::max({a, b, c});
  if (m == -kInf) return -kInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

double log_cosh(double c) {
  c = std::abs(c);
  return c + std::log1p(std::exp(-2.0 * c)) - std::log(2.0);
}

// cosh(a) / cosh(b) and sinh(a) / cosh(b) without overflow.
double cosh_over_cosh(double a, double b) { return std::exp(log_cosh(a) - log_cosh(b)); }

double sinh_over_cosh(double a, double b) {
  const double aa = std::abs(a);
  const double v = std::exp(aa - std::abs(b)) * -std::expm1(-2.0 * aa) / (1.0 + std::exp(-2.0 * std::abs(b)));
  return std::copysign(v, a);
}

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

}  // namespace

TransportCoefficients transport_coefficients(const ModelParams& params) {
  const DerivedParams d = derive_params(params);
  const double th = std::tanh(0.5 * params.beta_e());
  TransportCoefficients t;
  t.drift = d.p / params.tau() * th;
  t.diffusion = d.p / (2.0 * params.tau()) * (1.0 - d.p * th * th);
  if (params.E() == params.F()) {
    const double s = std::sin(params.lambda() * params.tau());
    t.mobility = params.beta() * s * s / (2.0 * params.tau());
  }
  return t;
}

double WalkLaw::log_prob(int k) const {
  if (k < -n || k > n) return -kInf;
  return log_pmf[static_cast<std::size_t>(k + n)];
}

double WalkLaw::prob(int k) const { return std::exp(log_prob(k)); }

double WalkLaw::total() const {
  double s = 0.0;
  for (double v : log_pmf) s += std::exp(v);
  return s;
}

double WalkLaw::mean() const {
  double s = 0.0;
  for (int k = -n; k <= n; ++k) s += k * prob(k);
  return s;
}

double WalkLaw::variance() const {
  const double m = mean();
  double s = 0.0;
  for (int k = -n; k <= n; ++k) s += (k - m) * (k - m) * prob(k);
  return s;
}

WalkLaw walk_pmf_exact(int n, const KrausTriple& triple) {
  if (n < 0) throw std::invalid_argument("walk_pmf_exact: n must be >= 0");
  const double lm = log_or_ninf(triple.p_minus);
  const double l0 = log_or_ninf(triple.p_zero);
  const double lp = log_or_ninf(triple.p_plus);
  std::vector<double> cur(1, 0.0);
  std::vector<double> next;
  for (int step = 1; step <= n; ++step) {
    // cur covers k = -(step-1)..(step-1); next covers -step..step
    const int w = 2 * step + 1;
    next.assign(static_cast<std::size_t>(w), -kInf);
    const int prev_w = w - 2;
    for (int i = 0; i < w; ++i) {
      // next index i <-> k = i - step; in cur, k sits at k + step - 1 = i - 1
      const int c = i - 1;
      const double from_left = (c - 1 >= 0 && c - 1 < prev_w) ? cur[static_cast<std::size_t>(c - 1)] + lp : -kInf;
      const double stay = (c >= 0 && c < prev_w) ? cur[static_cast<std::size_t>(c)] + l0 : -kInf;
      const double from_right = (c + 1 >= 0 && c + 1 < prev_w) ? cur[static_cast<std::size_t>(c + 1)] + lm : -kInf;
      next[static_cast<std::size_t>(i)] = log_sum_exp3(from_left, stay, from_right);
    }
    cur.swap(next);
  }
  return {triple, n, std::move(cur)};
}

WalkLaw walk_pmf_exact(int n, const ModelParams& params) { return walk_pmf_exact(n, kraus_weights(params)); }

double WalkSample::mean() const { return static_cast<double>(sum) / static_cast<double>(trials); }

double WalkSample::variance() const {
  const double m = mean();
  return static_cast<double>(sum_squares) / static_cast<double>(trials) - m * m;
}

WalkSample sample_walk(int n, std::int64_t trials, std::uint64_t seed, const KrausTriple& triple, unsigned threads) {
  if (trials <= 0) throw std::invalid_argument("sample_walk: trials must be > 0");
  if (n < 0) throw std::invalid_argument("sample_walk: n must be >= 0");
  const double scale = 0x1.0p53;
  const auto t_plus = static_cast<std::uint64_t>(triple.p_plus * scale);
  const auto t_move = t_plus + static_cast<std::uint64_t>(triple.p_minus * scale);

  WalkSample out;
  out.n = n;
  out.trials = trials;
  out.seed = seed;
  out.counts.assign(static_cast<std::size_t>(2 * n + 1), 0);

  const std::int64_t blocks = (trials + kWalkBlock - 1) / kWalkBlock;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, blocks));

  std::atomic<std::int64_t> next_block{0};
  std::mutex merge;
  auto worker = [&]() {
    std::int64_t sum = 0, sum_sq = 0;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(2 * n + 1), 0);
    for (;;) {
      const std::int64_t b = next_block.fetch_add(1);
      if (b >= blocks) break;
      CounterRng rng = CounterRng::stream(seed, static_cast<std::uint64_t>(b));
      const std::int64_t end = std::min(trials, (b + 1) * kWalkBlock);
      for (std::int64_t t = b * kWalkBlock; t < end; ++t) {
        std::int64_t s = 0;
        for (int step = 0; step < n; ++step) {
          const std::uint64_t u = rng.next_u64() >> 11;
          s += (u < t_plus) ? 1 : (u < t_move ? -1 : 0);
        }
        sum += s;
        sum_sq += s * s;
        ++counts[static_cast<std::size_t>(s + n)];
      }
    }
    std::lock_guard<std::mutex> lock(merge);
    out.sum += sum;
    out.sum_squares += sum_sq;
    for (std::size_t i = 0; i < counts.size(); ++i) out.counts[i] += counts[i];
  };

  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

WalkSample sample_walk(int n, std::int64_t trials, std::uint64_t seed, const ModelParams& params, unsigned threads) {
  return sample_walk(n, trials, seed, kraus_weights(params), threads);
}

double scgf(double eta, const ModelParams& params) {
  const double p = derive_params(params).p;
  if (p == 0.0) return 0.0;
  const double c = 0.5 * params.beta_e();
  const double jump = std::log(p) + log_cosh(eta + c) - log_cosh(c);
  if (p == 1.0) return jump;
  const double stay = std::log1p(-p);
  const double m = std::max(stay, jump);
  return m + std::log1p(std::exp(std::min(stay, jump) - m));
}

double scgf_derivative(double eta, const ModelParams& params) {
  const double p = derive_params(params).p;
  const double c = 0.5 * params.beta_e();
  return p * sinh_over_cosh(eta + c, c) / ((1.0 - p) + p * cosh_over_cosh(eta + c, c));
}

double legendre_sup(double x, const std::function<Jet(double)>& f) {
  // Bracket a root of g(t) = f'(t) - x, which is increasing.
  double lo = -1.0, hi = 1.0;
  Jet jl = f(lo), jh = f(hi);
  for (int i = 0; jl.d1 > x; ++i) {
    if (i > 60) throw NumericError("legendre_sup: no lower bracket for x = " + std::to_string(x));
    hi = lo;
    jh = jl;
    lo *= 2.0;
    jl = f(lo);
  }
  for (int i = 0; jh.d1 < x; ++i) {
    if (i > 60) throw NumericError("legendre_sup: no upper bracket for x = " + std::to_string(x));
    lo = hi;
    jl = jh;
    hi *= 2.0;
    jh = f(hi);
  }

  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < kTolerances.legendre_max_iter; ++iter) {
    const Jet j = f(t);
    const double g = j.d1 - x;
    if (std::abs(g) <= kTolerances.legendre_slope) return t * x - j.value;
    if (g > 0.0)
      hi = t;
    else
      lo = t;
    double cand = (j.d2 > 0.0) ? t - g / j.d2 : 0.5 * (lo + hi);
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    if (cand == t || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      const Jet jt = f(cand);
      return cand * x - jt.value;
    }
    t = cand;
  }
  throw NumericError("legendre_sup: no convergence for x = " + std::to_string(x));
}

double rate_shape(const ModelParams& params) {
  const double p = derive_params(params).p;
  return p / ((1.0 - p) * std::cosh(0.5 * params.beta_e()));
}

double rate_function(double x, const ModelParams& params) {
  if (!(x >= -1.0 && x <= 1.0)) return kInf;
  const double p = derive_params(params).p;
  if (p == 0.0) return x == 0.0 ? 0.0 : kInf;
  const KrausTriple k = kraus_weights(params);
  if (x == 1.0) return -std::log(k.p_plus);
  if (x == -1.0) return -std::log(k.p_minus);

  // With q = 1 - p and b = p / cosh(beta E / 2):
  // I(x) = -x (beta E / 2 + log((Rt - q x) / (b (1 + x)))) - log((Rt + q) / (1 - x^2)),
  // Rt = sqrt(q^2 x^2 + b^2 (1 - x^2)). For x > 0, Rt - q x = b^2 (1 - x^2) / (Rt + q x).
  const double c = 0.5 * params.beta_e();
  const double q = 1.0 - p;
  const double log_b = std::log(p) - log_cosh(c);
  const double b = std::exp(log_b);
  const double rt = std::sqrt(q * q * x * x + b * b * (1.0 - x) * (1.0 + x));
  if (x > 0.0) {
    return -x * (c + log_b - std::log(rt + q * x)) + xlogx(1.0 - x) + std::log1p(x) - std::log(rt + q);
  }
  return -x * (c + std::log(rt - q * x) - log_b) + xlogx(1.0 + x) + std::log1p(-x) - std::log(rt + q);
}

double rate_function_numeric(double x, const ModelParams& params) {
  if (!(x > -1.0 && x < 1.0)) throw std::invalid_argument("rate_function_numeric needs |x| < 1");
  const double p = derive_params(params).p;
  if (p == 0.0) return x == 0.0 ? 0.0 : kInf;
  const double c = 0.5 * params.beta_e();
  return legendre_sup(x, [&](double eta) {
    const double ch = cosh_over_cosh(eta + c, c);
    const double sh = sinh_over_cosh(eta + c, c);
    const double th = (1.0 - p) + p * ch;
    const double d1 = p * sh / th;
    return Jet{std::log(th), d1, p * ch / th - d1 * d1};
  });
}

double rate_function_entropy(double s, const ModelParams& params) {
  const double p = derive_params(params).p;
  const double be = params.beta_e();
  if (p == 0.0 || be == 0.0) return s == 0.0 ? 0.0 : kInf;
  if (!(std::abs(s) < be)) {
    if (std::abs(s) == be) return rate_function(-s / be, params);
    return kInf;
  }
  const double c = 0.5 * be;
  return legendre_sup(s, [&](double alpha) {
    const double a = (0.5 - alpha) * be;
    const double ch = cosh_over_cosh(a, c);
    const double sh = sinh_over_cosh(a, c);
    const double th = (1.0 - p) + p * ch;
    const double d1 = -be * p * sh / th;
    return Jet{std::log(th), d1, be * be * p * ch / th - d1 * d1};
  });
}

}  // namespace tbc
