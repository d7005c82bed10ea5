#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tbc/channel.hpp"
#include "tbc/params.hpp"

namespace tbc {

struct TransportCoefficients {
  double drift = 0.0;                // v_d = (p / tau) tanh(beta E / 2)
  double diffusion = 0.0;            // D = (p / 2 tau)(1 - p tanh^2(beta E / 2))
  std::optional<double> mobility;    // beta sin^2(lambda tau) / (2 tau), only when E == F
};

TransportCoefficients transport_coefficients(const ModelParams& params);

/// Exact law of S_n, the sum of n i.i.d. steps in {-1, 0, +1} with weights
/// (p_-, p_0, p_+). Stored as natural logarithms so that tails far below the
/// double range stay exact.
struct WalkLaw {
  KrausTriple triple;
  int n = 0;
  std::vector<double> log_pmf;  // log P[S_n = k] at index k + n

  double log_prob(int k) const;
  double prob(int k) const;
  double total() const;
  double mean() const;
  double variance() const;
};

WalkLaw walk_pmf_exact(int n, const KrausTriple& triple);
WalkLaw walk_pmf_exact(int n, const ModelParams& params);

/// Monte Carlo estimate of the law of S_n.
struct WalkSample {
  int n = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::int64_t sum = 0;          // sum of S_n over trials
  std::int64_t sum_squares = 0;  // sum of S_n^2 over trials
  std::vector<std::int64_t> counts;  // counts[k + n] = #{trials with S_n = k}

  double mean() const;
  double variance() const;
};

/// Trials are grouped in fixed blocks of `kWalkBlock`; block b draws from
/// CounterRng::stream(seed, b). The result does not depend on `threads`
/// (0 = hardware concurrency).
inline constexpr std::int64_t kWalkBlock = 4096;
WalkSample sample_walk(int n, std::int64_t trials, std::uint64_t seed, const KrausTriple& triple, unsigned threads = 0);
WalkSample sample_walk(int n, std::int64_t trials, std::uint64_t seed, const ModelParams& params, unsigned threads = 0);

/// e(eta) = log theta(-eta / beta E) = log((1 - p) + p cosh(eta + beta E / 2) / cosh(beta E / 2)).
double scgf(double eta, const ModelParams& params);
double scgf_derivative(double eta, const ModelParams& params);

/// Value, first and second derivative of a smooth convex function.
struct Jet {
  double value;
  double d1;
  double d2;
};

/// sup_t (t x - f(t)) for a strictly convex f whose derivative sweeps past x.
/// Safeguarded Newton on f'(t) = x, with bisection inside an expanding bracket.
/// Throws NumericError if no bracket or no convergence is found.
double legendre_sup(double x, const std::function<Jet(double)>& f);

/// Closed form of I(x) = sup_eta (eta x - e(eta)); +inf outside [-1, 1].
double rate_function(double x, const ModelParams& params);

/// I(x) through legendre_sup on e(eta). Requires |x| < 1.
double rate_function_numeric(double x, const ModelParams& params);

/// phi(s) = sup_alpha (alpha s - log theta(alpha)), by legendre_sup.
/// phi(s) = I(-s / beta E).
double rate_function_entropy(double s, const ModelParams& params);

/// a = p / ((1 - p) cosh(beta E / 2)), the shape parameter of I.
double rate_shape(const ModelParams& params);

}  // namespace tbc
