#include "tbc/params.hpp"

#include <cmath>
#include <sstream>

#include "tbc/errors.hpp"
#include "tbc/tolerances.hpp"

namespace tbc {

ModelParams::ModelParams(double E, double F, double lambda, double tau, double beta)
    : E_(E), F_(F), lambda_(lambda), tau_(tau), beta_(beta) {
  if (!std::isfinite(E) || !std::isfinite(F) || !std::isfinite(lambda) || !std::isfinite(tau) ||
      !std::isfinite(beta)) {
    throw InvalidParams("model parameters must be finite");
  }
  if (!(F > 0.0)) {
    throw InvalidParams("F must be > 0 (the F = 0 ballistic band is not supported)");
  }
  if (!(tau > 0.0)) throw InvalidParams("tau must be > 0");
  if (E < 0.0) throw InvalidParams("E must be >= 0");
  if (beta < 0.0) throw InvalidParams("beta must be >= 0");
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "E=" << E_ << " F=" << F_ << " lambda=" << lambda_ << " tau=" << tau_ << " beta=" << beta_;
  return os.str();
}

DerivedParams derive_params(const ModelParams& raw) {
  DerivedParams d;
  const double detuning = raw.E() - raw.F();
  const double lambda = raw.lambda();
  d.omega0 = std::hypot(detuning, 2.0 * lambda);
  d.bloch_freq = raw.F();

  if (d.omega0 > 0.0) {
    d.cos2theta = detuning / d.omega0;
    d.sin2theta = 2.0 * lambda / d.omega0;
    if (d.cos2theta >= 0.0) {
      d.cos_theta = std::sqrt(0.5 * (1.0 + d.cos2theta));
      d.sin_theta = d.sin2theta / (2.0 * d.cos_theta);
    } else {
      d.sin_theta = std::sqrt(0.5 * (1.0 - d.cos2theta));
      if (lambda < 0.0) d.sin_theta = -d.sin_theta;
      d.cos_theta = d.sin2theta / (2.0 * d.sin_theta);
    }
    const double s = std::sin(0.5 * d.omega0 * raw.tau());
    d.p = d.sin2theta * d.sin2theta * s * s;
  }
  if (lambda == 0.0 || d.p < kTolerances.resonance) d.resonant = true;

  // Gibbs weights of the two-level atom, written to stay finite for large beta E.
  const double be = raw.beta_e();
  d.zbeta = 1.0 + std::exp(-be);
  d.gibbs_ground = 1.0 / (1.0 + std::exp(-be));
  d.gibbs_excited = 1.0 / (1.0 + std::exp(be));
  return d;
}

}  // namespace tbc
