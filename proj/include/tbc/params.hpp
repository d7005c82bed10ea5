#pragma once

#include <string>

namespace tbc {

/// The five physical inputs of the model. F > 0 and tau > 0 are enforced on
/// construction; E >= 0 and beta >= 0 likewise.
class ModelParams {
 public:
  ModelParams(double E, double F, double lambda, double tau, double beta);

  double E() const { return E_; }
  double F() const { return F_; }
  double lambda() const { return lambda_; }
  double tau() const { return tau_; }
  double beta() const { return beta_; }
  double beta_e() const { return beta_ * E_; }

  std::string describe() const;

 private:
  double E_;
  double F_;
  double lambda_;
  double tau_;
  double beta_;
};

/// Scalars derived from ModelParams.
///
/// The mixing angle theta (cos 2theta = (E-F)/omega0, sin 2theta = 2 lambda/omega0)
/// is never stored as an angle. Half-angle values come from the branch that
/// avoids division by a small number:
///   cos 2theta >= 0:  cos theta = sqrt((1 + cos 2theta)/2), sin theta = sin 2theta/(2 cos theta)
///   cos 2theta <  0:  sin theta = sqrt((1 - cos 2theta)/2) * sign(lambda), cos theta = sin 2theta/(2 sin theta)
/// so that lambda = 0 with E > F gives (cos, sin) = (1, 0) and lambda = 0 with
/// E < F gives (0, 1). When omega0 = 0 (lambda = 0 and E = F) the coupling
/// vanishes, H is diagonal and we set cos 2theta = 1, sin 2theta = 0.
struct DerivedParams {
  double omega0 = 0.0;
  double p = 0.0;
  double cos2theta = 1.0;
  double sin2theta = 0.0;
  double cos_theta = 1.0;
  double sin_theta = 0.0;
  double zbeta = 2.0;
  double gibbs_ground = 0.5;
  double gibbs_excited = 0.5;
  double bloch_freq = 0.0;
  bool resonant = false;  // p == 0: lambda == 0 or omega0 * tau in 2 pi Z
};

DerivedParams derive_params(const ModelParams& raw);

}  // namespace tbc
