#pragma once

namespace tbc {

/// Numerical thresholds used by the library. All arithmetic is IEEE double.
struct Tolerances {
  double hermitian = 1e-12;      // |rho - rho^*| entrywise
  double psd_floor = -1e-10;     // smallest admissible eigenvalue
  double trace = 1e-10;          // |Tr rho - 1|
  double leakage = 1e-8;         // position mass lost outside the x-range
  double bessel_norm = 1e-12;    // 1 - sum_nu J_nu^2 over the table range
  double bessel_tail = 1e-18;    // |J_nu| below this is dropped from windows
  double kraus_sum = 1e-14;      // |p_- + p_0 + p_+ - 1|
  double resonance = 1e-14;      // p below this counts as the Rabi resonance
  double legendre_slope = 1e-15; // Newton stopping criterion on |f'(t) - x|
  int legendre_max_iter = 200;
};

inline constexpr Tolerances kTolerances{};

}  // namespace tbc
