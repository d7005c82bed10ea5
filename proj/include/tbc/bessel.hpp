#pragma once

#include <span>
#include <vector>

namespace tbc {

/// Integer-order Bessel functions J_nu(z) for |nu| <= range.
///
/// Values come from Miller's downward recurrence started well above the
/// requested range, normalized with J_0^2 + 2 sum_{nu>0} J_nu^2 = 1 (the sign
/// is fixed by J_0 + 2 sum J_{2m} = 1). Negative orders use J_{-nu} = (-1)^nu J_nu.
/// Orders outside the table read as exactly zero.
class BesselTable {
 public:
  /// Wannier-Stark profile table: argument 2/F, so psi_k(x) = J_{k-x}(2/F).
  static BesselTable for_force(double F, int range);
  static BesselTable at(double z, int range);

  double argument() const { return z_; }
  int range() const { return range_; }

  double operator()(int nu) const {
    if (nu < -range_ || nu > range_) return 0.0;
    return values_[static_cast<std::size_t>(nu + range_)];
  }

  /// psi_k(x) = J_{k-x}(2/F) for tables built with for_force.
  double psi(int k, int x) const { return (*this)(k - x); }

  /// Values for nu = -range .. range.
  std::span<const double> values() const { return values_; }

  double norm_squared() const;

 private:
  BesselTable(double z, int range, std::vector<double> values)
      : z_(z), range_(range), values_(std::move(values)) {}

  double z_;
  int range_;
  std::vector<double> values_;
};

/// Smallest r >= 0 such that |J_nu(z)| < tail for every |nu| > r.
int bessel_reach(double z, double tail);

}  // namespace tbc
