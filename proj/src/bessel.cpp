#include "tbc/bessel.hpp"

#include <cmath>
#include <string>

#include "tbc/errors.hpp"
#include "tbc/tolerances.hpp"

namespace tbc {

namespace {

// J_0..J_top(z) for z > 0 by downward recurrence from a start order far
// above both top and z.
std::vector<double> miller_nonnegative(double z, int top) {
  const double scale_ref = std::max<double>(top, z);
  int start = static_cast<int>(scale_ref) + 40 + static_cast<int>(std::sqrt(160.0 * scale_ref));
  start += start % 2;

  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[static_cast<std::size_t>(start) + 1] = 0.0;
  j[static_cast<std::size_t>(start)] = 1e-30;
  for (int nu = start; nu >= 1; --nu) {
    const auto u = static_cast<std::size_t>(nu);
    j[u - 1] = (2.0 * nu / z) * j[u] - j[u + 1];
    if (std::abs(j[u - 1]) > 1e250) {
      for (std::size_t i = u - 1; i < j.size(); ++i) j[i] *= 1e-250;
    }
  }

  double peak = 0.0;
  for (double v : j) peak = std::max(peak, std::abs(v));
  for (double& v : j) v /= peak;

  double squares = j[0] * j[0];
  double neumann = j[0];
  for (int nu = 1; nu <= start; ++nu) {
    const double v = j[static_cast<std::size_t>(nu)];
    squares += 2.0 * v * v;
    if (nu % 2 == 0) neumann += 2.0 * v;
  }
  const double norm = std::copysign(1.0 / std::sqrt(squares), neumann);
  j.resize(static_cast<std::size_t>(top) + 1);
  for (double& v : j) v *= norm;
  return j;
}

}  // namespace

BesselTable BesselTable::for_force(double F, int range) {
  if (!(F > 0.0)) throw InvalidParams("Bessel table needs F > 0");
  return at(2.0 / F, range);
}

BesselTable BesselTable::at(double z, int range) {
  if (range < 0) throw AccuracyError("Bessel table range must be >= 0");
  std::vector<double> values(2 * static_cast<std::size_t>(range) + 1, 0.0);
  const double az = std::abs(z);
  std::vector<double> pos;
  if (az == 0.0) {
    pos.assign(static_cast<std::size_t>(range) + 1, 0.0);
    pos[0] = 1.0;
  } else {
    pos = miller_nonnegative(az, range);
  }
  for (int nu = 0; nu <= range; ++nu) {
    double v = pos[static_cast<std::size_t>(nu)];
    // J_nu(-z) = (-1)^nu J_nu(z)
    if (z < 0.0 && nu % 2 != 0) v = -v;
    values[static_cast<std::size_t>(range + nu)] = v;
    values[static_cast<std::size_t>(range - nu)] = (nu % 2 == 0) ? v : -v;
  }
  BesselTable table(z, range, std::move(values));
  const double deficit = 1.0 - table.norm_squared();
  if (deficit > kTolerances.bessel_norm) {
    throw AccuracyError("Bessel table range " + std::to_string(range) + " too small for argument " +
                        std::to_string(z) + ": missing mass " + std::to_string(deficit));
  }
  return table;
}

double BesselTable::norm_squared() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

int bessel_reach(double z, double tail) {
  const double az = std::abs(z);
  if (az == 0.0) return 0;
  const int top = static_cast<int>(az) + 60 + static_cast<int>(std::sqrt(400.0 * az));
  const std::vector<double> j = miller_nonnegative(az, top);
  for (int nu = top; nu >= 0; --nu) {
    if (std::abs(j[static_cast<std::size_t>(nu)]) >= tail) return nu;
  }
  return 0;
}

}  // namespace tbc
