#include "dirac/warp_profile.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "dirac/core.hpp"
#include "format.hpp"

namespace dirac {

double Mat2::op_norm() const {
  // Largest singular value of a real 2x2 matrix.
  const double s = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
  const double det = a11 * a22 - a12 * a21;
  const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * det * det));
  return std::sqrt(0.5 * (s + disc));
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::euclidean: return "euclidean";
    case ProfileKind::neck: return "neck";
    case ProfileKind::cap: return "cap";
    case ProfileKind::composite: return "composite";
    case ProfileKind::constant: return "constant";
  }
  return "unknown";
}

WarpProfile::WarpProfile(double lower, double upper, Fn rho, Fn rho_dot, ProfileKind kind)
    : lower_(lower), upper_(upper), rho_(std::move(rho)), rho_dot_(std::move(rho_dot)), kind_(kind) {
  if (!(lower < upper)) throw std::invalid_argument("WarpProfile: empty domain");
}

WarpProfile WarpProfile::euclidean(double lower, double upper) {
  if (!(lower > 0)) throw std::invalid_argument("WarpProfile::euclidean: lower must be > 0");
  return {lower, upper, [](double t) { return t; }, [](double) { return 1.0; },
          ProfileKind::euclidean};
}

WarpProfile WarpProfile::constant(double value, double lower, double upper) {
  if (!(value > 0)) throw std::invalid_argument("WarpProfile::constant: value must be > 0");
  return {lower, upper, [value](double) { return value; }, [](double) { return 0.0; },
          ProfileKind::constant};
}

double WarpProfile::sup_abs(double a, double b, int samples) const {
  double m = 0;
  for (int i = 0; i <= samples; ++i) m = std::max(m, std::abs(rho_(a + (b - a) * i / samples)));
  return m;
}

double WarpProfile::sup_abs_derivative(double a, double b, int samples) const {
  double m = 0;
  for (int i = 0; i <= samples; ++i)
    m = std::max(m, std::abs(rho_dot_(a + (b - a) * i / samples)));
  return m;
}

void WarpProfile::write_csv(std::ostream& os, double a, double b, int samples) const {
  os << "t,rho,rho_dot\n";
  for (int i = 0; i <= samples; ++i) {
    const double t = a + (b - a) * i / samples;
    os << sci(t) << ',' << sci(rho_(t)) << ',' << sci(rho_dot_(t)) << '\n';
  }
}

}  // namespace dirac
