#pragma once

#include <functional>
#include <iosfwd>
#include <string>

namespace dirac {

enum class ProfileKind { euclidean, neck, cap, composite, constant };

std::string to_string(ProfileKind kind);

/// Warping function rho(t) of the metric dt^2 + rho(t)^2 dsigma^2 on
/// [lower, upper] x S^{n-1}. Immutable once built.
class WarpProfile {
 public:
  using Fn = std::function<double(double)>;

  WarpProfile(double lower, double upper, Fn rho, Fn rho_dot, ProfileKind kind);

  /// rho(t) = t on [lower, upper], lower > 0.
  static WarpProfile euclidean(double lower, double upper);
  /// rho(t) = value on [lower, upper].
  static WarpProfile constant(double value, double lower, double upper);

  double operator()(double t) const { return rho_(t); }
  double derivative(double t) const { return rho_dot_(t); }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool contains(double t) const { return t >= lower_ && t <= upper_; }
  ProfileKind kind() const { return kind_; }

  /// Sampled sup of |rho| and |rho'| over [a, b] (samples + 1 points).
  double sup_abs(double a, double b, int samples = 10000) const;
  double sup_abs_derivative(double a, double b, int samples = 10000) const;

  /// Writes "t,rho,rho_dot" rows at `samples` + 1 equispaced points.
  void write_csv(std::ostream& os, double a, double b, int samples) const;

 private:
  double lower_, upper_;
  Fn rho_, rho_dot_;
  ProfileKind kind_;
};

}  // namespace dirac
