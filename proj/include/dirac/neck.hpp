#pragma once

// The gluing neck: warp profile rho with rho(t) = |t| for |t| >= t_{-2},
// the parameter schedule t_{+-1}, t_{+-2}, delta, the radial cut-off chi,
// and the warped-cylinder L^2 estimate.

#include <string>
#include <vector>

#include "dirac/core.hpp"
#include "dirac/radial_system.hpp"
#include "dirac/warp_profile.hpp"

namespace dirac {

/// Even C^3 function with s(x) = |x| for |x| >= 1, s(0) = 1/2, 0 <= s' <= 1 on [0, 1].
double neck_smoothing(double x);
double neck_smoothing_derivative(double x);

/// Neck profile on [-1, 1]: rho(t) = t_{-2} s(t / t_{-2}) with t_{-2} = 2^-9 t_2^16.
/// Requires 0 < t_2 < 1.
WarpProfile build_neck(double t_2);

/// min{1/(100 Lambda^2), 2^-4, 1/(2 Lambda), 1/(2(k+1)), 2^-17 eps^2 / (k+1)^2}.
double delta_of(double Lambda, double epsilon, int k);

struct GlueSchedule {
  double t_2 = 0, t_1 = 0, t_m1 = 0, t_m2 = 0;
  double Lambda = 0, epsilon = 0;
  int k = 0;
  double delta = 0;

  /// t_1 = t_2^4 / 2, t_{-1} = t_1 / 2, t_{-2} = 2^-9 t_2^16, delta = delta_of(...).
  static GlueSchedule make(double t_2, double Lambda, double epsilon, int k);

  /// Unmet requirements of the small-neck statement (t_2 < min{delta, 2^-4}).
  std::vector<std::string> violations() const;
  bool compliant() const { return violations().empty(); }
};

/// Radial cut-off: 0 for t <= inner, 1 for t >= outer, quintic smoothstep between.
class CutoffFunction {
 public:
  CutoffFunction(double inner, double outer);
  /// chi == 1 everywhere.
  static CutoffFunction identity();

  double operator()(double t) const;
  double derivative(double t) const;
  double inner() const { return inner_; }
  double outer() const { return outer_; }
  bool is_identity() const { return identity_; }
  /// The admissible gradient bound 4 / t_1.
  double gradient_bound() const;
  /// Sampled sup |chi'| over the transition.
  double sup_derivative(int samples = 10000) const;

 private:
  double inner_ = 0, outer_ = 0;
  bool identity_ = false;
};

/// Requires 0 < t_m1 = t_1 / 2 (to relative 1e-12).
CutoffFunction build_cutoff(double t_1, double t_m1);

/// Radial system with rho in place of t in the diagonal.
RadialParams warped_radial_params(const WarpProfile& profile, double mu, double lambda);

struct Prop33Row {
  double theta = 0;
  double inner = 0;   // ||sigma||^2 on [a, b]
  double outer = 0;   // ||sigma||^2 on [b, b+c] and [a-c, a]
  double rhs = 0;     // (b-a)/(2c) * outer
  bool passed = false;
};

struct Prop33Report {
  double lambda = 0, a = 0, b = 0, c = 0, mu = 0;
  double hypothesis_value = 0;  // |lambda| sup|rho| + sup|rho'| / 2
  std::vector<Prop33Row> rows;
  bool passed = false;

  /// Smallest rhs / inner over the rows.
  double worst_quotient() const;
};

/// Checks ||sigma||^2_{[a,b]} <= (b-a)/(2c) (||sigma||^2_{[b,b+c]} + ||sigma||^2_{[a-c,a]})
/// for solutions anchored at (a+b)/2 in `directions` real directions.
/// Throws HypothesisError when |lambda| sup|rho| + sup|rho'|/2 > 1 on [a-c, b+c]
/// and std::invalid_argument for a malformed interval.
Prop33Report prop33_check(const WarpProfile& profile, double lambda, double a, double b,
                          double c, double mu, int directions = 16,
                          const ode::Tolerance& tol = {1e-11, 1e-300});

}  // namespace dirac
