#pragma once

// Comparison of a solution u of u' = A(x) u with a function v satisfying
//   (i)  v(x0) = u(x0),
//   (ii) |v'(x) - A(x) v(x)| <= delta(x),
// through the Gronwall-type estimate
//   |u(x) - v(x)| <= | int_{x0}^{x} delta(s) exp(|A|_inf |x - s|) ds |.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dirac/core.hpp"
#include "dirac/radial_system.hpp"

namespace dirac {

/// Right-hand side of the estimate. Exactly 0 when x == x0.
double gronwall_bound(double a_sup, const std::function<double(double)>& delta, double x0,
                      double x, double quadrature_tol = 1e-12);

enum class ComparisonStatus { ok, hypothesis_violation, conclusion_violation };
std::string to_string(ComparisonStatus s);

struct ComparisonReport {
  std::vector<double> grid;
  std::vector<double> deviation;  // |u - v|
  std::vector<double> bound;
  double a_sup = 0;
  ComparisonStatus status = ComparisonStatus::ok;
  double anchor_mismatch = 0;   // |u(x0) - v(x0)|
  double worst_defect_excess = 0;  // max of |v' - A v| - delta over samples (<= 0 when (ii) holds)
  double worst_margin = 0;      // min over grid of (bound + slack - deviation)
  std::string detail;

  bool passed() const { return status == ComparisonStatus::ok; }
  void write_columns(std::ostream& os) const;
};

struct ComparisonProblem {
  std::vector<double> grid;
  std::function<Vec2(double)> u;
  std::function<Vec2(double)> v;
  std::function<Vec2(double)> v_derivative;
  std::function<Mat2(double)> matrix;
  std::function<double(double)> delta;
  double a_sup = 0;
  double x0 = 0;
  /// Allowed |u(x0) - v(x0)| relative to |u(x0)| (integrator anchors exactly).
  double anchor_tolerance = 1e-12;
  int domination_samples = 257;
  double slack_abs = 1e-12;
  double slack_rel = 1e-8;
};

ComparisonReport verify_comparison(const ComparisonProblem& problem);

/// Convenience overload: u a radial trajectory, v a power-law comparison
/// function expressed in the trajectory's coordinate.
ComparisonReport verify_comparison(const RadialTrajectory& u, const PowerLawSolution& v,
                                   double a_sup, const std::function<double(double)>& delta,
                                   double x0);

}  // namespace dirac
