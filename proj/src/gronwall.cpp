#include "dirac/gronwall.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <ostream>

#include "format.hpp"

namespace dirac {

double gronwall_bound(double a_sup, const std::function<double(double)>& delta, double x0,
                      double x, double quadrature_tol) {
  if (x == x0) return 0.0;
  const double lo = std::min(x0, x), hi = std::max(x0, x);
  auto integrand = [&](double s) { return delta(s) * std::exp(a_sup * std::abs(x - s)); };
  const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, lo, hi, 15, quadrature_tol);
  return std::abs(val);
}

std::string to_string(ComparisonStatus s) {
  switch (s) {
    case ComparisonStatus::ok: return "ok";
    case ComparisonStatus::hypothesis_violation: return "hypothesis_violation";
    case ComparisonStatus::conclusion_violation: return "conclusion_violation";
  }
  return "unknown";
}

void ComparisonReport::write_columns(std::ostream& os) const {
  os << "x,deviation,bound\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    os << sci(grid[i]) << ',' << sci(deviation[i]) << ',' << sci(bound[i]) << '\n';
}

ComparisonReport verify_comparison(const ComparisonProblem& p) {
  ComparisonReport rep;
  rep.a_sup = p.a_sup;
  rep.grid = p.grid;

  // Hypothesis (i).
  const Vec2 u0 = p.u(p.x0), v0 = p.v(p.x0);
  rep.anchor_mismatch = norm(u0 - v0);
  if (rep.anchor_mismatch > p.anchor_tolerance * std::max(1.0, norm(u0))) {
    rep.status = ComparisonStatus::hypothesis_violation;
    rep.detail = "anchor mismatch";
  }

  // Hypothesis (ii), sampled.
  const auto [gmin, gmax] = std::minmax_element(p.grid.begin(), p.grid.end());
  rep.worst_defect_excess = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < p.domination_samples; ++i) {
    const double x = *gmin + (*gmax - *gmin) * i / std::max(1, p.domination_samples - 1);
    const Vec2 v = p.v(x);
    const double defect = norm(p.v_derivative(x) - p.matrix(x) * v);
    const double d = p.delta(x);
    const double excess = defect - d;
    rep.worst_defect_excess = std::max(rep.worst_defect_excess, excess);
    if (excess > 1e-10 * d + 1e-14 * norm(v) && rep.status == ComparisonStatus::ok) {
      rep.status = ComparisonStatus::hypothesis_violation;
      rep.detail = "defect exceeds delta at x = " + std::to_string(x);
    }
  }

  // Conclusion.
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.deviation.reserve(p.grid.size());
  rep.bound.reserve(p.grid.size());
  for (double x : p.grid) {
    const double dev = norm(p.u(x) - p.v(x));
    const double b = gronwall_bound(p.a_sup, p.delta, p.x0, x);
    rep.deviation.push_back(dev);
    rep.bound.push_back(b);
    const double margin = b + p.slack_abs + p.slack_rel * b - dev;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < 0 && rep.status == ComparisonStatus::ok) {
      rep.status = ComparisonStatus::conclusion_violation;
      rep.detail = "deviation exceeds bound at x = " + std::to_string(x);
    }
  }
  return rep;
}

ComparisonReport verify_comparison(const RadialTrajectory& u, const PowerLawSolution& v,
                                   double a_sup, const std::function<double(double)>& delta,
                                   double x0) {
  ComparisonProblem p;
  p.grid = u.grid();
  p.u = [&u](double x) { return u.at(x); };
  const bool log_coord = u.coordinate() == Coordinate::log;
  p.v = [&v, log_coord](double x) { return log_coord ? v.at_tau(x) : v.at_t(x); };
  p.v_derivative = [&v, log_coord](double x) {
    return log_coord ? v.derivative_tau(x) : v.derivative_t(x);
  };
  const RadialParams& params = u.params();
  const Coordinate c = u.coordinate();
  p.matrix = [&params, c](double x) { return params.matrix_in(c, x); };
  p.delta = delta;
  p.a_sup = a_sup;
  p.x0 = x0;
  return verify_comparison(p);
}

}  // namespace dirac
