#include "dirac/spectral_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "format.hpp"

namespace dirac {

SignedCount count_signed(const Spectrum& spec, double lo, double hi, double zero_tol) {
  SignedCount c;
  for (const auto& e : spec.entries) {
    if (e.eigenvalue < lo || e.eigenvalue > hi) continue;
    if (std::abs(e.eigenvalue) <= zero_tol)
      c.zeros += e.multiplicity;
    else if (e.eigenvalue < 0)
      c.negatives += e.multiplicity;
    else
      c.positives += e.multiplicity;
  }
  return c;
}

BranchFamily synthetic_linear_family(long m, std::vector<SpectrumEntry> background,
                                     double window) {
  if (m < 1) throw std::invalid_argument("synthetic_linear_family: m must be >= 1");
  BranchFamily f;
  f.a = 0;
  f.b = 1;
  f.multiplicity = m;
  f.tag = "synthetic";
  f.generator = [m, background, window](double T) {
    Spectrum s;
    s.Lambda = window;
    s.tag = "synthetic";
    s.entries = background;
    s.entries.push_back({2 * T - 1, m, 0.0});
    s.sort();
    return s;
  };
  return f;
}

Potential cap_well(double opening, double depth) {
  const double a = opening;
  auto h = [a](double x) {
    if (x <= 2 * a) return 0.0;
    if (x >= 3 * a) return 1.0;
    const double u = (x - 2 * a) / a;
    return u * u * u * (10 + u * (-15 + 6 * u));
  };
  auto dh = [a](double x) {
    if (x <= 2 * a || x >= 3 * a) return 0.0;
    const double u = (x - 2 * a) / a;
    return 30 * u * u * (1 - u) * (1 - u) / a;
  };
  return Potential{[h, depth](double x) { return -depth * h(x); },
                   [dh, depth](double x) { return -depth * dh(x); }};
}

BranchFamily geometric_family(const GeometricFamilyOptions& opt) {
  BranchFamily f;
  f.a = opt.a;
  f.b = opt.b;
  f.multiplicity = 0;
  f.tag = "geometric";
  f.generator = [opt](double T) {
    const Cap c1 = round_cap(opt.fixed_radius, opt.opening);
    const Cap c2 = round_cap(T, opt.opening);
    ClosedModel m = glue(c1, c2, opt.t_2, opt.n, "geometric");
    m.potential = cap_well(opt.opening, opt.well_depth);
    m.breakpoints.push_back(3 * opt.opening);
    return assemble_spectrum(m, opt.window, opt.assembly);
  };
  return f;
}

CrossingReport find_crossing(const BranchFamily& family, double tol, int grid) {
  if (!(tol > 0)) throw std::invalid_argument("find_crossing: tol must be > 0");
  if (!(family.a < family.b)) throw std::invalid_argument("find_crossing: need a < b");
  CrossingReport rep;
  auto balance_at = [&](double T) {
    ++rep.evaluations;
    return count_signed(family.generator(T), -1, 1, 0.0);
  };
  rep.at_a = balance_at(family.a);
  rep.at_b = balance_at(family.b);
  const long ba = rep.at_a.balance();
  if (ba == rep.at_b.balance())
    throw NoCrossingError("find_crossing: sign balance does not change between a and b");

  double lo = family.a, hi = family.b;
  if (grid > 1) {
    for (int i = 1; i < grid; ++i) {
      const double T = family.a + (family.b - family.a) * i / grid;
      if (balance_at(T).balance() != ba) {
        hi = T;
        break;
      }
      lo = T;
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (balance_at(mid).balance() == ba)
      lo = mid;
    else
      hi = mid;
  }
  rep.bracket_lo = lo;
  rep.bracket_hi = hi;
  rep.T0 = 0.5 * (lo + hi);
  const Spectrum s = family.generator(rep.T0);
  ++rep.evaluations;
  rep.residual = std::numeric_limits<double>::infinity();
  for (const auto& e : s.entries) rep.residual = std::min(rep.residual, std::abs(e.eigenvalue));
  return rep;
}

void write_branch_csv(std::ostream& os, const BranchFamily& family,
                      const std::vector<double>& Ts) {
  os << "T,eigenvalue,multiplicity\n";
  for (double T : Ts)
    for (const auto& e : family.generator(T).entries)
      os << sci(T) << ',' << sci(e.eigenvalue) << ',' << e.multiplicity << '\n';
}

}  // namespace dirac
