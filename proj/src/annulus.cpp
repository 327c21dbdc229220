#include "dirac/annulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "dirac/sphere_modes.hpp"
#include "format.hpp"

namespace dirac {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::vector<std::string> corollary_violations(double t_2, double Lambda, double lambda) {
  std::vector<std::string> v;
  if (!(t_2 > 0 && t_2 < 0.0625)) v.push_back("0 < t_2 < 2^-4 fails (t_2 = " + fmt(t_2) + ")");
  if (!(std::abs(lambda) <= Lambda))
    v.push_back("|lambda| <= Lambda fails (" + fmt(lambda) + ", " + fmt(Lambda) + ")");
  if (!(Lambda * std::sqrt(t_2) <= 0.1))
    v.push_back("Lambda t_2^(1/2) <= 1/10 fails (" + fmt(Lambda * std::sqrt(t_2)) + ")");
  return v;
}

void throw_if(const std::vector<std::string>& v, const std::string& where) {
  if (v.empty()) return;
  std::string msg = where + ": hypothesis violated:";
  for (const auto& s : v) msg += "\n  " + s;
  throw HypothesisError(msg);
}

}  // namespace

AnnulusSchedule AnnulusSchedule::corollary1(double t_2, double lambda_cap) {
  AnnulusSchedule s;
  s.t_2 = t_2;
  s.t_1 = 0.5 * std::pow(t_2, 4);
  s.t_m1 = 0.5 * s.t_1;
  s.t_m2 = 0.5 * std::pow(s.t_m1, 4);
  s.lambda_cap = lambda_cap;
  return s;
}

double AnnulusSchedule::t0() const { return std::sqrt(t_1 * t_m1); }

std::vector<std::string> AnnulusSchedule::violations(double lambda) const {
  std::vector<std::string> v;
  if (!(0 < t_m2 && t_m2 < t_m1 && t_m1 < t_1 && t_1 < t_2 && t_2 <= 1))
    v.push_back("0 < t_-2 < t_-1 < t_1 < t_2 <= 1 fails");
  if (!(t_2 >= 2 * t_1)) v.push_back("t_2 >= 2 t_1 fails");
  if (!(t_m1 >= 2 * t_m2)) v.push_back("t_-1 >= 2 t_-2 fails");
  if (!(6 * std::log(t_1) <= std::log(t_m2))) v.push_back("t_1^6 <= t_-2 fails");
  if (!(lambda_cap * std::sqrt(t_2) <= 0.1))
    v.push_back("Lambda t_2^(1/2) <= 1/10 fails (" + fmt(lambda_cap * std::sqrt(t_2)) + ")");
  if (!(std::abs(lambda) * std::sqrt(t_2) <= 0.1))
    v.push_back("|lambda| t_2^(1/2) <= 1/10 fails (" + fmt(std::abs(lambda) * std::sqrt(t_2)) +
                ")");
  return v;
}

void AnnulusSchedule::require(double lambda) const { throw_if(violations(lambda), "annulus"); }

double log_prop32_bound(double mu, const AnnulusSchedule& s, HypothesisMode mode) {
  if (!(mu >= 1)) throw std::invalid_argument("prop32_bound: mu must be >= 1");
  if (mode == HypothesisMode::enforce) s.require(0.0);
  const double a = std::log(3.0) + (2 * mu + 1) * std::log(s.t_1 / s.t_2);
  const double b = std::log(s.t_1 / s.t_m1) + (2 * mu - 1) * std::log(s.t_m2 / s.t_m1);
  return 6 * std::log(2.0) + std::max(a, b);
}

double prop32_bound(double mu, const AnnulusSchedule& s, HypothesisMode mode) {
  return std::exp(log_prop32_bound(mu, s, mode));
}

void RatioReport::write_header(std::ostream& os) {
  os << "mu,lambda,theta,measured,bound,margin\n";
}

void RatioReport::write_row(std::ostream& os) const {
  os << sci(mu) << ',' << sci(lambda) << ',' << sci(theta) << ',' << sci(measured) << ','
     << sci(bound) << ',' << sci(margin()) << '\n';
}

RatioReport measured_ratio(double mu, double lambda, const AnnulusSchedule& s, const Vec2& w,
                           const RatioOptions& opt) {
  if (opt.mode == HypothesisMode::enforce) s.require(lambda);
  if (!(norm_sq(w) > 0)) throw std::invalid_argument("measured_ratio: zero anchor");
  const double tau0 = std::log(s.t0());
  Span span{Coordinate::log, std::log(s.t_m2), std::log(s.t_2), tau0};
  IntegrateOptions io;
  io.tolerance = opt.tolerance;
  io.breakpoints = {std::log(s.t_m1), std::log(s.t_1)};
  const RadialTrajectory traj = integrate(euclidean_params(mu, lambda), span, w, io);

  RatioReport r;
  r.mu = mu;
  r.lambda = lambda;
  r.theta = std::numeric_limits<double>::quiet_NaN();
  r.log_measured = log_l2_norm_sq(traj, s.t_m1, s.t_1) - log_l2_norm_sq(traj, s.t_m2, s.t_2);
  r.measured = std::exp(r.log_measured);
  r.log_bound = log_prop32_bound(mu, s, HypothesisMode::disabled);
  r.bound = std::exp(r.log_bound);
  r.hypotheses_checked = opt.mode == HypothesisMode::enforce;
  return r;
}

RatioReport measured_ratio(double mu, double lambda, const AnnulusSchedule& s, double theta,
                           const RatioOptions& opt) {
  RatioReport r =
      measured_ratio(mu, lambda, s, Vec2{Complex(std::cos(theta)), Complex(std::sin(theta))}, opt);
  r.theta = theta;
  return r;
}

RatioReport max_ratio(double mu, double lambda, const AnnulusSchedule& s, int grid,
                      const RatioOptions& opt) {
  if (grid < 3) throw std::invalid_argument("max_ratio: grid must be >= 3");
  if (opt.mode == HypothesisMode::enforce) s.require(lambda);
  RatioOptions inner = opt;
  inner.mode = HypothesisMode::disabled;
  auto eval = [&](double th) { return measured_ratio(mu, lambda, s, th, inner); };

  const double step = kPi / grid;
  RatioReport best = eval(0.0);
  for (int i = 1; i < grid; ++i) {
    RatioReport r = eval(i * step);
    if (r.log_measured > best.log_measured) best = r;
  }

  // The quotient has period pi in theta, so the bracket may wrap.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = best.theta - step, b = best.theta + step;
  double c = b - g * (b - a), d = a + g * (b - a);
  RatioReport rc = eval(c), rd = eval(d);
  for (int it = 0; it < 40 && b - a > 1e-9; ++it) {
    if (rc.log_measured > rd.log_measured) {
      b = d;
      d = c;
      rd = rc;
      c = b - g * (b - a);
      rc = eval(c);
    } else {
      a = c;
      c = d;
      rc = rd;
      d = a + g * (b - a);
      rd = eval(d);
    }
  }
  for (const RatioReport* r : {&rc, &rd})
    if (r->log_measured > best.log_measured) best = *r;
  best.theta = std::fmod(best.theta + kPi, kPi);
  best.hypotheses_checked = opt.mode == HypothesisMode::enforce;
  return best;
}

double CorollaryReport::margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : modes) m = std::min(m, r.bound - r.measured);
  for (const auto& r : dyadic) m = std::min(m, r.bound - r.measured);
  return m;
}

CorollaryReport corollary1_check(int n, double t_2, double Lambda, double lambda, double mu_max,
                                 const RatioOptions& opt) {
  throw_if(corollary_violations(t_2, Lambda, lambda), "corollary1_check");
  const AnnulusSchedule s = AnnulusSchedule::corollary1(t_2, Lambda);
  s.require(lambda);

  CorollaryReport rep;
  rep.check = "corollary1";
  rep.n = n;
  rep.t_2 = s.t_2;
  rep.t_1 = s.t_1;
  rep.t_m1 = s.t_m1;
  rep.t_m2 = s.t_m2;
  rep.Lambda = Lambda;
  rep.lambda = lambda;
  rep.mu_max = mu_max;
  rep.bound = 128 * s.t_1 * s.t_1 * s.t_2;

  const double a = 3.0 / 8.0 * std::pow(t_2, 9);
  const double b = std::pow(s.t_m1, 3);
  rep.chain = {{"3 (t_1/t_2)^3 = 3 2^-3 t_2^9", a},
               {"(t_1/t_-1) (t_-2/t_-1) = t_-1^3", b},
               {"2^6 max{3 2^-3 t_2^9, t_-1^3}", 64 * std::max(a, b)},
               {"2^7 t_1^2 t_2", rep.bound}};

  const ModeSpectrum spec = mode_spectrum(n, mu_max);
  rep.passed = 64 * std::max(a, b) <= rep.bound;
  double num = 0, den = 0;
  for (const Mode& m : spec.positive()) {
    const RatioReport r = max_ratio(m.mu, lambda, s, 64, opt);
    CorollaryModeRow row;
    row.mu = m.mu;
    row.multiplicity = m.multiplicity;
    row.theta = r.theta;
    row.measured = r.measured;
    row.per_mode_bound = r.bound;
    row.bound = rep.bound;
    row.passed = r.passed() && r.bound <= 64 * std::max(a, b) * (1 + 1e-12) &&
                 r.measured <= rep.bound;
    rep.passed = rep.passed && row.passed;
    // A spinor carrying each worst-case mode with unit outer mass.
    num += m.multiplicity * r.measured;
    den += m.multiplicity;
    rep.modes.push_back(row);
  }
  rep.aggregate_ratio = den > 0 ? num / den : 0;
  rep.passed = rep.passed && rep.aggregate_ratio <= rep.bound;
  return rep;
}

CorollaryReport corollary2_check(int n, double t_2, double Lambda, double lambda, double mu_max,
                                 const RatioOptions& opt) {
  throw_if(corollary_violations(t_2, Lambda, lambda), "corollary2_check");
  const AnnulusSchedule s = AnnulusSchedule::corollary1(t_2, Lambda);

  CorollaryReport rep;
  rep.check = "corollary2";
  rep.n = n;
  rep.t_2 = s.t_2;
  rep.t_1 = s.t_1;
  rep.t_m1 = s.t_m1;
  rep.t_m2 = s.t_m2;
  rep.Lambda = Lambda;
  rep.lambda = lambda;
  rep.mu_max = mu_max;
  rep.bound = 512 * s.t_1 * s.t_1 * s.t_2;

  // Dyadic annuli [t_{1,k+1}, t_{1,k}] exhaust (0, t_1] down to eta.
  constexpr int kLevels = 60;
  const double eta = std::ldexp(s.t_1, -kLevels);
  std::vector<double> bps;
  for (int k = 0; k <= kLevels; ++k) bps.push_back(std::log(std::ldexp(s.t_1, -k)));
  IntegrateOptions io;
  io.tolerance = opt.tolerance;
  io.breakpoints = bps;

  double geo = 0;
  for (int k = 0; k < kLevels; ++k) geo += std::ldexp(1.0, -2 * k);
  rep.geometric_sum = geo;
  rep.chain = {{"sum_k 2^-2k", geo},
               {"2^7 (4/3) t_1^2 t_2", 128.0 * (4.0 / 3.0) * s.t_1 * s.t_1 * s.t_2},
               {"2^9 t_1^2 t_2", rep.bound}};
  rep.passed = 128.0 * geo <= 512.0;

  const ModeSpectrum spec = mode_spectrum(n, mu_max);
  double num = 0, den = 0;
  for (const Mode& m : spec.positive()) {
    const Vec2 start = regular_pole_data(m.mu, lambda, eta);
    const Span span{Coordinate::log, std::log(eta), std::log(s.t_2), std::log(eta)};
    const RadialTrajectory traj = integrate(euclidean_params(m.mu, lambda), span, start, io);
    // Mass on (0, eta) from the leading term |B|^2 ~ |B(eta)|^2 (t/eta)^{2mu}.
    const long double tail = static_cast<long double>(norm_sq(start)) * eta / (2 * m.mu + 1);
    const long double outer = tail + weighted_l2(traj, eta, s.t_2, {});
    const long double inner = tail + weighted_l2(traj, eta, s.t_1, {});

    CorollaryModeRow row;
    row.mu = m.mu;
    row.multiplicity = m.multiplicity;
    row.theta = std::numeric_limits<double>::quiet_NaN();
    row.measured = static_cast<double>(inner / outer);
    row.bound = rep.bound;
    row.passed = row.measured <= rep.bound;
    rep.passed = rep.passed && row.passed;
    num += m.multiplicity * row.measured;
    den += m.multiplicity;
    rep.modes.push_back(row);

    for (int k = 0; k < kLevels; ++k) {
      DyadicRow d;
      d.k = k;
      d.mu = m.mu;
      d.t_2 = std::pow(2.0, -k / 4.0) * s.t_2;
      d.t_1 = std::ldexp(s.t_1, -k);
      d.t_m1 = 0.5 * d.t_1;
      d.t_m2 = 0.5 * std::pow(d.t_m1, 4);
      const long double mass = weighted_l2(traj, std::max(d.t_m1, eta), d.t_1, {});
      d.measured = static_cast<double>(mass / outer);
      d.bound = 128 * d.t_1 * d.t_1 * d.t_2;
      d.passed = d.measured <= d.bound;
      rep.passed = rep.passed && d.passed;
      if (k < 8) rep.dyadic.push_back(d);
    }
  }
  rep.aggregate_ratio = den > 0 ? num / den : 0;
  return rep;
}

}  // namespace dirac
