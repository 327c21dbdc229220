#include "dirac/neck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dirac {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSampleSlack = 1e-12;

}  // namespace

double neck_smoothing(double x) {
  const double a = std::abs(x);
  if (a >= 1) return a;
  const double x2 = a * a;
  return 0.5 + x2 * (3.0 / 16 + x2 * (13.0 / 16 + x2 * (-11.0 / 16 + x2 * (3.0 / 16))));
}

double neck_smoothing_derivative(double x) {
  const double a = std::abs(x);
  const double sign = x < 0 ? -1.0 : 1.0;
  if (a >= 1) return sign;
  const double x2 = a * a;
  return sign * a * (3.0 / 8 + x2 * (13.0 / 4 + x2 * (-33.0 / 8 + x2 * 1.5)));
}

WarpProfile build_neck(double t_2) {
  if (!(t_2 > 0 && t_2 < 1)) throw std::invalid_argument("build_neck: need 0 < t_2 < 1");
  const double tm2 = std::ldexp(std::pow(t_2, 16), -9);
  if (!(tm2 > 0)) throw std::invalid_argument("build_neck: t_-2 underflows");
  return WarpProfile(
      -1.0, 1.0, [tm2](double t) { return tm2 * neck_smoothing(t / tm2); },
      [tm2](double t) { return neck_smoothing_derivative(t / tm2); }, ProfileKind::neck);
}

double delta_of(double Lambda, double epsilon, int k) {
  if (!(Lambda > 0) || !(epsilon > 0) || k < 0)
    throw std::invalid_argument("delta_of: need Lambda > 0, epsilon > 0, k >= 0");
  const double k1 = k + 1.0;
  return std::min({1.0 / (100 * Lambda * Lambda), 0.0625, 1.0 / (2 * Lambda), 1.0 / (2 * k1),
                   std::ldexp(epsilon * epsilon, -17) / (k1 * k1)});
}

GlueSchedule GlueSchedule::make(double t_2, double Lambda, double epsilon, int k) {
  GlueSchedule s;
  s.t_2 = t_2;
  s.t_1 = 0.5 * std::pow(t_2, 4);
  s.t_m1 = 0.5 * s.t_1;
  s.t_m2 = std::ldexp(std::pow(t_2, 16), -9);
  s.Lambda = Lambda;
  s.epsilon = epsilon;
  s.k = k;
  s.delta = delta_of(Lambda, epsilon, k);
  return s;
}

std::vector<std::string> GlueSchedule::violations() const {
  std::vector<std::string> v;
  if (!(t_2 > 0)) v.push_back("t_2 > 0 fails");
  if (!(t_2 < 0.0625)) v.push_back("t_2 < 2^-4 fails");
  if (!(t_2 < delta)) {
    std::ostringstream os;
    os << "t_2 < delta fails (delta = " << delta << ")";
    v.push_back(os.str());
  }
  return v;
}

CutoffFunction::CutoffFunction(double inner, double outer) : inner_(inner), outer_(outer) {
  if (!(0 < inner && inner < outer)) throw std::invalid_argument("cutoff: need 0 < inner < outer");
}

CutoffFunction CutoffFunction::identity() {
  CutoffFunction c(0.5, 1.0);
  c.identity_ = true;
  c.inner_ = 0;
  c.outer_ = 0;
  return c;
}

double CutoffFunction::operator()(double t) const {
  if (identity_ || t >= outer_) return 1.0;
  if (t <= inner_) return 0.0;
  const double u = (t - inner_) / (outer_ - inner_);
  return u * u * u * (10 + u * (-15 + 6 * u));
}

double CutoffFunction::derivative(double t) const {
  if (identity_ || t >= outer_ || t <= inner_) return 0.0;
  const double u = (t - inner_) / (outer_ - inner_);
  return 30 * u * u * (1 - u) * (1 - u) / (outer_ - inner_);
}

double CutoffFunction::gradient_bound() const {
  return identity_ ? 0.0 : 4.0 / outer_;
}

double CutoffFunction::sup_derivative(int samples) const {
  if (identity_) return 0.0;
  double m = 0;
  for (int i = 0; i <= samples; ++i)
    m = std::max(m, std::abs(derivative(inner_ + (outer_ - inner_) * i / samples)));
  return m;
}

CutoffFunction build_cutoff(double t_1, double t_m1) {
  if (!(t_1 > 0) || std::abs(t_m1 - 0.5 * t_1) > 1e-12 * t_1)
    throw std::invalid_argument("build_cutoff: need t_-1 = t_1 / 2 > 0");
  return CutoffFunction(t_m1, t_1);
}

RadialParams warped_radial_params(const WarpProfile& profile, double mu, double lambda) {
  RadialParams p;
  p.mu = mu;
  p.lambda = lambda;
  p.profile = profile;
  return p;
}

double Prop33Report::worst_quotient() const {
  double q = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) q = std::min(q, r.rhs / r.inner);
  return q;
}

Prop33Report prop33_check(const WarpProfile& profile, double lambda, double a, double b,
                          double c, double mu, int directions, const ode::Tolerance& tol) {
  if (!(a < b) || !(c > 0)) throw std::invalid_argument("prop33_check: need a < b and c > 0");
  const double lo = a - c, hi = b + c;
  if (!profile.contains(lo) || !profile.contains(hi))
    throw std::invalid_argument("prop33_check: [a-c, b+c] outside the profile domain");

  Prop33Report rep;
  rep.lambda = lambda;
  rep.a = a;
  rep.b = b;
  rep.c = c;
  rep.mu = mu;
  rep.hypothesis_value =
      std::abs(lambda) * profile.sup_abs(lo, hi) + 0.5 * profile.sup_abs_derivative(lo, hi);
  if (rep.hypothesis_value > 1 + kSampleSlack) {
    std::ostringstream os;
    os << "prop33_check: |lambda| sup|rho| + sup|rho'|/2 = " << rep.hypothesis_value << " > 1";
    throw HypothesisError(os.str());
  }

  const RadialParams params = warped_radial_params(profile, mu, lambda);
  const double mid = 0.5 * (a + b);
  IntegrateOptions io;
  io.tolerance = tol;
  io.breakpoints = {a, b};
  const Span span{Coordinate::linear, lo, hi, mid};
  const double factor = (b - a) / (2 * c);

  rep.passed = true;
  for (int j = 0; j < directions; ++j) {
    const double th = kPi * j / directions;
    const RadialTrajectory traj =
        integrate(params, span, Vec2{Complex(std::cos(th)), Complex(std::sin(th))}, io);
    Prop33Row row;
    row.theta = th;
    const long double in = weighted_l2(traj, a, b, {});
    const long double out = weighted_l2(traj, b, hi, {}) + weighted_l2(traj, lo, a, {});
    // Compare in extended range; stored as double only for reporting.
    row.passed = in <= static_cast<long double>(factor) * out * (1 + 1e-9L);
    const long double scale = std::max(in, out);
    row.inner = static_cast<double>(in / scale);
    row.outer = static_cast<double>(out / scale);
    row.rhs = factor * row.outer;
    rep.passed = rep.passed && row.passed;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace dirac
