#include "dirac/glued_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

#include "dirac/sphere_modes.hpp"
#include "format.hpp"

namespace dirac {

namespace {

constexpr double kPi = 3.14159265358979323846;

double smoothstep5(double u) { return u * u * u * (10 + u * (-15 + 6 * u)); }
double smoothstep5_derivative(double u) { return 30 * u * u * (1 - u) * (1 - u); }

/// Breakpoints strictly between `from` and `to`, in travel order, followed by `to`.
std::vector<double> stops_between(const std::vector<double>& bps, double from, double to) {
  std::vector<double> out;
  for (double b : bps)
    if ((from < to) ? (b > from && b < to) : (b < from && b > to)) out.push_back(b);
  std::sort(out.begin(), out.end());
  if (from > to) std::reverse(out.begin(), out.end());
  out.push_back(to);
  return out;
}

double matching_x(const ClosedModel& m, const EigenOptions& opt) {
  const double xm = opt.matching_point.value_or(0.5 * (m.lower() + m.upper()));
  if (!(xm > m.lower() && xm < m.upper()))
    throw std::invalid_argument("matching point outside the model");
  return xm;
}

/// Prufer angle theta with B proportional to (cos theta, sin theta):
/// theta' = (lambda - V) - (mu / rho) sin(2 theta).
double integrate_phase(const ClosedModel& m, double mu, double lambda, double x0, double x1,
                       double theta0, const ode::Tolerance& tol) {
  auto rhs = [&](double x, const std::array<double, 1>& th) -> std::array<double, 1> {
    return {(lambda - m.potential(x)) - (mu / m.profile(x)) * std::sin(2 * th[0])};
  };
  std::array<double, 1> y{theta0};
  double x = x0;
  for (double stop : stops_between(m.breakpoints, x0, x1)) {
    ode::integrate(rhs, x, stop, y, tol, [](double, std::array<double, 1>&,
                                            std::array<double, 1>&) {});
    x = stop;
  }
  return y[0];
}

/// All radial eigenvalues in [lo, hi], ascending, without collision checks.
std::vector<double> roots_in(const ClosedModel& m, double mu, double lo, double hi,
                             const EigenOptions& opt) {
  const double dlo = matching_phase(m, mu, lo, opt);
  const double dhi = matching_phase(m, mu, hi, opt);
  if (dhi < dlo) throw Error("mode_eigenvalues: matching phase not increasing");
  const long kmin = static_cast<long>(std::floor(dlo / kPi)) + 1;
  const long kmax = static_cast<long>(std::ceil(dhi / kPi)) - 1;
  std::vector<double> roots;
  for (long k = kmin; k <= kmax; ++k) {
    const double target = k * kPi;
    auto f = [&](double l) { return matching_phase(m, mu, l, opt) - target; };
    const double half_tol = 0.5 * opt.tolerance;
    auto done = [half_tol](double a, double b) { return std::abs(b - a) <= half_tol; };
    std::uintmax_t iters = 200;
    const auto br =
        boost::math::tools::toms748_solve(f, lo, hi, dlo - target, dhi - target, done, iters);
    roots.push_back(0.5 * (br.first + br.second));
  }
  return roots;
}

}  // namespace

Cap round_cap(double radius, double opening) {
  if (!(radius > 0)) throw std::invalid_argument("round_cap: radius must be > 0");
  if (!(opening >= 0 && opening <= 0.25 * radius))
    throw std::invalid_argument("round_cap: need 0 <= opening <= radius / 4");
  const double R = radius, a = opening;
  auto rho = [R, a](double r) {
    const double s = R * std::sin(r / R);
    if (r <= a) return r;
    if (r >= 2 * a) return s;
    const double h = smoothstep5((r - a) / a);
    return (1 - h) * r + h * s;
  };
  auto rho_dot = [R, a](double r) {
    const double c = std::cos(r / R);
    if (r <= a) return 1.0;
    if (r >= 2 * a) return c;
    const double u = (r - a) / a;
    const double h = smoothstep5(u), hp = smoothstep5_derivative(u) / a;
    return (1 - h) + h * c + hp * (R * std::sin(r / R) - r);
  };
  return Cap{WarpProfile(0.0, kPi * R, rho, rho_dot, ProfileKind::cap), R, a};
}

ClosedModel cap_model(const Cap& cap, int n, std::string tag) {
  ClosedModel m{cap.profile, n, std::move(tag)};
  if (cap.collar > 0) m.breakpoints = {cap.collar, 2 * cap.collar};
  return m;
}

ClosedModel round_model(double radius, int n) {
  return cap_model(round_cap(radius, 0.0), n, "round");
}

ClosedModel glue(const Cap& cap1, const Cap& cap2, double t_2, int n, std::string tag) {
  if (!(cap1.collar >= t_2) || !(cap2.collar >= t_2))
    throw Error("glue: cap collar shorter than t_2");
  const WarpProfile neck = build_neck(t_2);
  const WarpProfile p1 = cap1.profile, p2 = cap2.profile;
  auto rho = [=](double x) {
    if (std::abs(x) < t_2) return neck(x);
    return x < 0 ? p1(-x) : p2(x);
  };
  auto rho_dot = [=](double x) {
    if (std::abs(x) < t_2) return neck.derivative(x);
    return x < 0 ? -p1.derivative(-x) : p2.derivative(x);
  };
  ClosedModel m{WarpProfile(-p1.upper(), p2.upper(), rho, rho_dot, ProfileKind::composite), n,
                std::move(tag)};
  const double tm2 = std::ldexp(std::pow(t_2, 16), -9);
  m.neck_t2 = t_2;
  m.breakpoints = {-2 * cap1.collar, -cap1.collar, -t_2, -tm2, 0.0,
                   tm2,              t_2,          cap2.collar, 2 * cap2.collar};
  return m;
}

double matching_phase(const ClosedModel& model, double mu, double lambda,
                      const EigenOptions& opt) {
  if (!(mu > 0)) throw std::invalid_argument("matching_phase: mu must be > 0");
  const double xm = matching_x(model, opt);
  const double eta = opt.pole_offset * model.length();
  const double c = eta / (2 * mu + 1);
  const double l_lower = lambda - model.potential(model.lower());
  const double l_upper = lambda - model.potential(model.upper());
  const double th_l = integrate_phase(model, mu, lambda, model.lower() + eta, xm,
                                      std::atan(l_lower * c), opt.ode);
  const double th_r = integrate_phase(model, mu, lambda, model.upper() - eta, xm,
                                      std::atan2(1.0, l_upper * c), opt.ode);
  return th_l - th_r;
}

std::vector<double> mode_eigenvalues(const ClosedModel& model, double mu, double lo, double hi,
                                     const EigenOptions& opt) {
  if (!(lo < hi)) throw std::invalid_argument("mode_eigenvalues: empty window");
  const double tol = opt.tolerance;
  std::vector<double> out;
  for (double r : roots_in(model, mu, lo - 4 * tol, hi + 4 * tol, opt)) {
    if (std::abs(r - lo) <= 2 * tol || std::abs(r - hi) <= 2 * tol)
      throw WindowCollisionError("mode_eigenvalues: eigenvalue on the window boundary", r);
    if (r > lo && r < hi) out.push_back(r);
  }
  return out;
}

long Spectrum::count(double a, double b) const {
  long c = 0;
  for (const auto& e : entries)
    if (e.eigenvalue >= a && e.eigenvalue <= b) c += e.multiplicity;
  return c;
}

long Spectrum::total() const {
  long c = 0;
  for (const auto& e : entries) c += e.multiplicity;
  return c;
}

std::vector<double> Spectrum::flat() const {
  std::vector<double> out;
  for (const auto& e : entries) out.insert(out.end(), static_cast<std::size_t>(e.multiplicity),
                                           e.eigenvalue);
  return out;
}

void Spectrum::sort() {
  std::sort(entries.begin(), entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    return a.mode_mu < b.mode_mu;
  });
}

void Spectrum::write_header(std::ostream& os) {
  os << "eigenvalue,multiplicity,mode_mu,model_tag\n";
}

void Spectrum::write_rows(std::ostream& os) const {
  for (const auto& e : entries)
    os << sci(e.eigenvalue) << ',' << e.multiplicity << ',' << sci(e.mode_mu) << ',' << tag
       << '\n';
}

Spectrum assemble_spectrum(const ClosedModel& model, double Lambda, const AssemblyOptions& opt,
                           AssemblyInfo* info) {
  if (!(Lambda > 0)) throw std::invalid_argument("assemble_spectrum: Lambda must be > 0");
  const std::vector<Mode> modes = mode_spectrum(model.n, opt.mu_cap).positive();
  const double outer = Lambda + opt.margin;
  const double tol = opt.eigen.tolerance;
  const std::size_t batch = static_cast<std::size_t>(std::max(1, opt.workers));

  Spectrum s;
  s.Lambda = Lambda;
  s.tag = model.tag;
  AssemblyInfo local;
  bool done = false;
  for (std::size_t i = 0; i < modes.size() && !done; i += batch) {
    const std::size_t end = std::min(modes.size(), i + batch);
    std::vector<std::future<std::vector<double>>> jobs;
    for (std::size_t j = i; j < end; ++j) {
      const double mu = modes[j].mu;
      jobs.push_back(std::async(batch > 1 ? std::launch::async : std::launch::deferred,
                                [&model, mu, outer, &opt] {
                                  return roots_in(model, mu, -outer, outer, opt.eigen);
                                }));
    }
    for (std::size_t j = i; j < end; ++j) {
      const std::vector<double> roots = jobs[j - i].get();
      if (done) continue;
      if (roots.empty()) {
        local.last_mu = modes[j].mu;
        done = true;
        continue;
      }
      double lowest = std::numeric_limits<double>::infinity();
      for (double r : roots) lowest = std::min(lowest, std::abs(r));
      if (!local.lowest_magnitude.empty() && lowest < local.lowest_magnitude.back() - 1e-9)
        local.monotone = false;
      local.lowest_magnitude.push_back(lowest);
      for (double r : roots) {
        if (std::abs(std::abs(r) - Lambda) <= 2 * tol)
          throw WindowCollisionError("assemble_spectrum: eigenvalue on the window boundary", r);
        if (std::abs(r) < Lambda) s.entries.push_back({r, modes[j].multiplicity, modes[j].mu});
      }
    }
  }
  if (!done) throw Error("assemble_spectrum: no empty mode below the mu cap");
  s.sort();
  if (info) *info = local;
  return s;
}

Spectrum disjoint_union(const Spectrum& a, const Spectrum& b, std::string tag) {
  Spectrum s;
  s.Lambda = std::min(a.Lambda, b.Lambda);
  s.tag = tag.empty() ? a.tag + "+" + b.tag : std::move(tag);
  for (const Spectrum* p : {&a, &b})
    for (const auto& e : p->entries)
      if (std::abs(e.eigenvalue) < s.Lambda) s.entries.push_back(e);
  s.sort();
  // Merge equal (eigenvalue, mode) entries.
  std::vector<SpectrumEntry> merged;
  for (const auto& e : s.entries) {
    if (!merged.empty() && merged.back().eigenvalue == e.eigenvalue &&
        merged.back().mode_mu == e.mode_mu)
      merged.back().multiplicity += e.multiplicity;
    else
      merged.push_back(e);
  }
  s.entries = std::move(merged);
  return s;
}

std::string to_string(Closeness c) {
  switch (c) {
    case Closeness::close: return "close";
    case Closeness::not_close: return "not_close";
    case Closeness::indeterminate: return "indeterminate";
  }
  return "unknown";
}

ClosenessReport spectral_close(const Spectrum& s1, const Spectrum& s2, double Lambda,
                               double epsilon, double tolerance) {
  if (s1.Lambda < Lambda * (1 - 1e-12) || s2.Lambda < Lambda * (1 - 1e-12))
    throw std::invalid_argument("spectral_close: spectrum window narrower than Lambda");
  ClosenessReport rep;
  rep.Lambda = Lambda;
  rep.epsilon = epsilon;
  std::vector<double> f1, f2;
  for (double v : s1.flat())
    if (std::abs(v) < Lambda) f1.push_back(v);
  for (double v : s2.flat())
    if (std::abs(v) < Lambda) f2.push_back(v);
  rep.count1 = static_cast<long>(f1.size());
  rep.count2 = static_cast<long>(f2.size());

  for (const Spectrum* s : {&s1, &s2})
    for (const auto& e : s->entries)
      if (std::abs(std::abs(e.eigenvalue) - Lambda) <= tolerance) {
        rep.status = Closeness::indeterminate;
        rep.max_gap = std::numeric_limits<double>::infinity();
        rep.detail = "eigenvalue " + sci(e.eigenvalue) + " within tolerance of +-Lambda";
        return rep;
      }

  if (f1.size() != f2.size()) {
    rep.status = Closeness::not_close;
    rep.max_gap = std::numeric_limits<double>::infinity();
    rep.detail = "eigenvalue counts differ";
    return rep;
  }
  rep.max_gap = 0;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    rep.pairs.emplace_back(f1[i], f2[i]);
    rep.max_gap = std::max(rep.max_gap, std::abs(f1[i] - f2[i]));
  }
  rep.status = rep.max_gap < epsilon ? Closeness::close : Closeness::not_close;
  if (rep.status == Closeness::not_close) rep.detail = "paired gap >= epsilon";
  return rep;
}

ClaimReport claim_counts(const Spectrum& glued, const Spectrum& s1, const Spectrum& s2,
                         double lambda, double epsilon, double cluster_tol) {
  if (!(epsilon > 0)) throw std::invalid_argument("claim_counts: epsilon must be > 0");
  const double L = std::min({glued.Lambda, s1.Lambda, s2.Lambda});
  if (!(std::abs(lambda) < L - 2 * epsilon))
    throw std::invalid_argument("claim_counts: lambda outside (-Lambda + 2 eps, Lambda - 2 eps)");
  ClaimReport r;
  r.lambda = lambda;
  r.epsilon = epsilon;
  r.point_count = s1.count(lambda - cluster_tol, lambda + cluster_tol) +
                  s2.count(lambda - cluster_tol, lambda + cluster_tol);
  r.glued_count = glued.count(lambda - epsilon, lambda + epsilon);
  r.outer_count = s1.count(lambda - 2 * epsilon, lambda + 2 * epsilon) +
                  s2.count(lambda - 2 * epsilon, lambda + 2 * epsilon);
  r.passed = r.point_count <= r.glued_count && r.glued_count <= r.outer_count;
  return r;
}

ModeSolution::ModeSolution(const ClosedModel& model, double mu, double lambda, double eta,
                           const std::vector<double>& lower_breaks, const EigenOptions& opt)
    : mu_(mu),
      lambda_(lambda),
      eta_(eta),
      eta_upper_(opt.pole_offset * model.length()),
      lower_(model.lower()),
      xm_(matching_x(model, opt)) {
  if (!(mu > 0)) throw std::invalid_argument("ModeSolution: mu must be > 0");
  if (!(eta > 0 && lower_ + eta < xm_ && xm_ < model.upper() - eta_upper_))
    throw std::invalid_argument("ModeSolution: pole offsets too large for the model");
  const double lo = lower_, up = model.upper();
  const double rm = xm_ - lo;
  const double c = eta / (2 * mu + 1);
  const double c_up = eta_upper_ / (2 * mu + 1);

  // Lower shot in tau = log(x - lower).
  const WarpProfile prof = model.profile;
  const Potential pot = model.potential;
  RadialParams pl;
  pl.mu = mu;
  pl.lambda = lambda;
  pl.profile = WarpProfile(
      0.0, model.length(), [prof, lo](double r) { return prof(lo + r); },
      [prof, lo](double r) { return prof.derivative(lo + r); }, ProfileKind::composite);
  if (!pot.is_zero())
    pl.potential = Potential{[pot, lo](double r) { return pot(lo + r); },
                             [pot, lo](double r) { return pot.slope(lo + r); }};
  IntegrateOptions il;
  il.tolerance = opt.ode;
  for (double b : model.breakpoints)
    if (b - lo > eta && b - lo < rm) il.breakpoints.push_back(std::log(b - lo));
  for (double r : lower_breaks)
    if (r > eta && r < rm) il.breakpoints.push_back(std::log(r));
  const Vec2 start_l = regular_pole_data(mu, lambda - pot(lo), eta);
  left_ = integrate(pl, Span{Coordinate::log, std::log(eta), std::log(rm), std::log(eta)},
                    start_l, il);
  left_tail_ = static_cast<long double>(norm_sq(start_l)) * c;

  // Upper shot in x.
  RadialParams pr;
  pr.mu = mu;
  pr.lambda = lambda;
  pr.profile = prof;
  pr.potential = pot;
  IntegrateOptions ir;
  ir.tolerance = opt.ode;
  for (double b : model.breakpoints)
    if (b > xm_ && b < up - eta_upper_) ir.breakpoints.push_back(b);
  const Vec2 start_r{Complex((lambda - pot(up)) * c_up), Complex(1.0)};
  right_ = integrate(pr, Span{Coordinate::linear, xm_, up - eta_upper_, up - eta_upper_}, start_r,
                     ir);
  right_tail_ = static_cast<long double>(norm_sq(start_r)) * c_up;
  tail_weight_at_ = up - eta_upper_ - lo;

  const ScaledVec2 bl = left_->scaled_value(left_->size() - 1);
  const ScaledVec2 br = right_->scaled_value(0);
  const Vec2& ml = bl.mantissa;
  const Vec2& mr = br.mantissa;
  const Complex cm = (std::conj(mr[0]) * ml[0] + std::conj(mr[1]) * ml[1]) / norm_sq(mr);
  mismatch_ = norm(ml - cm * mr) / norm(ml);
  right_scale_ = std::ldexp(static_cast<long double>(std::norm(cm)), 2 * (bl.exponent - br.exponent));
}

long double ModeSolution::mass(const std::function<double(double)>& w) const {
  const double lo = lower_;
  auto wr = [&w, lo](double x) { return w(x - lo); };
  long double left = weighted_l2(*left_, left_->lower_t(), left_->upper_t(), w) +
                     left_tail_ * (w ? w(eta_) : 1.0);
  long double right =
      weighted_l2(*right_, right_->lower_t(), right_->upper_t(),
                  w ? std::function<double(double)>(wr) : std::function<double(double)>{}) +
      right_tail_ * (w ? w(tail_weight_at_) : 1.0);
  return left + right_scale_ * right;
}

long double ModeSolution::lower_mass(double a, double b,
                                     const std::function<double(double)>& w) const {
  return weighted_l2(*left_, a, b, w);
}

RayleighReport rayleigh_check(const ClosedModel& cap, const GlueSchedule& sched, double mu,
                              double lambda, const std::optional<CutoffFunction>& cutoff,
                              const EigenOptions& opt) {
  const CutoffFunction chi = cutoff ? *cutoff : build_cutoff(sched.t_1, sched.t_m1);
  double eta = opt.pole_offset * cap.length();
  std::vector<double> breaks;
  if (!chi.is_identity()) {
    eta = std::min(eta, chi.inner() / 16);
    breaks = {chi.inner(), chi.outer()};
  }
  const ModeSolution sol(cap, mu, lambda, eta, breaks, opt);
  const long double total = sol.mass();
  const long double chi_mass = sol.mass([&chi](double r) {
    const double v = chi(r);
    return v * v;
  });
  const long double grad =
      chi.is_identity() ? 0.0L
                        : sol.lower_mass(chi.inner(), chi.outer(), [&chi](double r) {
                            const double d = chi.derivative(r);
                            return d * d;
                          });

  RayleighReport r;
  r.mu = mu;
  r.lambda = lambda;
  r.t_2 = sched.t_2;
  r.chi_mass = static_cast<double>(chi_mass / total);
  r.gradient_mass = static_cast<double>(grad / total);
  r.quotient = static_cast<double>(grad / chi_mass);
  r.bound_b = 2048 * sched.t_2;
  r.bound_c = 4096 * sched.t_2;
  r.a_ok = r.chi_mass >= 0.5;
  r.b_ok = r.gradient_mass <= r.bound_b;
  r.c_ok = r.quotient <= r.bound_c;
  r.hypotheses_ok = sched.Lambda * std::sqrt(sched.t_2) <= 0.1 && std::abs(lambda) <= sched.Lambda;
  return r;
}

}  // namespace dirac
