#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "dirac/annulus.hpp"
#include "dirac/glued_model.hpp"
#include "dirac/gronwall.hpp"
#include "dirac/neck.hpp"
#include "dirac/report.hpp"
#include "dirac/spectral_flow.hpp"
#include "dirac/sphere_modes.hpp"
#include "fd_radial.hpp"

namespace dirac::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Config {
  std::string command;
  std::vector<double> t2, mu, lambda;
  std::optional<double> Lambda, epsilon;
  std::optional<int> n, k;
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string format = "json";
  int workers = 1;
};

struct Outcome {
  Report report;
  std::string csv;  // empty when the subcommand has no tabular data
  bool hypothesis_violation = false;
};

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

template <class T>
std::vector<T> or_default(const std::vector<T>& v, std::vector<T> d) {
  return v.empty() ? d : v;
}

/// Deterministic parallel map: result i is f(i) whatever the completion order.
template <class F>
auto parallel_map(std::size_t count, int workers, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(count);
  const std::size_t w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1) {
    for (std::size_t i = 0; i < count; ++i) slots[i].emplace(f(i));
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t s = 0; s < w; ++s)
      jobs.push_back(std::async(std::launch::async, [&, s] {
        for (std::size_t i = s; i < count; i += w) slots[i].emplace(f(i));
      }));
    for (auto& j : jobs) j.get();
  }
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

Json list(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

// ---------------------------------------------------------------- prop31

Outcome cmd_prop31(const Config& c) {
  constexpr int kInstances = 100;
  struct Instance {
    double mu, lambda, lo, hi, anchor, theta;
  };
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Instance> inst;
  for (int i = 0; i < kInstances; ++i) {
    Instance s;
    s.mu = 1 + 4 * u01(rng);
    s.lambda = -0.3 + 0.6 * u01(rng);
    s.lo = -6 + 6 * u01(rng);
    s.hi = s.lo + 0.1 + 2.9 * u01(rng);
    s.anchor = s.lo + (s.hi - s.lo) * u01(rng);
    s.theta = 2 * kPi * u01(rng);
    inst.push_back(s);
  }
  auto results = parallel_map(inst.size(), c.workers, [&](std::size_t i) {
    const Instance& s = inst[i];
    const Vec2 w{Complex(std::cos(s.theta)), Complex(std::sin(s.theta))};
    IntegrateOptions io;
    io.tolerance = {1e-12, 1e-300};
    const RadialTrajectory u = integrate(euclidean_params(s.mu, s.lambda),
                                         Span{Coordinate::log, s.lo, s.hi, s.anchor}, w, io);
    const PowerLawSolution v = almost_solution(w, s.mu, std::exp(s.anchor));
    const double a_sup = s.mu + std::abs(s.lambda) * std::exp(s.hi);
    const double lam = s.lambda;
    const ComparisonReport r = verify_comparison(
        u, v, a_sup, [&v, lam](double tau) { return v.defect(lam, std::exp(tau)); }, s.anchor);
    const bool zero_at_anchor = r.anchor_mismatch == 0 &&
                                gronwall_bound(a_sup, [](double) { return 1.0; }, s.anchor,
                                               s.anchor) == 0;
    return std::make_pair(r, zero_at_anchor);
  });

  Outcome o;
  o.report.check = "prop31";
  o.report.paper_ref =
      "u' = A u, v(x0) = u(x0), |v' - A v| <= delta  =>  |u(x) - v(x)| <= |int_{x0}^{x} "
      "delta(s) exp(||A||_inf |x - s|) ds|";
  o.report.params = {{"seed", c.seed}, {"instances", kInstances},
                     {"mu_range", {1, 5}}, {"lambda_range", {-0.3, 0.3}},
                     {"max_interval_length", 3}, {"slack_rel", 1e-8},
                     {"margin_kind", "min 1 - |u - v| / bound"}};
  std::ostringstream csv;
  csv << "index,mu,lambda,tau_lo,tau_hi,tau0,max_deviation_over_bound,status\n";
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const auto& [r, zero] = results[i];
    const Instance& s = inst[i];
    Json row = to_json(r);
    row["index"] = i;
    row["mu"] = s.mu;
    row["lambda"] = s.lambda;
    row["tau_lo"] = s.lo;
    row["tau_hi"] = s.hi;
    row["tau0"] = s.anchor;
    row["zero_at_anchor"] = zero;
    double tightest = 0;
    for (std::size_t g = 0; g < r.grid.size(); ++g)
      if (r.bound[g] > 0) tightest = std::max(tightest, r.deviation[g] / r.bound[g]);
    row["max_deviation_over_bound"] = tightest;
    o.report.rows.push_back(row);
    o.report.pass = o.report.pass && r.passed() && zero;
    margin = std::min(margin, 1 - tightest);
    csv << i << ',' << sci(s.mu) << ',' << sci(s.lambda) << ',' << sci(s.lo) << ','
        << sci(s.hi) << ',' << sci(s.anchor) << ',' << sci(tightest) << ','
        << to_string(r.status) << '\n';
  }
  o.report.margin = margin;
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- prop32

Outcome cmd_prop32(const Config& c) {
  const auto mus = or_default(c.mu, {1.0});
  const auto lams = or_default(c.lambda, {0.05});
  const auto t2s = or_default(c.t2, {std::ldexp(1.0, -5)});
  struct Job {
    double mu, lambda, t2;
  };
  std::vector<Job> jobs;
  for (double t2 : t2s)
    for (double mu : mus)
      for (double l : lams) jobs.push_back({mu, l, t2});

  auto results = parallel_map(jobs.size(), c.workers, [&](std::size_t i) {
    const Job& j = jobs[i];
    const AnnulusSchedule s = AnnulusSchedule::corollary1(j.t2, std::abs(j.lambda));
    std::vector<std::string> v = s.violations(j.lambda);
    if (!(j.mu >= 1)) v.push_back("mu >= 1 fails");
    std::optional<RatioReport> r;
    if (v.empty()) r = max_ratio(j.mu, j.lambda, s);
    return std::make_pair(r, v);
  });

  Outcome o;
  o.report.check = "prop32";
  o.report.paper_ref =
      "|lambda| t2^(1/2) <= 1/10  =>  int_{t-1}^{t1}|B|^2 dt / int_{t-2}^{t2}|B|^2 dt <= 2^6 "
      "max{3 (t1/t2)^(2mu+1), (t1/t-1) (t-2/t-1)^(2mu-1)}";
  o.report.params = {{"mu", list(mus)}, {"lambda", list(lams)}, {"t2", list(t2s)},
                     {"schedule", "t1 = t2^4/2, t-1 = t1/2, t-2 = t-1^4/2"},
                     {"theta_grid", 64}};
  std::ostringstream csv;
  csv << "mu,lambda,theta,measured,bound,margin,t_2\n";
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& [r, v] = results[i];
    Json row;
    if (!v.empty()) {
      row = {{"mu", jobs[i].mu}, {"lambda", jobs[i].lambda}, {"hypothesis_violations", v}};
      o.hypothesis_violation = true;
    } else {
      row = to_json(*r);
      o.report.pass = o.report.pass && r->passed();
      margin = std::min(margin, r->log_bound - r->log_measured);
      csv << sci(r->mu) << ',' << sci(r->lambda) << ',' << sci(r->theta) << ','
          << sci(r->measured) << ',' << sci(r->bound) << ',' << sci(r->margin()) << ','
          << sci(jobs[i].t2) << '\n';
    }
    row["t_2"] = jobs[i].t2;
    o.report.rows.push_back(row);
  }
  o.report.params["margin_kind"] = "min log(bound / measured)";
  o.report.margin = margin;
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- cor1 / cor2

Outcome cmd_corollary(const Config& c, bool second) {
  const int n = c.n.value_or(3);
  const auto t2s = or_default(c.t2, {std::ldexp(1.0, -8)});
  const auto lams = or_default(c.lambda, {0.05});
  const double Lambda = c.Lambda.value_or(1.0);
  const double mu_max = c.mu.empty() ? 5.0 : c.mu.front();
  struct Job {
    double t2, lambda;
  };
  std::vector<Job> jobs;
  for (double t2 : t2s)
    for (double l : lams) jobs.push_back({t2, l});

  auto results = parallel_map(jobs.size(), c.workers, [&](std::size_t i) {
    std::optional<CorollaryReport> r;
    std::string violation;
    try {
      r = second ? corollary2_check(n, jobs[i].t2, Lambda, jobs[i].lambda, mu_max)
                 : corollary1_check(n, jobs[i].t2, Lambda, jobs[i].lambda, mu_max);
    } catch (const HypothesisError& e) {
      violation = e.what();
    }
    return std::make_pair(r, violation);
  });

  Outcome o;
  o.report.check = second ? "cor2" : "cor1";
  o.report.paper_ref =
      second ? "t2 < 2^-4, t1 = t2^4/2, |lambda| <= Lambda, Lambda t2^(1/2) <= 1/10  =>  "
               "int_0^{t1}|B|^2 / int_0^{t2}|B|^2 <= 2^9 t1^2 t2 (regular solutions)"
             : "t2 < 2^-4, |lambda| <= Lambda, Lambda t2^(1/2) <= 1/10  =>  "
               "int_{t-1}^{t1}|B|^2 / int_{t-2}^{t2}|B|^2 <= 2^7 t1^2 t2";
  o.report.params = {{"n", n}, {"t2", list(t2s)}, {"lambda", list(lams)},
                     {"Lambda", Lambda}, {"mu_max", mu_max}};
  std::ostringstream csv;
  csv << "t_2,lambda,mu,multiplicity,measured,bound,pass\n";
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& [r, v] = results[i];
    if (!r) {
      o.report.rows.push_back(
          {{"t_2", jobs[i].t2}, {"lambda", jobs[i].lambda}, {"hypothesis_violation", v}});
      o.hypothesis_violation = true;
      continue;
    }
    o.report.rows.push_back(to_json(*r));
    o.report.pass = o.report.pass && r->passed;
    margin = std::min(margin, r->margin());
    for (const auto& m : r->modes)
      csv << sci(r->t_2) << ',' << sci(r->lambda) << ',' << sci(m.mu) << ',' << m.multiplicity
          << ',' << sci(m.measured) << ',' << sci(m.bound) << ',' << (m.passed ? 1 : 0) << '\n';
  }
  o.report.margin = margin;
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- prop33

struct Prop33Case {
  std::string profile;
  WarpProfile rho;
  double a, b, c;
};

std::vector<Prop33Case> prop33_cases(double t2) {
  const GlueSchedule s = GlueSchedule::make(t2, 1.0, 1.0, 0);
  const WarpProfile neck = build_neck(t2);
  std::vector<Prop33Case> cases = {
      {"neck", neck, -s.t_1, s.t_1, t2 - s.t_1},
      {"neck", neck, -s.t_m1, s.t_m1, s.t_1 - s.t_m1},
      {"neck", neck, -s.t_m2, s.t_m2, s.t_m1 - s.t_m2},
      {"neck", neck, s.t_m1, s.t_1, 0.5 * s.t_m1},
      {"neck", neck, -0.5 * t2, 0.5 * t2, 0.5 * t2},
  };
  const double grid[5][3] = {
      {-0.1, 0.1, 0.1}, {0, 1, 0.5}, {-1, 1, 1}, {0, 0.5, 1}, {-0.5, 0.5, 0.25}};
  for (double rho0 : {0.2, 1.0})
    for (const auto& g : grid)
      cases.push_back({"constant " + sci(rho0), WarpProfile::constant(rho0, -3, 3), g[0], g[1],
                       g[2]});
  return cases;
}

Outcome cmd_prop33(const Config& c) {
  const double t2 = c.t2.empty() ? 0.05 : c.t2.front();
  const auto lams = or_default(c.lambda, {0.0, 0.5});
  const auto mus = or_default(c.mu, {1.0, 2.0, 3.0, 5.0});
  const auto cases = prop33_cases(t2);
  struct Job {
    std::size_t cs;
    double lambda, mu;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cases.size(); ++i)
    for (double l : lams)
      for (double mu : mus) jobs.push_back({i, l, mu});

  auto results = parallel_map(jobs.size(), c.workers, [&](std::size_t i) {
    const Job& j = jobs[i];
    const Prop33Case& cs = cases[j.cs];
    std::optional<Prop33Report> r;
    std::string violation;
    try {
      r = prop33_check(cs.rho, j.lambda, cs.a, cs.b, cs.c, j.mu);
    } catch (const HypothesisError& e) {
      violation = e.what();
    }
    return std::make_pair(r, violation);
  });

  Outcome o;
  o.report.check = "prop33";
  o.report.paper_ref =
      "|lambda| ||rho||_inf + ||rho'||_inf / 2 <= 1  =>  ||sigma||^2_[a,b] <= (b - a)/(2c) "
      "(||sigma||^2_[b,b+c] + ||sigma||^2_[a-c,a])";
  o.report.params = {{"t2", t2}, {"lambda", list(lams)}, {"mu", list(mus)},
                     {"directions", 16}, {"cases", cases.size()}};
  std::ostringstream csv;
  csv << "profile,a,b,c,lambda,mu,worst_quotient,pass\n";
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& [r, v] = results[i];
    const Prop33Case& cs = cases[jobs[i].cs];
    Json row;
    if (!r) {
      row = {{"lambda", jobs[i].lambda}, {"mu", jobs[i].mu}, {"hypothesis_violation", v}};
      o.hypothesis_violation = true;
    } else {
      row = to_json(*r);
      o.report.pass = o.report.pass && r->passed;
      margin = std::min(margin, r->worst_quotient() - 1);
      csv << cs.profile << ',' << sci(cs.a) << ',' << sci(cs.b) << ',' << sci(cs.c) << ','
          << sci(r->lambda) << ',' << sci(r->mu) << ',' << sci(r->worst_quotient()) << ','
          << (r->passed ? 1 : 0) << '\n';
    }
    row["profile"] = cs.profile;
    o.report.rows.push_back(row);
  }
  o.report.params["margin_kind"] = "min rhs / lhs - 1";
  o.report.margin = margin;
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- neck

Outcome cmd_neck(const Config& c) {
  const auto t2s = or_default(c.t2, {std::ldexp(1.0, -5)});
  const double Lambda = c.Lambda.value_or(1.0);
  const double eps = c.epsilon.value_or(0.5);
  const int k = c.k.value_or(2);
  constexpr double kSlack = 1e-12;

  Outcome o;
  o.report.check = "neck";
  o.report.paper_ref =
      "rho(t) = |t| for |t| >= t-2; 0 < rho <= t-2 on |t| <= t-2; |rho'| <= 1; "
      "t-2 = 2^-9 t2^16; chi = 0 on t <= t-1, chi = 1 on t >= t1, |chi'| <= 4/t1; "
      "delta = min{1/(100 Lambda^2), 2^-4, 1/(2 Lambda), 1/(2(k+1)), 2^-17 eps^2/(k+1)^2}";
  o.report.params = {{"t2", list(t2s)}, {"Lambda", Lambda}, {"epsilon", eps}, {"k", k}};
  double margin = std::numeric_limits<double>::infinity();
  for (double t2 : t2s) {
    const WarpProfile rho = build_neck(t2);
    const GlueSchedule s = GlueSchedule::make(t2, Lambda, eps, k);
    const CutoffFunction chi = build_cutoff(s.t_1, s.t_m1);
    const double core = 2 * s.t_m2;
    const double sup_dot = std::max(rho.sup_abs_derivative(-core, core),
                                    rho.sup_abs_derivative(-1, 1));
    bool exact_outside = true, bounded_inside = true, symmetric = true;
    for (int i = 0; i <= 1000; ++i) {
      const double t = s.t_m2 * (1 + 99.0 * i / 1000);
      exact_outside = exact_outside && std::abs(rho(t) - t) <= kSlack * t &&
                      std::abs(rho(-t) - t) <= kSlack * t;
      const double u = s.t_m2 * i / 1000;
      bounded_inside = bounded_inside && rho(u) > 0 && rho(u) <= s.t_m2 * (1 + kSlack);
      symmetric = symmetric && rho(u) == rho(-u);
    }
    const bool a_ok = exact_outside, b_ok = bounded_inside && rho(0) > 0;
    const bool c_ok = sup_dot <= 1 + kSlack;
    const bool chi_ok = chi(s.t_m1) == 0 && chi(s.t_1) == 1 && chi(0.75 * s.t_1) > 0 &&
                        chi(0.75 * s.t_1) < 1 && chi.sup_derivative() <= chi.gradient_bound();
    const bool chain = s.t_m2 < s.t_m1 && s.t_m1 < s.t_1 && s.t_1 < s.t_2 &&
                       6 * std::log(s.t_1) <= std::log(s.t_m2);
    const bool ok = a_ok && b_ok && c_ok && symmetric && chi_ok && chain;
    o.report.pass = o.report.pass && ok;
    margin = std::min(margin, 1 - sup_dot);
    o.report.rows.push_back({{"t_2", t2},
                             {"t_1", s.t_1},
                             {"t_m1", s.t_m1},
                             {"t_m2", s.t_m2},
                             {"rho_0", rho(0)},
                             {"sup_abs_rho_dot", sup_dot},
                             {"rho_equals_abs_t_outside", a_ok},
                             {"rho_bounded_inside", b_ok},
                             {"rho_dot_bounded", c_ok},
                             {"symmetric", symmetric},
                             {"cutoff_sup_derivative", chi.sup_derivative()},
                             {"cutoff_gradient_bound", chi.gradient_bound()},
                             {"cutoff_ok", chi_ok},
                             {"schedule_chain_ok", chain},
                             {"delta", s.delta},
                             {"schedule_compliant", s.compliant()},
                             {"pass", ok}});
  }
  o.report.margin = margin;
  std::ostringstream csv;
  const double tm2 = GlueSchedule::make(t2s.front(), Lambda, eps, k).t_m2;
  build_neck(t2s.front()).write_csv(csv, -4 * tm2, 4 * tm2, 400);
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- glue

struct CapPair {
  Cap c1 = round_cap(1.0, 0.25);
  Cap c2 = round_cap(1.3, 0.25);
};

Outcome cmd_glue(const Config& c) {
  const auto t2s = or_default(c.t2, {0.2, 0.1, 0.05, 0.025});
  const double Lambda = c.Lambda.value_or(3.0);
  const double eps = c.epsilon.value_or(0.1);
  const int n = c.n.value_or(3);
  const CapPair caps;
  AssemblyOptions ao;
  ao.workers = c.workers;
  const Spectrum s1 = assemble_spectrum(cap_model(caps.c1, n, "cap1"), Lambda, ao);
  const Spectrum s2 = assemble_spectrum(cap_model(caps.c2, n, "cap2"), Lambda, ao);
  const Spectrum u = disjoint_union(s1, s2, "disjoint");
  const double resolution = 2 * ao.eigen.tolerance;

  Outcome o;
  o.report.check = "glue";
  o.report.paper_ref =
      "(Lambda, eps)-spectral closeness: +-Lambda not eigenvalues, equal counts in (-Lambda, "
      "Lambda), |mu_j - lambda_j| < eps; max gap nonincreasing as t2 decreases";
  o.report.params = {{"t2", list(t2s)},     {"Lambda", Lambda},   {"epsilon", eps},
                     {"n", n},              {"cap_radii", {1.0, 1.3}}, {"cap_opening", 0.25},
                     {"trend_slack", resolution}};
  std::ostringstream csv;
  Spectrum::write_header(csv);
  u.write_rows(csv);
  Json gaps = Json::array();
  double prev = std::numeric_limits<double>::infinity();
  bool trend = true;
  bool last_close = false;
  for (double t2 : t2s) {
    std::ostringstream tag;
    tag << "glued_t2=" << t2;
    const Spectrum g = assemble_spectrum(glue(caps.c1, caps.c2, t2, n, tag.str()), Lambda, ao);
    const ClosenessReport r = spectral_close(g, u, Lambda, eps);
    Json row = to_json(r);
    row["t_2"] = t2;
    o.report.rows.push_back(row);
    gaps.push_back(number(r.max_gap));
    if (r.max_gap > prev + resolution) trend = false;
    prev = r.max_gap;
    last_close = r.close();
    g.write_rows(csv);
  }
  o.report.params["max_gap_sequence"] = gaps;
  o.report.pass = trend && last_close;
  o.report.margin = eps - prev;
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- claim

Outcome cmd_claim(const Config& c) {
  const double t2 = c.t2.empty() ? 0.05 : c.t2.front();
  const double Lambda = c.Lambda.value_or(3.0);
  const double eps = c.epsilon.value_or(0.1);
  const int n = c.n.value_or(3);
  const CapPair caps;
  AssemblyOptions ao;
  ao.workers = c.workers;
  const Spectrum s1 = assemble_spectrum(cap_model(caps.c1, n, "cap1"), Lambda, ao);
  const Spectrum s2 = assemble_spectrum(cap_model(caps.c2, n, "cap2"), Lambda, ao);
  const Spectrum g = assemble_spectrum(glue(caps.c1, caps.c2, t2, n), Lambda, ao);

  std::vector<std::pair<double, std::string>> probes;
  const double lim = Lambda - 2 * eps;
  if (!c.lambda.empty()) {
    for (double l : c.lambda) probes.emplace_back(l, "requested");
  } else {
    for (const Spectrum* s : {&s1, &s2})
      for (const auto& e : s->entries)
        if (std::abs(e.eigenvalue) < lim) probes.emplace_back(e.eigenvalue, s->tag);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> dist(-lim, lim);
    int added = 0;
    while (added < 10) {
      const double l = dist(rng);
      bool near = false;
      for (const Spectrum* s : {&s1, &s2, &g}) near = near || s->count(l - 1e-3, l + 1e-3) > 0;
      if (near) continue;
      probes.emplace_back(l, "random");
      ++added;
    }
  }

  Outcome o;
  o.report.check = "claim";
  o.report.paper_ref =
      "dim E_{lambda}(D1) + dim E_{lambda}(D2) <= dim E_[lambda-eps, lambda+eps](D_t2) <= "
      "dim E_[lambda-2eps, lambda+2eps](D1) + dim E_[lambda-2eps, lambda+2eps](D2)";
  o.report.params = {{"t2", t2}, {"Lambda", Lambda}, {"epsilon", eps}, {"n", n},
                     {"seed", c.seed}, {"cluster_tolerance", 1e-8}};
  std::ostringstream csv;
  csv << "lambda,kind,point_count,glued_count,outer_count,pass\n";
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& [l, kind] : probes) {
    Json row;
    try {
      const ClaimReport r = claim_counts(g, s1, s2, l, eps);
      row = to_json(r);
      o.report.pass = o.report.pass && r.passed;
      margin = std::min<double>(
          margin, std::min(r.glued_count - r.point_count, r.outer_count - r.glued_count));
      csv << sci(l) << ',' << kind << ',' << r.point_count << ',' << r.glued_count << ','
          << r.outer_count << ',' << (r.passed ? 1 : 0) << '\n';
    } catch (const std::invalid_argument& e) {
      row = {{"lambda", l}, {"hypothesis_violation", e.what()}};
      o.hypothesis_violation = true;
    }
    row["kind"] = kind;
    o.report.rows.push_back(row);
  }
  o.report.margin = margin;
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- rayleigh

Outcome cmd_rayleigh(const Config& c) {
  const double t2 = c.t2.empty() ? std::ldexp(1.0, -8) : c.t2.front();
  const double Lambda = c.Lambda.value_or(1.0);
  const double eps = c.epsilon.value_or(0.5);
  const int n = c.n.value_or(3);
  const std::vector<double> radii = {2.0, 3.0};

  std::vector<ClosedModel> models;
  std::vector<Spectrum> spectra;
  long k = 0;
  for (double R : radii) {
    models.push_back(cap_model(round_cap(R, 0.25), n, "cap_R=" + sci(R)));
    spectra.push_back(assemble_spectrum(models.back(), Lambda));
    k += spectra.back().total();
  }
  const GlueSchedule sched = GlueSchedule::make(t2, Lambda, eps, static_cast<int>(k));
  struct Job {
    std::size_t model;
    SpectrumEntry e;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < models.size(); ++i)
    for (const auto& e : spectra[i].entries) jobs.push_back({i, e});
  auto results = parallel_map(jobs.size(), c.workers, [&](std::size_t i) {
    return rayleigh_check(models[jobs[i].model], sched, jobs[i].e.mode_mu, jobs[i].e.eigenvalue);
  });

  Outcome o;
  o.report.check = "rayleigh";
  o.report.paper_ref =
      "||chi sigma||^2 >= ||sigma||^2 / 2;  ||grad chi . sigma||^2 <= 2^11 t2 ||sigma||^2;  "
      "||(D - lambda)(chi sigma)||^2 / ||chi sigma||^2 <= 2^12 t2";
  o.report.params = {{"t2", t2},          {"Lambda", Lambda},        {"epsilon", eps},
                     {"n", n},            {"cap_radii", list(radii)}, {"cap_opening", 0.25},
                     {"t1", sched.t_1},   {"t_m1", sched.t_m1},      {"k", k}};
  const bool hyp = Lambda * std::sqrt(t2) <= 0.1;
  if (!hyp) {
    o.hypothesis_violation = true;
    o.report.params["hypothesis_violation"] = "Lambda t2^(1/2) <= 1/10 fails";
  }
  std::ostringstream csv;
  csv << "model,mu,lambda,chi_mass,gradient_mass,quotient,bound_b,bound_c,pass\n";
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const RayleighReport& r = results[i];
    Json row = to_json(r);
    row["model"] = models[jobs[i].model].tag;
    o.report.rows.push_back(row);
    o.report.pass = o.report.pass && r.passed();
    margin = std::min({margin, r.chi_mass - 0.5, r.bound_b - r.gradient_mass,
                       r.bound_c - r.quotient});
    csv << models[jobs[i].model].tag << ',' << sci(r.mu) << ',' << sci(r.lambda) << ','
        << sci(r.chi_mass) << ',' << sci(r.gradient_mass) << ',' << sci(r.quotient) << ','
        << sci(r.bound_b) << ',' << sci(r.bound_c) << ',' << (r.passed() ? 1 : 0) << '\n';
  }
  o.report.margin = margin;
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- flow

Outcome cmd_flow(const Config& c) {
  const double tol = c.epsilon.value_or(1e-9);
  Outcome o;
  o.report.check = "flow";
  o.report.paper_ref =
      "negatives - positives in [-1, 1] changes sign between T = a and T = b  =>  0 is an "
      "eigenvalue of D_T0 for some T0 in (a, b)";
  o.report.params = {{"tolerance", tol}, {"synthetic_m", {1, 3, 7}},
                     {"synthetic_background", {"none", "0.9 (x1)"}}};
  double margin = std::numeric_limits<double>::infinity();
  for (long m : {1L, 3L, 7L})
    for (bool bg : {false, true}) {
      std::vector<SpectrumEntry> background;
      if (bg) background.push_back({0.9, 1, 0.0});
      const CrossingReport r = find_crossing(synthetic_linear_family(m, background), tol);
      Json row = to_json(r);
      row["family"] = "synthetic";
      row["m"] = m;
      row["background"] = bg;
      const double err = std::abs(r.T0 - 0.5);
      row["abs_T0_minus_half"] = err;
      row["pass"] = err < 1e-8;
      o.report.pass = o.report.pass && err < 1e-8;
      margin = std::min(margin, 1e-8 - err);
      o.report.rows.push_back(row);
    }

  GeometricFamilyOptions go;
  go.assembly.workers = c.workers;
  const BranchFamily geo = geometric_family(go);
  {
    const CrossingReport r = find_crossing(geo, tol);
    Json row = to_json(r);
    row["family"] = "geometric";
    row["pass"] = r.residual < 1e-6;
    o.report.pass = o.report.pass && r.residual < 1e-6;
    margin = std::min(margin, 1e-6 - r.residual);
    o.report.rows.push_back(row);
  }
  {
    // Background only: the balance never changes sign.
    BranchFamily flat;
    flat.a = 0;
    flat.b = 1;
    flat.tag = "no_crossing";
    flat.generator = [](double) {
      Spectrum s;
      s.Lambda = 1.5;
      s.entries = {{-0.4, 1, 0.0}, {0.5, 2, 0.0}};
      return s;
    };
    bool raised = false;
    try {
      find_crossing(flat, tol);
    } catch (const NoCrossingError&) {
      raised = true;
    }
    o.report.rows.push_back({{"family", "no_crossing"}, {"no_crossing_error", raised},
                             {"pass", raised}});
    o.report.pass = o.report.pass && raised;
  }
  o.report.margin = margin;
  std::ostringstream csv;
  std::vector<double> Ts;
  for (int i = 0; i <= 6; ++i) Ts.push_back(go.a + (go.b - go.a) * i / 6);
  write_branch_csv(csv, geo, Ts);
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- sphere-oracle

Outcome cmd_sphere_oracle(const Config& c) {
  const auto mus = or_default(c.mu, {1.5, 2.5});
  const double Lambda = c.Lambda.value_or(6.0);
  const int n = c.n.value_or(3);
  constexpr double kRelTol = 1e-6;
  constexpr double kSymTol = 1e-8;
  const ClosedModel m = round_model(1.0, n);

  Outcome o;
  o.report.check = "sphere-oracle";
  o.report.paper_ref =
      "shooting eigenvalues of the radial system on rho = sin t, [0, pi] agree with an "
      "independent finite-difference discretization; spectrum symmetric about 0";
  o.report.params = {{"mu", list(mus)}, {"Lambda", Lambda}, {"n", n}, {"fd_cells", 4096},
                     {"richardson", true}, {"rel_tol", kRelTol}, {"symmetry_tol", kSymTol},
                     {"window", "closed [-Lambda, Lambda]"}};
  std::ostringstream csv;
  csv << "mu,index,shooting,oracle,rel_diff\n";
  double margin = std::numeric_limits<double>::infinity();
  auto rows = parallel_map(mus.size(), c.workers, [&](std::size_t i) {
    const double pad = 0.5;
    std::vector<double> shoot, fd;
    for (double v : mode_eigenvalues(m, mus[i], -Lambda - pad, Lambda + pad))
      if (std::abs(v) <= Lambda + 1e-9) shoot.push_back(v);
    for (double v : oracle::fd_mode_eigenvalues([](double t) { return std::sin(t); }, kPi,
                                                  mus[i], Lambda + pad))
      if (std::abs(v) <= Lambda + 1e-9) fd.push_back(v);
    return std::make_pair(shoot, fd);
  });
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const auto& [shoot, fd] = rows[i];
    const bool same_count = shoot.size() == fd.size();
    double worst = same_count ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; same_count && j < shoot.size(); ++j) {
      const double rel = std::abs(shoot[j] - fd[j]) / std::abs(fd[j]);
      worst = std::max(worst, rel);
      csv << sci(mus[i]) << ',' << j << ',' << sci(shoot[j]) << ',' << sci(fd[j]) << ','
          << sci(rel) << '\n';
    }
    const bool ok = worst <= kRelTol;
    o.report.pass = o.report.pass && ok;
    margin = std::min(margin, kRelTol - worst);
    o.report.rows.push_back({{"mu", mus[i]},
                             {"shooting", list(shoot)},
                             {"oracle", list(fd)},
                             {"max_rel_diff", number(worst)},
                             {"pass", ok}});
  }
  // Assembled spectrum of the round model in the same window.
  const Spectrum s = assemble_spectrum(m, Lambda);
  const std::vector<double> f = s.flat();
  double asym = 0;
  for (std::size_t i = 0; i < f.size(); ++i) asym = std::max(asym, std::abs(f[i] + f[f.size() - 1 - i]));
  const bool sym_ok = asym <= kSymTol;
  o.report.pass = o.report.pass && sym_ok;
  o.report.rows.push_back({{"assembled_count", s.total()},
                           {"max_asymmetry", asym},
                           {"pass", sym_ok}});
  o.report.margin = margin;
  o.csv = csv.str();
  return o;
}

const std::vector<std::pair<std::string, std::string>>& command_table() {
  static const std::vector<std::pair<std::string, std::string>> t = {
      {"prop31", "Gronwall comparison on randomized radial instances"},
      {"prop32", "annulus mass quotient against its bound"},
      {"cor1", "per-mode annulus bound 2^7 t1^2 t2"},
      {"cor2", "ball bound 2^9 t1^2 t2 for regular solutions"},
      {"prop33", "warped-cylinder L^2 estimate"},
      {"neck", "neck profile, schedule and cut-off properties"},
      {"glue", "spectral closeness of glued models to the disjoint union"},
      {"claim", "eigenspace count sandwich"},
      {"rayleigh", "cut-off Rayleigh quotient bounds"},
      {"flow", "zero crossings of eigenvalue families"},
      {"sphere-oracle", "shooting solver against the finite-difference oracle"},
  };
  return t;
}

Outcome dispatch(const Config& c) {
  if (c.command == "prop31") return cmd_prop31(c);
  if (c.command == "prop32") return cmd_prop32(c);
  if (c.command == "cor1") return cmd_corollary(c, false);
  if (c.command == "cor2") return cmd_corollary(c, true);
  if (c.command == "prop33") return cmd_prop33(c);
  if (c.command == "neck") return cmd_neck(c);
  if (c.command == "glue") return cmd_glue(c);
  if (c.command == "claim") return cmd_claim(c);
  if (c.command == "rayleigh") return cmd_rayleigh(c);
  if (c.command == "flow") return cmd_flow(c);
  return cmd_sphere_oracle(c);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, _] : command_table()) v.push_back(name);
    return v;
  }();
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks of the gluing estimates for Dirac spectra"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Config c;
  app.add_option("--t2", c.t2, "neck parameter t2 (comma-separated list)")->delimiter(',');
  app.add_option("--mu", c.mu, "mode parameter mu (list; mu_max for cor1/cor2)")->delimiter(',');
  app.add_option("--lambda", c.lambda, "eigenvalue lambda (list)")->delimiter(',');
  std::optional<double> Lambda, epsilon;
  std::optional<int> n, k;
  app.add_option("--Lambda", Lambda, "spectral window Lambda");
  app.add_option("--epsilon", epsilon, "closeness epsilon (tolerance for flow)");
  app.add_option("--k", k, "eigenvalue count k");
  app.add_option("--n", n, "dimension n >= 3")->check(CLI::Range(3, 64));
  app.add_option("--seed", c.seed, "seed for sampled sweeps");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--format", c.format, "csv adds tabular output next to the JSON report")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1, 256));
  for (const auto& [name, help] : command_table()) app.add_subcommand(name, help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsageError;
  }
  c.command = app.get_subcommands().front()->get_name();
  c.Lambda = Lambda;
  c.epsilon = epsilon;
  c.n = n;
  c.k = k;

  Outcome o;
  try {
    o = dispatch(c);
  } catch (const HypothesisError& e) {
    o.report.check = c.command;
    o.report.pass = false;
    o.report.params = {{"hypothesis_violation", e.what()}};
    o.hypothesis_violation = true;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << c.command << ": " << e.what() << "\n";
    return kVerificationFailure;
  }
  o.report.params["seed"] = c.seed;

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(c.out, ec);
  const fs::path base = fs::path(c.out) / c.command;
  {
    std::ofstream js(base.string() + ".json");
    o.report.write(js);
    if (!js) {
      err << "cannot write " << base.string() << ".json\n";
      return kVerificationFailure;
    }
  }
  if (c.format == "csv" && !o.csv.empty()) {
    std::ofstream cs(base.string() + ".csv");
    cs << o.csv;
  }

  // Failures among hypothesis-satisfying runs take precedence over violations.
  bool failed = !o.report.pass && !o.hypothesis_violation;
  for (const auto& row : o.report.rows)
    if (row.contains("pass") && row["pass"].is_boolean() && !row["pass"].get<bool>())
      failed = true;
  const int code = failed ? kVerificationFailure
                          : o.hypothesis_violation ? kHypothesisViolation : kOk;
  std::ostringstream margin;
  margin << std::setprecision(6) << o.report.margin;
  out << c.command << ": "
      << (code == kOk ? "PASS" : code == kHypothesisViolation ? "HYPOTHESIS-VIOLATION" : "FAIL")
      << " margin=" << margin.str() << "\n";
  return code;
}

}  // namespace dirac::cli
