#pragma once

// L^2 mass distribution of radial solutions on Euclidean annuli
// t_{-2} < t_{-1} < t_1 < t_2 and the decay bounds derived from it.

#include <iosfwd>
#include <string>
#include <vector>

#include "dirac/core.hpp"
#include "dirac/radial_system.hpp"

namespace dirac {

enum class HypothesisMode { enforce, disabled };

struct AnnulusSchedule {
  double t_2 = 0, t_1 = 0, t_m1 = 0, t_m2 = 0;
  double lambda_cap = 0;  // Lambda; 0 means "no cap supplied"

  /// t_1 = t_2^4 / 2, t_{-1} = t_1 / 2, t_{-2} = t_{-1}^4 / 2.
  static AnnulusSchedule corollary1(double t_2, double lambda_cap = 0);

  /// Matching point sqrt(t_1 t_{-1}).
  double t0() const;

  /// Violated hypotheses for eigenvalue `lambda`, one human-readable entry each.
  std::vector<std::string> violations(double lambda) const;
  /// Throws HypothesisError listing every violation.
  void require(double lambda) const;
};

/// Natural log of 2^6 max{3 (t_1/t_2)^{2mu+1}, (t_1/t_{-1}) (t_{-2}/t_{-1})^{2mu-1}}.
double log_prop32_bound(double mu, const AnnulusSchedule& s,
                        HypothesisMode mode = HypothesisMode::enforce);
double prop32_bound(double mu, const AnnulusSchedule& s,
                    HypothesisMode mode = HypothesisMode::enforce);

struct RatioReport {
  double mu = 0, lambda = 0;
  double theta = 0;  // NaN for a general complex anchor
  double measured = 0;
  double bound = 0;
  double log_measured = 0;
  double log_bound = 0;
  bool hypotheses_checked = true;

  double margin() const { return bound - measured; }
  bool passed() const { return log_measured <= log_bound; }

  static void write_header(std::ostream& os);  // mu,lambda,theta,measured,bound,margin
  void write_row(std::ostream& os) const;
};

struct RatioOptions {
  ode::Tolerance tolerance{1e-10, 1e-300};
  HypothesisMode mode = HypothesisMode::enforce;
};

/// Inner/outer mass quotient of the solution with B(t0) = (cos theta, sin theta).
RatioReport measured_ratio(double mu, double lambda, const AnnulusSchedule& s, double theta,
                           const RatioOptions& opt = {});
/// Same with an arbitrary complex anchor B(t0) = w.
RatioReport measured_ratio(double mu, double lambda, const AnnulusSchedule& s, const Vec2& w,
                           const RatioOptions& opt = {});

/// Worst anchor direction: `grid` equispaced angles in [0, pi), then
/// golden-section refinement around the best one.
RatioReport max_ratio(double mu, double lambda, const AnnulusSchedule& s, int grid = 64,
                      const RatioOptions& opt = {});

struct CorollaryModeRow {
  double mu = 0;
  long multiplicity = 0;
  double theta = 0;
  double measured = 0;
  double per_mode_bound = 0;  // prop32_bound for corollary1_check, 0 otherwise
  double bound = 0;
  bool passed = false;
};

struct DyadicRow {
  int k = 0;
  double t_2 = 0, t_1 = 0, t_m1 = 0, t_m2 = 0;
  double mu = 0;
  double measured = 0;  // annulus mass / mass on (0, t_2)
  double bound = 0;     // 2^7 t_{1,k}^2 t_{2,k}
  bool passed = false;
};

struct CorollaryReport {
  std::string check;
  int n = 0;
  double t_2 = 0, t_1 = 0, t_m1 = 0, t_m2 = 0;
  double Lambda = 0, lambda = 0, mu_max = 0;
  double bound = 0;
  std::vector<CorollaryModeRow> modes;
  std::vector<DyadicRow> dyadic;
  /// Named intermediate quantities of the bound chain, in order.
  std::vector<std::pair<std::string, double>> chain;
  double aggregate_ratio = 0;
  double geometric_sum = 0;
  bool passed = false;

  double margin() const;
};

/// Per-mode worst-case annulus quotient against 2^7 t_1^2 t_2.
CorollaryReport corollary1_check(int n, double t_2, double Lambda, double lambda, double mu_max,
                                 const RatioOptions& opt = {});
/// Regular solutions on the ball of radius t_2 against 2^9 t_1^2 t_2.
CorollaryReport corollary2_check(int n, double t_2, double Lambda, double lambda, double mu_max,
                                 const RatioOptions& opt = {});

}  // namespace dirac
