#pragma once

// Closed rotationally symmetric models: [lower, upper] x S^{n-1} with
// rho vanishing linearly at both ends. Two caps joined through the neck give
// the glued manifold; spectra are assembled mode by mode.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dirac/core.hpp"
#include "dirac/neck.hpp"
#include "dirac/radial_system.hpp"
#include "dirac/warp_profile.hpp"

namespace dirac {

/// Cap of a round sphere of radius R, flattened to rho(r) = r on [0, collar].
/// The pole r = 0 is the gluing point; the antipodal pole sits at r = pi R.
struct Cap {
  WarpProfile profile;
  double radius = 0;
  double collar = 0;
};

/// rho = r on [0, a], R sin(r/R) on [2a, pi R], quintic blend between.
/// opening = 0 gives the round sphere. Requires radius > 0 and 0 <= opening <= radius/4.
Cap round_cap(double radius, double opening);

struct ClosedModel {
  WarpProfile profile;
  int n = 3;
  std::string tag;
  Potential potential{};
  /// Points where the profile changes regime (used as integrator stops).
  std::vector<double> breakpoints{};
  /// Glued models only: neck parameter, the neck being centred at x = 0.
  std::optional<double> neck_t2{};

  double lower() const { return profile.lower(); }
  double upper() const { return profile.upper(); }
  double length() const { return upper() - lower(); }
};

/// A single cap as a closed manifold.
ClosedModel cap_model(const Cap& cap, int n, std::string tag = "cap");
/// The round sphere of radius R: rho = R sin(t/R) on [0, pi R].
ClosedModel round_model(double radius, int n);

/// Cap 1 reflected to [-pi R_1, 0], cap 2 on [0, pi R_2], neck on |x| < t_2.
/// Throws Error when either collar is shorter than t_2.
ClosedModel glue(const Cap& cap1, const Cap& cap2, double t_2, int n = 3,
                 std::string tag = "glued");

struct EigenOptions {
  double tolerance = 1e-10;      // absolute eigenvalue tolerance
  double pole_offset = 1e-6;     // eta as a fraction of the length
  ode::Tolerance ode{1e-12, 1e-12};
  std::optional<double> matching_point{};
};

/// Radial eigenvalues of mode mu in the open window (lo, hi), ascending.
/// Throws WindowCollisionError if an eigenvalue lies within tolerance of lo or hi.
std::vector<double> mode_eigenvalues(const ClosedModel& model, double mu, double lo, double hi,
                                     const EigenOptions& opt = {});

/// Prufer matching function; eigenvalues are the lambdas where it lies in pi Z.
/// Strictly increasing in lambda.
double matching_phase(const ClosedModel& model, double mu, double lambda,
                      const EigenOptions& opt = {});

struct SpectrumEntry {
  double eigenvalue = 0;
  long multiplicity = 1;
  double mode_mu = 0;
};

struct Spectrum {
  double Lambda = 0;  // window (-Lambda, Lambda)
  std::string tag;
  std::vector<SpectrumEntry> entries;  // sorted by (eigenvalue, mode_mu)

  /// Multiplicity-weighted count in the closed interval [a, b].
  long count(double a, double b) const;
  long total() const;
  /// Eigenvalues repeated by multiplicity.
  std::vector<double> flat() const;
  void sort();

  static void write_header(std::ostream& os);  // eigenvalue,multiplicity,mode_mu,model_tag
  void write_rows(std::ostream& os) const;
};

struct AssemblyOptions {
  EigenOptions eigen{};
  double mu_cap = 50;
  double margin = 1;   // stop at the first mode without eigenvalues in (-Lambda-margin, Lambda+margin)
  int workers = 1;
};

struct AssemblyInfo {
  double last_mu = 0;                      // first mode found empty
  std::vector<double> lowest_magnitude;    // per computed mode
  bool monotone = true;                    // lowest |eigenvalue| nondecreasing in mu
};

/// Union over sphere modes, each radial eigenvalue weighted by the mode multiplicity.
/// Throws Error if no empty mode is found below mu_cap.
Spectrum assemble_spectrum(const ClosedModel& model, double Lambda,
                           const AssemblyOptions& opt = {}, AssemblyInfo* info = nullptr);

/// Entries of both spectra with multiplicities added (window: the smaller one).
Spectrum disjoint_union(const Spectrum& a, const Spectrum& b, std::string tag = {});

enum class Closeness { close, not_close, indeterminate };
std::string to_string(Closeness c);

struct ClosenessReport {
  Closeness status = Closeness::indeterminate;
  double Lambda = 0, epsilon = 0;
  long count1 = 0, count2 = 0;
  std::vector<std::pair<double, double>> pairs;  // sorted pairing when counts agree
  double max_gap = 0;                            // +inf when counts differ
  std::string detail;

  bool close() const { return status == Closeness::close; }
};

/// (Lambda, epsilon)-spectral closeness. An eigenvalue within `tolerance` of
/// +-Lambda makes the result indeterminate.
ClosenessReport spectral_close(const Spectrum& s1, const Spectrum& s2, double Lambda,
                               double epsilon, double tolerance = 1e-8);

struct ClaimReport {
  double lambda = 0, epsilon = 0;
  long point_count = 0;    // dim E_{lambda}(D_1) + dim E_{lambda}(D_2)
  long glued_count = 0;    // dim E_{[lambda-eps, lambda+eps]}(D_glued)
  long outer_count = 0;    // dim E_{[lambda-2eps, lambda+2eps]}(D_1) + same for D_2
  bool passed = false;
};

/// Two-sided count sandwich; point evaluation clusters within `cluster_tol`.
/// Requires lambda in (-Lambda + 2 eps, Lambda - 2 eps) for the glued window.
ClaimReport claim_counts(const Spectrum& glued, const Spectrum& s1, const Spectrum& s2,
                         double lambda, double epsilon, double cluster_tol = 1e-8);

/// Eigen-solution of one mode assembled from two pole shots matched at x_m.
/// The shot from the lower pole uses log(x - lower) so that it resolves
/// arbitrarily small distances from that pole.
class ModeSolution {
 public:
  /// The lower shot starts at distance `eta` from the lower pole, the upper one
  /// at opt.pole_offset * length. `lower_breaks` are distances from the lower
  /// pole the grid must contain.
  ModeSolution(const ClosedModel& model, double mu, double lambda, double eta,
               const std::vector<double>& lower_breaks = {}, const EigenOptions& opt = {});

  double mu() const { return mu_; }
  double lambda() const { return lambda_; }
  /// Integral of w(r) |B|^2 over the model, r = x - lower.
  long double mass(const std::function<double(double)>& w = {}) const;
  /// Same restricted to r in [a, b] with a >= eta (lower-pole shot only).
  long double lower_mass(double a, double b, const std::function<double(double)>& w = {}) const;
  /// Relative mismatch of the two shots' directions at x_m.
  double mismatch() const { return mismatch_; }

 private:
  double mu_, lambda_, eta_, eta_upper_, lower_, xm_;
  std::optional<RadialTrajectory> left_, right_;
  long double right_scale_ = 1;  // |c|^2 applied to the upper shot
  long double left_tail_ = 0;    // mass on r < eta
  long double right_tail_ = 0;   // unscaled mass within eta of the upper pole
  double tail_weight_at_ = 0;    // r at which tail weights are evaluated (upper side)
  double mismatch_ = 0;
};

struct RayleighReport {
  double mu = 0, lambda = 0, t_2 = 0;
  double chi_mass = 0;        // ||chi sigma||^2 / ||sigma||^2
  double gradient_mass = 0;   // ||chi' sigma||^2 / ||sigma||^2
  double quotient = 0;        // ||chi' sigma||^2 / ||chi sigma||^2
  double bound_b = 0;         // 2^11 t_2
  double bound_c = 0;         // 2^12 t_2
  bool a_ok = false, b_ok = false, c_ok = false;
  bool hypotheses_ok = false;  // Lambda t_2^(1/2) <= 1/10

  bool passed() const { return a_ok && b_ok && c_ok; }
};

/// Cut-off test section chi sigma for an eigen-solution sigma of the cap model
/// (lower pole = gluing point). Uses build_cutoff(t_1, t_-1) of the schedule
/// unless `cutoff` is supplied.
RayleighReport rayleigh_check(const ClosedModel& cap, const GlueSchedule& sched, double mu,
                              double lambda, const std::optional<CutoffFunction>& cutoff = {},
                              const EigenOptions& opt = {});

}  // namespace dirac
