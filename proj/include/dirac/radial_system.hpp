#pragma once

// The 2x2 radial system obtained by separating the Dirac eigenvalue equation
// on a warped product dt^2 + rho(t)^2 dsigma^2 along sphere eigenspinors:
//
//   B'(t) = [[ mu/rho(t), -(lambda - V(t)) ],
//            [ lambda - V(t), -mu/rho(t)   ]] B(t),   B = (beta_{-j}, beta_j),
//
// with the coefficients normalized by rho^{-(n-1)/2} so that the L^2 norm of
// the spinor is the sum over modes of the integral of |B|^2 dt. V is an
// optional zeroth-order potential (zero for genuine Dirac operators). For
// rho(t) = t and V = 0 this is the Euclidean annulus system.
//
// Trajectories can be computed in the linear coordinate t or in tau = ln t,
// where the system reads B'(tau) = e^tau A(e^tau) B(tau).

#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "dirac/core.hpp"
#include "dirac/ode.hpp"
#include "dirac/warp_profile.hpp"

namespace dirac {

enum class Coordinate { linear, log };

/// Zeroth-order term V(t) (and V'(t)); an empty potential is identically 0.
struct Potential {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  bool is_zero() const { return !value; }
  double operator()(double t) const { return value ? value(t) : 0.0; }
  double slope(double t) const { return derivative ? derivative(t) : 0.0; }
};

struct RadialParams {
  double mu = 1;
  double lambda = 0;
  WarpProfile profile = WarpProfile::euclidean(1e-300, 1e300);
  Potential potential{};

  /// A(t) in the t coordinate.
  Mat2 matrix(double t) const;
  /// dA/dt.
  Mat2 matrix_derivative(double t) const;
  /// System matrix in the given coordinate at coordinate value x.
  Mat2 matrix_in(Coordinate c, double x) const;
};

/// Euclidean annulus parameters (rho(t) = t, no potential).
RadialParams euclidean_params(double mu, double lambda);

struct Span {
  Coordinate coordinate = Coordinate::log;
  double lower = 0;   // coordinate values (tau for log)
  double upper = 0;
  double anchor = 0;  // where the initial value is imposed, lower <= anchor <= upper
};

struct IntegrateOptions {
  ode::Tolerance tolerance{};
  /// Coordinate values that must appear in the grid (interval ends of later
  /// quadratures, cut-off transition points, ...).
  std::vector<double> breakpoints{};
};

/// Mantissa/exponent pair: the value is mantissa * 2^exponent.
struct ScaledVec2 {
  Vec2 mantissa{};
  int exponent = 0;
  Vec2 value() const;
};

/// Numerically integrated solution of the radial system. Values are stored
/// as mantissa and binary exponent so that solutions spanning thousands of
/// orders of magnitude stay representable; dense output between grid points
/// uses quintic Hermite interpolation.
class RadialTrajectory {
 public:
  Coordinate coordinate() const { return coordinate_; }
  const RadialParams& params() const { return params_; }
  std::size_t size() const { return nodes_.size(); }
  double lower() const { return nodes_.front().x; }
  double upper() const { return nodes_.back().x; }
  /// Extent in the t coordinate.
  double lower_t() const;
  double upper_t() const;

  std::vector<double> grid() const;
  double grid_point(std::size_t i) const { return nodes_[i].x; }
  ScaledVec2 scaled_value(std::size_t i) const { return {nodes_[i].y, nodes_[i].exponent}; }
  Vec2 value(std::size_t i) const { return scaled_value(i).value(); }

  /// Dense output at coordinate value x (throws outside coverage).
  ScaledVec2 scaled_at(double x) const;
  Vec2 at(double x) const { return scaled_at(x).value(); }
  /// Derivative with respect to the trajectory coordinate.
  Vec2 derivative_at(double x) const;

  double to_t(double x) const;
  double from_t(double t) const;

  /// Writes "<coord>,re_beta_minus,im_beta_minus,re_beta_plus,im_beta_plus".
  void write_columns(std::ostream& os) const;

 private:
  friend RadialTrajectory integrate(const RadialParams&, const Span&, const Vec2&,
                                    const IntegrateOptions&);
  friend long double weighted_l2(const RadialTrajectory&, double, double,
                                 const std::function<double(double)>&);
  struct Node {
    double x;
    Vec2 y, dy, d2y;  // mantissas of B, B', B'' in the coordinate
    int exponent;
  };
  std::size_t step_index(double x) const;
  /// Interpolated mantissa in the exponent of the left node of step k.
  Vec2 interpolate(std::size_t k, double x) const;
  Vec2 interpolate_derivative(std::size_t k, double x) const;

  Coordinate coordinate_ = Coordinate::log;
  RadialParams params_;
  std::vector<Node> nodes_;
};

/// Integrates the radial system over `span` with B(anchor) = initial.
/// Throws IntegrationError on step-size underflow or a profile that is not
/// positive/finite along the way.
RadialTrajectory integrate(const RadialParams& params, const Span& span, const Vec2& initial,
                           const IntegrateOptions& options = {});

/// Integral of w(t) |B(t)|^2 dt over [a, b] (t coordinate), in extended range.
long double weighted_l2(const RadialTrajectory& traj, double a, double b,
                        const std::function<double(double)>& weight);

/// Integral of |B(t)|^2 dt over [a, b] (t coordinate). May overflow to inf
/// for extreme trajectories; use log_l2_norm_sq for ratios.
double l2_norm_sq(const RadialTrajectory& traj, double a, double b);
/// Natural log of l2_norm_sq, finite whenever the integral is nonzero.
double log_l2_norm_sq(const RadialTrajectory& traj, double a, double b);

/// The power-law pair v(t) = (c1 (t/t0)^mu, c2 (t/t0)^{-mu}). For lambda = 0 it
/// solves the Euclidean system exactly; for lambda != 0 it is the comparison
/// "almost solution" anchored at t0.
class PowerLawSolution {
 public:
  PowerLawSolution(double mu, Complex c1, Complex c2, double t0);

  Vec2 at_t(double t) const;
  Vec2 derivative_t(double t) const;
  Vec2 at_tau(double tau) const { return at_t(std::exp(tau)); }
  Vec2 derivative_tau(double tau) const;

  /// |v'(tau) - A(tau) v(tau)| of the Euclidean system with eigenvalue lambda,
  /// evaluated at t = e^tau:  |lambda| t sqrt(|c1|^2 (t/t0)^{2mu} + |c2|^2 (t/t0)^{-2mu}).
  double defect(double lambda, double t) const;

  double mu() const { return mu_; }
  double t0() const { return t0_; }
  Vec2 anchor() const { return {c1_, c2_}; }

 private:
  double mu_;
  Complex c1_, c2_;
  double t0_;
};

/// Closed-form lambda = 0 solution through (c1, c2) at t0. Requires t0 > 0.
PowerLawSolution exact_lambda0(double mu, Complex c1, Complex c2, double t0);
/// Comparison function anchored at B(t0) = w. Requires t0 > 0.
PowerLawSolution almost_solution(const Vec2& w, double mu, double t0);

/// Two-term Frobenius data of the solution regular at a pole where rho(t) ~ t:
/// B(eta) ~ (eta^mu, l eta^{mu+1} / (2mu + 1)), returned with the eta^mu factor
/// divided out. `l` is the effective eigenvalue lambda - V(pole).
Vec2 regular_pole_data(double mu, double l, double eta);

}  // namespace dirac
