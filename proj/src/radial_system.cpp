#include "dirac/radial_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "format.hpp"

namespace dirac {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 15,
// which covers |quintic|^2.
constexpr std::array<double, 4> kGaussX = {0.1834346424956498, 0.5255324099163290,
                                           0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGaussW = {0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

constexpr int kRescaleAbove = 256;   // log2 thresholds for mantissa renormalization
constexpr int kRescaleBelow = -256;

Vec2 ldexp2(const Vec2& v, int e) {
  return {Complex(std::ldexp(v[0].real(), e), std::ldexp(v[0].imag(), e)),
          Complex(std::ldexp(v[1].real(), e), std::ldexp(v[1].imag(), e))};
}

}  // namespace

Vec2 ScaledVec2::value() const { return ldexp2(mantissa, exponent); }

Mat2 RadialParams::matrix(double t) const {
  const double r = profile(t);
  const double f = mu / r;
  const double l = lambda - potential(t);
  return {f, -l, l, -f};
}

Mat2 RadialParams::matrix_derivative(double t) const {
  const double r = profile(t);
  const double fp = -mu * profile.derivative(t) / (r * r);
  const double vp = potential.slope(t);
  return {fp, vp, -vp, -fp};
}

Mat2 RadialParams::matrix_in(Coordinate c, double x) const {
  if (c == Coordinate::linear) return matrix(x);
  const double t = std::exp(x);
  Mat2 m = matrix(t);
  m.a11 *= t;
  m.a12 *= t;
  m.a21 *= t;
  m.a22 *= t;
  return m;
}

RadialParams euclidean_params(double mu, double lambda) {
  RadialParams p;
  p.mu = mu;
  p.lambda = lambda;
  p.profile = WarpProfile::euclidean(std::numeric_limits<double>::min(),
                                     std::numeric_limits<double>::max());
  return p;
}

double RadialTrajectory::to_t(double x) const {
  return coordinate_ == Coordinate::log ? std::exp(x) : x;
}

double RadialTrajectory::from_t(double t) const {
  return coordinate_ == Coordinate::log ? std::log(t) : t;
}

double RadialTrajectory::lower_t() const { return to_t(lower()); }
double RadialTrajectory::upper_t() const { return to_t(upper()); }

std::vector<double> RadialTrajectory::grid() const {
  std::vector<double> g;
  g.reserve(nodes_.size());
  for (const auto& n : nodes_) g.push_back(n.x);
  return g;
}

std::size_t RadialTrajectory::step_index(double x) const {
  if (!(x >= lower() && x <= upper()))
    throw std::out_of_range("RadialTrajectory: point outside coverage");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                             [](double v, const Node& n) { return v < n.x; });
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  if (k == 0) k = 1;
  if (k >= nodes_.size()) k = nodes_.size() - 1;
  return k - 1;
}

Vec2 RadialTrajectory::interpolate(std::size_t k, double x) const {
  const Node& a = nodes_[k];
  const Node& b = nodes_[k + 1];
  const double h = b.x - a.x;
  const double u = (x - a.x) / h;
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  const double h0 = 1 - 10 * u3 + 15 * u4 - 6 * u5;
  const double h1 = u - 6 * u3 + 8 * u4 - 3 * u5;
  const double h2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
  const double h3 = 10 * u3 - 15 * u4 + 6 * u5;
  const double h4 = -4 * u3 + 7 * u4 - 3 * u5;
  const double h5 = 0.5 * u3 - u4 + 0.5 * u5;
  const int shift = b.exponent - a.exponent;
  const Vec2 by = ldexp2(b.y, shift), bdy = ldexp2(b.dy, shift), bd2y = ldexp2(b.d2y, shift);
  Vec2 out;
  for (int i = 0; i < 2; ++i)
    out[i] = h0 * a.y[i] + h * h1 * a.dy[i] + h * h * h2 * a.d2y[i] + h3 * by[i] +
             h * h4 * bdy[i] + h * h * h5 * bd2y[i];
  return out;
}

Vec2 RadialTrajectory::interpolate_derivative(std::size_t k, double x) const {
  const Node& a = nodes_[k];
  const Node& b = nodes_[k + 1];
  const double h = b.x - a.x;
  const double u = (x - a.x) / h;
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
  const double d0 = (-30 * u2 + 60 * u3 - 30 * u4) / h;
  const double d1 = 1 - 18 * u2 + 32 * u3 - 15 * u4;
  const double d2 = h * (u - 4.5 * u2 + 6 * u3 - 2.5 * u4);
  const double d3 = -d0;
  const double d4 = -12 * u2 + 28 * u3 - 15 * u4;
  const double d5 = h * (1.5 * u2 - 4 * u3 + 2.5 * u4);
  const int shift = b.exponent - a.exponent;
  const Vec2 by = ldexp2(b.y, shift), bdy = ldexp2(b.dy, shift), bd2y = ldexp2(b.d2y, shift);
  Vec2 out;
  for (int i = 0; i < 2; ++i)
    out[i] = d0 * a.y[i] + d1 * a.dy[i] + d2 * a.d2y[i] + d3 * by[i] + d4 * bdy[i] +
             d5 * bd2y[i];
  return out;
}

ScaledVec2 RadialTrajectory::scaled_at(double x) const {
  const std::size_t k = step_index(x);
  if (x == nodes_[k].x) return {nodes_[k].y, nodes_[k].exponent};
  if (x == nodes_[k + 1].x) return {nodes_[k + 1].y, nodes_[k + 1].exponent};
  return {interpolate(k, x), nodes_[k].exponent};
}

Vec2 RadialTrajectory::derivative_at(double x) const {
  const std::size_t k = step_index(x);
  return ldexp2(interpolate_derivative(k, x), nodes_[k].exponent);
}

void RadialTrajectory::write_columns(std::ostream& os) const {
  os << (coordinate_ == Coordinate::log ? "tau" : "t")
     << ",re_beta_minus,im_beta_minus,re_beta_plus,im_beta_plus\n";
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Vec2 v = value(i);
    os << sci(nodes_[i].x) << ',' << sci(v[0].real()) << ',' << sci(v[0].imag()) << ','
       << sci(v[1].real()) << ',' << sci(v[1].imag()) << '\n';
  }
}

RadialTrajectory integrate(const RadialParams& params, const Span& span, const Vec2& initial,
                           const IntegrateOptions& options) {
  if (!(span.lower <= span.anchor && span.anchor <= span.upper) || !(span.lower < span.upper))
    throw std::invalid_argument("integrate: anchor must lie in a nonempty interval");
  if (!(options.tolerance.rel > 0))
    throw std::invalid_argument("integrate: tolerance must be positive");

  RadialTrajectory traj;
  traj.coordinate_ = span.coordinate;
  traj.params_ = params;

  const Coordinate coord = span.coordinate;
  auto rhs = [&](double x, const Vec2& y) -> Vec2 {
    const double t = coord == Coordinate::log ? std::exp(x) : x;
    const double r = params.profile(t);
    if (!(r > 0) || !std::isfinite(r))
      throw IntegrationError("integrate: warp profile not positive at t = " + std::to_string(t));
    return params.matrix_in(coord, x) * y;
  };
  auto second = [&](double x, const Vec2& y, const Vec2& dy) -> Vec2 {
    Mat2 d;
    if (coord == Coordinate::linear) {
      d = params.matrix_derivative(x);
    } else {
      // d/dtau [t A(t)] = t A(t) + t^2 A'(t)
      const double t = std::exp(x);
      const Mat2 a = params.matrix(t), ap = params.matrix_derivative(t);
      d = {t * a.a11 + t * t * ap.a11, t * a.a12 + t * t * ap.a12, t * a.a21 + t * t * ap.a21,
           t * a.a22 + t * t * ap.a22};
    }
    const Vec2 first = d * y;
    const Vec2 second_part = params.matrix_in(coord, x) * dy;
    return first + second_part;
  };

  using Node = RadialTrajectory::Node;
  auto make_node = [&](double x, const Vec2& y, const Vec2& dy, int e) {
    return Node{x, y, dy, second(x, y, dy), e};
  };

  std::vector<double> bps;
  for (double b : options.breakpoints)
    if (b > span.lower && b < span.upper && b != span.anchor) bps.push_back(b);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  auto sweep = [&](double target, std::vector<Node>& out) {
    // Stops in direction of target, visiting breakpoints on the way.
    std::vector<double> stops;
    for (double b : bps)
      if ((target > span.anchor) ? (b > span.anchor && b < target)
                                 : (b < span.anchor && b > target))
        stops.push_back(b);
    if (target < span.anchor) std::reverse(stops.begin(), stops.end());
    stops.push_back(target);

    Vec2 y = initial;
    int exponent = 0;
    double x = span.anchor;
    for (double stop : stops) {
      auto on_step = [&](double xs, Vec2& ys, Vec2& dys) {
        for (const auto& c : ys)
          if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw IntegrationError("integrate: non-finite state");
        out.push_back(make_node(xs, ys, dys, exponent));
        const double m = std::max(std::abs(ys[0]), std::abs(ys[1]));
        if (m > 0) {
          const int e = std::ilogb(m);
          if (e > kRescaleAbove || e < kRescaleBelow) {
            ys = ldexp2(ys, -e);
            dys = ldexp2(dys, -e);
            exponent += e;
          }
        }
      };
      ode::integrate(rhs, x, stop, y, options.tolerance, on_step);
      x = stop;
    }
  };

  std::vector<Node> backward, forward;
  if (span.anchor > span.lower) sweep(span.lower, backward);
  if (span.anchor < span.upper) sweep(span.upper, forward);

  traj.nodes_.reserve(backward.size() + forward.size() + 1);
  traj.nodes_.assign(backward.rbegin(), backward.rend());
  traj.nodes_.push_back(make_node(span.anchor, initial, rhs(span.anchor, initial), 0));
  traj.nodes_.insert(traj.nodes_.end(), forward.begin(), forward.end());
  return traj;
}

long double weighted_l2(const RadialTrajectory& traj, double a, double b,
                        const std::function<double(double)>& weight) {
  if (a > b) throw std::invalid_argument("weighted_l2: a > b");
  const double xa = traj.from_t(a), xb = traj.from_t(b);
  const double eps = 1e-12 * std::max({1.0, std::abs(traj.lower()), std::abs(traj.upper())});
  if (xa < traj.lower() - eps || xb > traj.upper() + eps)
    throw std::out_of_range("l2_norm_sq: interval outside trajectory coverage");
  const double lo = std::max(xa, traj.lower()), hi = std::min(xb, traj.upper());
  if (!(lo < hi)) return 0.0L;

  const bool log_coord = traj.coordinate() == Coordinate::log;
  long double total = 0.0L;
  std::size_t k = traj.step_index(lo);
  for (; k + 1 < traj.nodes_.size(); ++k) {
    const double p = std::max(lo, traj.nodes_[k].x);
    const double q = std::min(hi, traj.nodes_[k + 1].x);
    if (p >= hi) break;
    if (q <= p) continue;
    const double mid = 0.5 * (p + q), half = 0.5 * (q - p);
    double acc = 0;
    for (std::size_t i = 0; i < kGaussX.size(); ++i) {
      for (double s : {-1.0, 1.0}) {
        const double x = mid + s * half * kGaussX[i];
        const double t = log_coord ? std::exp(x) : x;
        const double jac = log_coord ? t : 1.0;
        acc += kGaussW[i] * norm_sq(traj.interpolate(k, x)) * jac * (weight ? weight(t) : 1.0);
      }
    }
    total += std::ldexp(static_cast<long double>(acc * half), 2 * traj.nodes_[k].exponent);
  }
  return total;
}

double l2_norm_sq(const RadialTrajectory& traj, double a, double b) {
  return static_cast<double>(weighted_l2(traj, a, b, {}));
}

double log_l2_norm_sq(const RadialTrajectory& traj, double a, double b) {
  return static_cast<double>(std::log(weighted_l2(traj, a, b, {})));
}

PowerLawSolution::PowerLawSolution(double mu, Complex c1, Complex c2, double t0)
    : mu_(mu), c1_(c1), c2_(c2), t0_(t0) {
  if (!(t0 > 0)) throw std::invalid_argument("PowerLawSolution: t0 must be > 0");
}

Vec2 PowerLawSolution::at_t(double t) const {
  const double g = std::pow(t / t0_, mu_);
  return {c1_ * g, c2_ / g};
}

Vec2 PowerLawSolution::derivative_t(double t) const {
  const Vec2 v = at_t(t);
  return {(mu_ / t) * v[0], (-mu_ / t) * v[1]};
}

Vec2 PowerLawSolution::derivative_tau(double tau) const {
  const Vec2 v = at_tau(tau);
  return {mu_ * v[0], -mu_ * v[1]};
}

double PowerLawSolution::defect(double lambda, double t) const {
  const double g2 = std::pow(t / t0_, 2 * mu_);
  return std::abs(lambda) * t * std::sqrt(std::norm(c1_) * g2 + std::norm(c2_) / g2);
}

PowerLawSolution exact_lambda0(double mu, Complex c1, Complex c2, double t0) {
  return PowerLawSolution(mu, c1, c2, t0);
}

PowerLawSolution almost_solution(const Vec2& w, double mu, double t0) {
  return PowerLawSolution(mu, w[0], w[1], t0);
}

Vec2 regular_pole_data(double mu, double l, double eta) {
  return {Complex(1.0), Complex(l * eta / (2 * mu + 1))};
}

}  // namespace dirac
