#pragma once

// Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.
//
// The state is a std::array of double or std::complex<double>. The driver
// hands every accepted step to a callback, which may rescale the state in
// place (used by linear systems to keep mantissas in range).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>

#include "dirac/core.hpp"

namespace dirac::ode {

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-14;
};

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }
inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const std::complex<double>& x) {
  return std::isfinite(x.real()) && std::isfinite(x.imag());
}

template <class T, std::size_t N>
std::array<T, N> axpy(const std::array<T, N>& y, double h,
                      std::initializer_list<std::pair<double, const std::array<T, N>*>> terms) {
  std::array<T, N> out = y;
  for (const auto& [c, k] : terms) {
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < N; ++i) out[i] += (h * c) * (*k)[i];
  }
  return out;
}

}  // namespace detail

template <class T, std::size_t N>
struct Step {
  std::array<T, N> y;
  std::array<T, N> dydx;  // derivative at the new point (FSAL)
  double error = 0;       // scaled error norm, accept when <= 1
};

/// One Dormand-Prince step of size h from (x, y) with known derivative dydx.
template <class T, std::size_t N, class Rhs>
Step<T, N> dopri5_step(const Rhs& f, double x, const std::array<T, N>& y,
                       const std::array<T, N>& dydx, double h, const Tolerance& tol) {
  using S = std::array<T, N>;
  using detail::axpy;
  const S& k1 = dydx;
  const S k2 = f(x + h / 5.0, axpy(y, h, {{1.0 / 5.0, &k1}}));
  const S k3 = f(x + 3.0 * h / 10.0, axpy(y, h, {{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}}));
  const S k4 = f(x + 4.0 * h / 5.0,
                 axpy(y, h, {{44.0 / 45.0, &k1}, {-56.0 / 15.0, &k2}, {32.0 / 9.0, &k3}}));
  const S k5 = f(x + 8.0 * h / 9.0, axpy(y, h,
                                         {{19372.0 / 6561.0, &k1},
                                          {-25360.0 / 2187.0, &k2},
                                          {64448.0 / 6561.0, &k3},
                                          {-212.0 / 729.0, &k4}}));
  const S k6 = f(x + h, axpy(y, h,
                             {{9017.0 / 3168.0, &k1},
                              {-355.0 / 33.0, &k2},
                              {46732.0 / 5247.0, &k3},
                              {49.0 / 176.0, &k4},
                              {-5103.0 / 18656.0, &k5}}));
  Step<T, N> out;
  out.y = axpy(y, h,
               {{35.0 / 384.0, &k1},
                {500.0 / 1113.0, &k3},
                {125.0 / 192.0, &k4},
                {-2187.0 / 6784.0, &k5},
                {11.0 / 84.0, &k6}});
  out.dydx = f(x + h, out.y);
  const S& k7 = out.dydx;
  const S err = axpy(S{}, h,
                     {{71.0 / 57600.0, &k1},
                      {-71.0 / 16695.0, &k3},
                      {71.0 / 1920.0, &k4},
                      {-17253.0 / 339200.0, &k5},
                      {22.0 / 525.0, &k6},
                      {-1.0 / 40.0, &k7}});
  double scale_ref = 0;
  for (std::size_t i = 0; i < N; ++i)
    scale_ref = std::max({scale_ref, detail::magnitude(y[i]), detail::magnitude(out.y[i])});
  double acc = 0;
  for (std::size_t i = 0; i < N; ++i) {
    // Errors are measured against the vector magnitude so that a component
    // passing through zero does not force tiny steps.
    const double sc = tol.abs + tol.rel * scale_ref;
    const double e = detail::magnitude(err[i]) / sc;
    acc += e * e;
  }
  out.error = std::sqrt(acc / static_cast<double>(N));
  bool ok = std::isfinite(out.error);
  for (std::size_t i = 0; i < N && ok; ++i) ok = detail::finite(out.y[i]);
  if (!ok) out.error = std::numeric_limits<double>::infinity();
  return out;
}

struct Stats {
  long accepted = 0;
  long rejected = 0;
};

/// Integrates y' = f(x, y) from x0 to x1 (either direction). On every accepted
/// step `on_step(x, y, dydx)` is called with mutable state references.
/// Returns statistics; y holds the final state on return.
template <class T, std::size_t N, class Rhs, class OnStep>
Stats integrate(const Rhs& f, double x0, double x1, std::array<T, N>& y,
                const Tolerance& tol, OnStep&& on_step, double h_init = 0.0,
                long max_steps = 2'000'000) {
  Stats stats;
  if (x0 == x1) return stats;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);
  std::array<T, N> dydx = f(x0, y);

  double h = h_init;
  if (h <= 0) {
    double ny = 0, nd = 0;
    for (std::size_t i = 0; i < N; ++i) {
      ny = std::max(ny, detail::magnitude(y[i]));
      nd = std::max(nd, detail::magnitude(dydx[i]));
    }
    h = (nd > 0 && ny > 0) ? 0.01 * ny / nd : 1e-3 * span;
    h = std::min(h, 0.1 * span);
  }
  h = std::min(h, span);

  double x = x0;
  while (dir * (x1 - x) > 0) {
    if (stats.accepted + stats.rejected > max_steps)
      throw IntegrationError("ode: maximum number of steps exceeded");
    const double remaining = std::abs(x1 - x);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const double min_h = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(x), std::numeric_limits<double>::min() * 1e10);
    if (h < min_h && !last)
      throw IntegrationError("ode: step size underflow at x = " + std::to_string(x));

    Step<T, N> st = dopri5_step(f, x, y, dydx, dir * h, tol);
    if (st.error <= 1.0) {
      x = last ? x1 : x + dir * h;
      y = st.y;
      dydx = st.dydx;
      ++stats.accepted;
      on_step(x, y, dydx);
      const double fac = st.error == 0 ? 5.0 : std::min(5.0, 0.9 * std::pow(st.error, -0.2));
      h *= std::max(0.2, fac);
    } else {
      ++stats.rejected;
      const double fac = std::isfinite(st.error) ? 0.9 * std::pow(st.error, -0.25) : 0.1;
      h *= std::clamp(fac, 0.1, 0.5);
      if (h < min_h)
        throw IntegrationError("ode: step size underflow at x = " + std::to_string(x));
    }
  }
  return stats;
}

}  // namespace dirac::ode
