#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace dirac {

using Complex = std::complex<double>;

/// Radial mode coefficients (beta_{-j}, beta_j).
using Vec2 = std::array<Complex, 2>;

/// Row-major 2x2 real matrix.
struct Mat2 {
  double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

  Vec2 operator*(const Vec2& v) const {
    return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]};
  }
  /// Operator (spectral) norm.
  double op_norm() const;
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& v) { return {s * v[0], s * v[1]}; }
inline Vec2 operator*(Complex s, const Vec2& v) { return {s * v[0], s * v[1]}; }

inline double norm_sq(const Vec2& v) { return std::norm(v[0]) + std::norm(v[1]); }
inline double norm(const Vec2& v) { return std::sqrt(norm_sq(v)); }

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stated hypothesis of an estimate is not satisfied by the inputs.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// The ODE integrator could not proceed (step-size underflow, non-finite state).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// An eigenvalue sits on the boundary of the requested spectral window.
class WindowCollisionError : public Error {
 public:
  WindowCollisionError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Crossing search was asked for a family whose endpoint sign balances agree.
class NoCrossingError : public Error {
 public:
  using Error::Error;
};

}  // namespace dirac
