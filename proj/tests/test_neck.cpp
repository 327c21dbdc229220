#include <doctest.h>

#include <cmath>
#include <random>

#include "dirac/neck.hpp"

using namespace dirac;

TEST_CASE("neck profile properties") {
  for (double t2 : {0.05, 0.2, std::ldexp(1.0, -5)}) {
    const WarpProfile rho = build_neck(t2);
    const double tm2 = std::ldexp(std::pow(t2, 16), -9);
    CHECK(rho(tm2) == doctest::Approx(tm2).epsilon(1e-15));
    CHECK(rho(-tm2) == doctest::Approx(tm2).epsilon(1e-15));
    CHECK(rho(0) > 0);
    CHECK(rho(0) <= tm2);
    for (double f : {1.0, 1.5, 10.0, 1e3})
      CHECK(rho(f * tm2) == doctest::Approx(f * tm2).epsilon(1e-14));
    CHECK(rho(0.5) == 0.5);
    CHECK(rho.sup_abs_derivative(-2 * tm2, 2 * tm2) <= 1 + 1e-12);
    CHECK(rho.sup_abs(-tm2, tm2) <= tm2 * (1 + 1e-12));
    // Derivative continuity at the matching points.
    CHECK(rho.derivative(tm2 * (1 - 1e-9)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rho.derivative(-tm2 * (1 - 1e-9)) == doctest::Approx(-1.0).epsilon(1e-8));
  }
  CHECK_THROWS_AS(build_neck(0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_neck(1.0), std::invalid_argument);
}

TEST_CASE("smoothing function") {
  CHECK(neck_smoothing(0) == 0.5);
  CHECK(neck_smoothing(1) == 1.0);
  CHECK(neck_smoothing(-2.5) == 2.5);
  // Finite-difference check of the derivative and its bound.
  for (int i = 0; i <= 100; ++i) {
    const double x = -1 + 2.0 * i / 100, h = 1e-6;
    const double fd = (neck_smoothing(x + h) - neck_smoothing(x - h)) / (2 * h);
    CHECK(neck_smoothing_derivative(x) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(std::abs(neck_smoothing_derivative(x)) <= 1.0);
  }
}

TEST_CASE("delta formula") {
  CHECK(delta_of(1, 0.5, 2) == doctest::Approx(std::ldexp(1.0, -19) / 9).epsilon(1e-15));
  CHECK(delta_of(0.1, 1, 0) == std::ldexp(1.0, -17));
  double prev = delta_of(0.1, 0.3, 1);
  for (double L = 0.2; L < 1e4; L *= 1.7) {
    const double d = delta_of(L, 0.3, 1);
    CHECK(d <= prev);
    prev = d;
  }
  for (int k = 0; k < 10; ++k) CHECK(delta_of(2, 0.3, k + 1) <= delta_of(2, 0.3, k));
  for (double e = 0.01; e < 10; e *= 2) CHECK(delta_of(2, e, 3) <= delta_of(2, 2 * e, 3));
  CHECK_THROWS_AS(delta_of(0, 1, 1), std::invalid_argument);
}

TEST_CASE("glue schedule") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-30.0, std::log(0.0625));
  for (int i = 0; i < 100; ++i) {
    const GlueSchedule s = GlueSchedule::make(std::exp(u(rng)), 1, 0.5, 2);
    CHECK(s.t_m2 < s.t_m1);
    CHECK(s.t_m1 < s.t_1);
    CHECK(s.t_1 < s.t_2);
    CHECK(6 * std::log(s.t_1) <= std::log(s.t_m2));
    CHECK(s.t_1 == 0.5 * std::pow(s.t_2, 4));
    CHECK(s.t_m1 == 0.5 * s.t_1);
  }
  CHECK(GlueSchedule::make(1e-8, 1, 0.5, 2).compliant());
  CHECK_FALSE(GlueSchedule::make(0.05, 1, 0.5, 2).compliant());
}

TEST_CASE("cut-off function") {
  const GlueSchedule s = GlueSchedule::make(std::ldexp(1.0, -5), 1, 0.5, 0);
  const CutoffFunction chi = build_cutoff(s.t_1, s.t_m1);
  CHECK(chi(s.t_m1) == 0.0);
  CHECK(chi(0.1 * s.t_m1) == 0.0);
  CHECK(chi(s.t_1) == 1.0);
  CHECK(chi(3 * s.t_1) == 1.0);
  CHECK(chi(0.75 * s.t_1) > 0);
  CHECK(chi(0.75 * s.t_1) < 1);
  CHECK(chi.sup_derivative() <= 4 / s.t_1);
  for (int i = 0; i <= 50; ++i) {
    const double t = s.t_m1 + (s.t_1 - s.t_m1) * i / 50;
    CHECK(chi(t) >= 0);
    CHECK(chi(t) <= 1);
  }
  CHECK_THROWS_AS(build_cutoff(1.0, 0.3), std::invalid_argument);
  const CutoffFunction one = CutoffFunction::identity();
  CHECK(one(-5) == 1.0);
  CHECK(one.derivative(0.1) == 0.0);
}

TEST_CASE("warped system on the neck reproduces the Euclidean system where rho = |t|") {
  const double t2 = 0.2;
  const WarpProfile rho = build_neck(t2);
  const double a = 1e-3, b = 0.19;
  IntegrateOptions io;
  io.tolerance = {1e-12, 1e-300};
  const auto warped = integrate(warped_radial_params(rho, 2, 0.7), {Coordinate::linear, a, b, a},
                                {1.0, 0.5}, io);
  const auto flat = integrate(euclidean_params(2, 0.7),
                              {Coordinate::log, std::log(a), std::log(b), std::log(a)}, {1.0, 0.5},
                              io);
  for (double t : {2e-3, 0.01, 0.1, 0.19}) {
    const Vec2 x = warped.at(t), y = flat.at(std::log(t));
    CHECK(norm(x - y) <= 1e-8 * norm(y));
  }
}

TEST_CASE("L2 estimate on warped cylinders") {
  SUBCASE("constant profile, lambda = 0, closed form") {
    for (double rho0 : {0.2, 0.5, 1.0}) {
      const double a = -0.3, b = 0.4, c = 0.25;
      auto mass = [&](double lo, double hi) {
        return rho0 / 2 * (std::exp(2 * hi / rho0) - std::exp(2 * lo / rho0));
      };
      const double lhs = mass(a, b);
      const double rhs = (b - a) / (2 * c) * (mass(b, b + c) + mass(a - c, a));
      CHECK(lhs <= rhs);
      const Prop33Report r = prop33_check(WarpProfile::constant(rho0, -3, 3), 0, a, b, c, 1);
      CHECK(r.passed);
      // theta = 0 is the pure exponential mode.
      CHECK(r.rows[0].rhs / r.rows[0].inner == doctest::Approx(rhs / lhs).epsilon(1e-8));
    }
  }
  SUBCASE("neck profile, t2 = 0.05, lambda = 0.5") {
    const double t2 = 0.05;
    const GlueSchedule s = GlueSchedule::make(t2, 1, 1, 0);
    const WarpProfile rho = build_neck(t2);
    for (double mu : {1.0, 2.0, 3.0, 4.0, 5.0}) {
      const Prop33Report r = prop33_check(rho, 0.5, -s.t_1, s.t_1, t2 - s.t_1, mu);
      CHECK(r.passed);
      CHECK(r.rows.size() == 16);
      CHECK(r.hypothesis_value <= 0.525 + 1e-12);
    }
  }
  SUBCASE("hypothesis violation") {
    CHECK_THROWS_AS(prop33_check(WarpProfile::constant(0.2, -3, 3), 10, -0.5, 0.5, 0.5, 1),
                    HypothesisError);
    CHECK_THROWS_AS(prop33_check(WarpProfile::constant(0.2, -3, 3), 0, 0.5, -0.5, 0.5, 1),
                    std::invalid_argument);
  }
}
