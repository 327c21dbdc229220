#include <doctest.h>

#include <cmath>
#include <random>

#include "dirac/gronwall.hpp"

using namespace dirac;

TEST_CASE("gronwall_bound closed forms") {
  CHECK(gronwall_bound(2.0, [](double) { return 0.0; }, 0.0, 1.5) == 0.0);
  CHECK(gronwall_bound(2.0, [](double) { return 1.0; }, 0.3, 0.3) == 0.0);
  const double a = 1.7, d0 = 0.3, x0 = -0.4;
  for (double x : {-2.0, -0.5, 0.1, 1.2}) {
    const double exact = d0 * (std::exp(a * std::abs(x - x0)) - 1) / a;
    CHECK(gronwall_bound(a, [=](double) { return d0; }, x0, x) ==
          doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("gronwall_bound is monotone in a_sup and delta") {
  auto d1 = [](double s) { return 0.1 + 0.05 * std::sin(s); };
  auto d2 = [](double s) { return 0.2 + 0.05 * std::sin(s); };
  for (double x : {-1.0, 2.0}) {
    CHECK(gronwall_bound(1.0, d1, 0.0, x) <= gronwall_bound(1.5, d1, 0.0, x));
    CHECK(gronwall_bound(1.0, d1, 0.0, x) <= gronwall_bound(1.0, d2, 0.0, x));
  }
}

TEST_CASE("integrated bound sits below the hand estimate of the annulus argument") {
  // delta(s) = |lambda| e^s |B(t0)| e^{-mu (s - tau0)}, a_sup = mu + 1/10, tau <= tau0.
  const double lambda = 0.05, b0 = 1.0, tau0 = std::log(std::ldexp(1.0, -10));
  for (double mu : {1.0, 2.0, 4.0}) {
    auto delta = [=](double s) {
      return std::abs(lambda) * std::exp(s) * b0 * std::exp(-mu * (s - tau0));
    };
    for (double tau : {tau0 - 0.5, tau0 - 3.0, tau0 - 10.0}) {
      const double hand = std::abs(lambda) * b0 * std::exp(-mu * (tau - tau0)) * std::exp(tau0) *
                          std::exp((tau0 - tau) / 10);
      CHECK(gronwall_bound(mu + 0.1, delta, tau0, tau) <= hand);
    }
  }
}

TEST_CASE("comparison of an exact solution with itself has zero deviation and zero bound") {
  const double mu = 2, tau0 = std::log(0.1);
  const PowerLawSolution v = exact_lambda0(mu, 0.3, 0.4, 0.1);
  const auto params = euclidean_params(mu, 0);
  ComparisonProblem p;
  for (int i = 0; i <= 50; ++i) p.grid.push_back(tau0 - 2 + 4.0 * i / 50);
  p.u = [&](double x) { return v.at_tau(x); };
  p.v = p.u;
  p.v_derivative = [&](double x) { return v.derivative_tau(x); };
  p.matrix = [&](double x) { return params.matrix_in(Coordinate::log, x); };
  p.delta = [](double) { return 0.0; };
  p.a_sup = mu;
  p.x0 = tau0;
  const auto r = verify_comparison(p);
  CHECK(r.passed());
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    CHECK(r.bound[i] == 0.0);
    CHECK(r.deviation[i] == 0.0);
  }
}

TEST_CASE("integrated lambda = 0 solution tracks the closed form to integrator tolerance") {
  const double mu = 2, tau0 = std::log(0.1);
  IntegrateOptions io;
  io.tolerance = {1e-12, 1e-300};
  const auto u = integrate(euclidean_params(mu, 0), {Coordinate::log, tau0 - 2, tau0 + 2, tau0},
                           {0.3, 0.4}, io);
  const PowerLawSolution v = exact_lambda0(mu, 0.3, 0.4, 0.1);
  for (double x : u.grid()) CHECK(norm(u.at(x) - v.at_tau(x)) <= 1e-10 * norm(v.at_tau(x)));
}

TEST_CASE("integrated solution against the power-law comparison function") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0, 1);
  for (int i = 0; i < 10; ++i) {
    const double mu = 1, lambda = 0.05 * (2 * u01(rng) - 1);
    const double lo = -4 + 2 * u01(rng), hi = lo + 3 * u01(rng) + 0.1;
    const double tau0 = lo + (hi - lo) * u01(rng);
    const Vec2 w{std::cos(3.0 * i), std::sin(3.0 * i)};
    IntegrateOptions io;
    io.tolerance = {1e-12, 1e-300};
    const auto u = integrate(euclidean_params(mu, lambda), {Coordinate::log, lo, hi, tau0}, w, io);
    const PowerLawSolution v = almost_solution(w, mu, std::exp(tau0));
    const double a_sup = mu + std::abs(lambda) * std::exp(hi);
    const auto r = verify_comparison(
        u, v, a_sup, [&](double tau) { return v.defect(lambda, std::exp(tau)); }, tau0);
    CHECK(r.passed());
    CHECK(r.anchor_mismatch == 0.0);
  }
}

TEST_CASE("scalar growth problem with a crafted perturbation") {
  // u' = a u; v = e^{a(x-x0)} (1 + e sin(x - x0)) has defect e e^{a(x-x0)} |cos(x - x0)|.
  const double a = 0.8, e = 0.01, x0 = 0.5;
  ComparisonProblem p;
  for (int i = 0; i <= 200; ++i) p.grid.push_back(-2.0 + 5.0 * i / 200);
  p.u = [=](double x) { return Vec2{std::exp(a * (x - x0)), 0.0}; };
  p.v = [=](double x) { return Vec2{std::exp(a * (x - x0)) * (1 + e * std::sin(x - x0)), 0.0}; };
  p.v_derivative = [=](double x) {
    const double g = std::exp(a * (x - x0));
    return Vec2{a * g * (1 + e * std::sin(x - x0)) + g * e * std::cos(x - x0), 0.0};
  };
  p.matrix = [=](double) { return Mat2{a, 0, 0, a}; };
  p.delta = [=](double x) { return e * std::exp(a * (x - x0)) * std::abs(std::cos(x - x0)); };
  p.a_sup = a;
  p.x0 = x0;
  const auto r = verify_comparison(p);
  CHECK(r.passed());
  CHECK(r.worst_defect_excess <= 1e-14);

  SUBCASE("an undersized delta is flagged as a hypothesis violation") {
    p.delta = [=](double x) { return 0.5 * e * std::exp(a * (x - x0)); };
    CHECK(verify_comparison(p).status == ComparisonStatus::hypothesis_violation);
  }
  SUBCASE("a wrong u is flagged as a conclusion violation") {
    p.u = [=](double x) { return Vec2{std::exp(a * (x - x0)) * (1 + 0.5 * (x - x0)), 0.0}; };
    CHECK(verify_comparison(p).status == ComparisonStatus::conclusion_violation);
  }
}
