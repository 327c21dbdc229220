#include <doctest.h>

#include <cmath>

#include "fd_radial.hpp"

using namespace dirac;

TEST_CASE("finite-difference oracle reproduces the round-sphere closed form") {
  // rho = sin t on [0, pi]: radial eigenvalues +-(mu + 1/2 + l), l >= 0.
  for (double mu : {1.0, 1.5, 2.0, 3.5}) {
    const auto ev = oracle::fd_mode_eigenvalues([](double t) { return std::sin(t); }, M_PI, mu, 8.25);
    std::vector<double> expect;
    for (double v = mu + 0.5; v < 8.25; v += 1) {
      expect.push_back(v);
      expect.push_back(-v);
    }
    std::sort(expect.begin(), expect.end());
    REQUIRE(ev.size() == expect.size());
    for (std::size_t i = 0; i < ev.size(); ++i)
      CHECK(std::abs(ev[i] - expect[i]) <= 1e-7 * std::abs(expect[i]));
  }
}

TEST_CASE("Richardson extrapolation improves the oracle") {
  auto rho = [](double t) { return std::sin(t); };
  oracle::FdOptions plain;
  plain.richardson = false;
  const auto raw = oracle::fd_mode_eigenvalues(rho, M_PI, 1.5, 2.5, plain);
  const auto ext = oracle::fd_mode_eigenvalues(rho, M_PI, 1.5, 2.5);
  REQUIRE(raw.size() == ext.size());
  REQUIRE(!raw.empty());
  CHECK(std::abs(std::abs(ext.back()) - 2.0) < std::abs(std::abs(raw.back()) - 2.0));
}
