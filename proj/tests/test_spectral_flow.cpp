#include <doctest.h>

#include <cmath>

#include "dirac/spectral_flow.hpp"

using namespace dirac;

TEST_CASE("signed counts") {
  Spectrum s;
  s.Lambda = 2;
  s.entries = {{-0.5, 3, 1}, {0.2, 1, 1}};
  const SignedCount c = count_signed(s);
  CHECK(c.negatives == 3);
  CHECK(c.positives == 1);
  CHECK(c.zeros == 0);
  CHECK(c.balance() == 2);
  const SignedCount e = count_signed(Spectrum{});
  CHECK(e.negatives + e.positives + e.zeros == 0);
  s.entries = {{1e-10, 2, 1}, {1.5, 1, 1}};
  CHECK(count_signed(s).zeros == 2);
  CHECK(count_signed(s).positives == 0);
}

TEST_CASE("linear synthetic families cross at one half") {
  const double tol = 1e-9;
  for (long m : {1L, 3L, 7L}) {
    for (bool bg : {false, true}) {
      std::vector<SpectrumEntry> background;
      if (bg) background.push_back({0.9, 1, 0});
      const BranchFamily f = synthetic_linear_family(m, background);
      const CrossingReport r = find_crossing(f, tol);
      CHECK(std::abs(r.T0 - 0.5) < tol);
      CHECK(r.at_a.balance() - r.at_b.balance() == 2 * m);
      if (m > static_cast<long>(background.size())) {
        CHECK(r.at_a.balance() > 0);
        CHECK(r.at_b.balance() < 0);
      }
      // Refining the bracketing grid does not move the crossing.
      const CrossingReport g = find_crossing(f, tol, 16);
      CHECK(std::abs(g.T0 - r.T0) < tol);
    }
  }
}

TEST_CASE("families without a balance change are rejected") {
  BranchFamily f;
  f.a = 0;
  f.b = 1;
  f.generator = [](double) {
    Spectrum s;
    s.Lambda = 1.5;
    s.entries = {{-0.3, 1, 0}, {0.4, 1, 0}};
    return s;
  };
  CHECK_THROWS_AS(find_crossing(f, 1e-6), NoCrossingError);
  CHECK_THROWS_AS(find_crossing(f, 0.0), std::invalid_argument);
}

TEST_CASE("geometric cap-scaling family") {
  GeometricFamilyOptions opt;
  const BranchFamily f = geometric_family(opt);
  const SignedCount a = count_signed(f.generator(opt.a));
  const SignedCount b = count_signed(f.generator(opt.b));
  CHECK(a.balance() != b.balance());
  const CrossingReport r = find_crossing(f, 1e-8);
  CHECK(r.T0 > opt.a);
  CHECK(r.T0 < opt.b);
  CHECK(r.residual < 1e-6);
  CHECK(cap_well(0.15, 2)(0.1) == 0.0);
  CHECK(cap_well(0.15, 2)(1.0) == -2.0);
}
