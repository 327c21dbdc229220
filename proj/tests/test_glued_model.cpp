#include <doctest.h>

#include <cmath>

#include "dirac/glued_model.hpp"
#include "fd_radial.hpp"

using namespace dirac;

namespace {

constexpr double kPi = 3.14159265358979323846;

Spectrum make_spectrum(double Lambda, std::vector<SpectrumEntry> e) {
  Spectrum s;
  s.Lambda = Lambda;
  s.entries = std::move(e);
  s.sort();
  return s;
}

}  // namespace

TEST_CASE("cap and round profiles") {
  const Cap cap = round_cap(1.0, 0.25);
  CHECK(cap.profile.lower() == 0.0);
  CHECK(cap.profile.upper() == doctest::Approx(kPi));
  for (double r : {1e-6, 0.01, 0.1, 0.25}) CHECK(cap.profile(r) == doctest::Approx(r).epsilon(1e-15));
  const Cap round = round_cap(1.0, 0.0);
  for (double r : {1e-8, 1e-4}) CHECK(round.profile(r) / r == doctest::Approx(1.0).epsilon(1e-7));
  for (double r : {0.5, 1.0, 2.0}) CHECK(round.profile(r) == doctest::Approx(std::sin(r)));
  // C^1 across the blend.
  for (double r : {0.25, 0.5}) {
    const double h = 1e-7;
    CHECK(cap.profile(r + h) == doctest::Approx(cap.profile(r - h)).epsilon(1e-6));
    CHECK(cap.profile.derivative(r + h) == doctest::Approx(cap.profile.derivative(r - h)).epsilon(1e-5));
  }
  const ClosedModel m = round_model(1.0, 3);
  for (double t : {0.3, 1.5, 3.0}) CHECK(m.profile(t) == doctest::Approx(std::sin(t)));
  CHECK_THROWS(round_cap(1.0, 0.3));
}

TEST_CASE("glued profile") {
  const Cap c1 = round_cap(1.0, 0.25), c2 = round_cap(1.3, 0.25);
  const double t2 = 0.1;
  const ClosedModel g = glue(c1, c2, t2);
  const double tm2 = std::ldexp(std::pow(t2, 16), -9);
  CHECK(g.length() == doctest::Approx(kPi * (1.0 + 1.3)).epsilon(1e-14));
  CHECK(g.neck_t2.has_value());
  for (double s : {-1.0, 1.0}) {
    CHECK(g.profile(s * tm2 * (1 + 1e-9)) == doctest::Approx(tm2).epsilon(1e-8));
    CHECK(g.profile(s * tm2 * (1 - 1e-9)) == doctest::Approx(tm2).epsilon(1e-8));
  }
  CHECK(g.profile(0.2) == doctest::Approx(0.2));
  CHECK(g.profile(-0.2) == doctest::Approx(0.2));
  // Away from the neck the profile is the cap's, reflected on the left.
  for (double r : {0.7, 2.0}) {
    CHECK(g.profile(r) == doctest::Approx(c2.profile(r)));
    CHECK(g.profile(-r) == doctest::Approx(c1.profile(r)));
  }
  CHECK_THROWS_AS(glue(round_cap(1.0, 0.05), c2, 0.1), Error);
}

TEST_CASE("round S^3 radial eigenvalues against the finite-difference oracle and closed form") {
  const ClosedModel m = round_model(1.0, 3);
  for (double mu : {1.5, 2.5}) {
    const auto shoot = mode_eigenvalues(m, mu, -6.5, 6.5);
    const auto fd = oracle::fd_mode_eigenvalues([](double t) { return std::sin(t); }, kPi, mu, 6.5);
    REQUIRE(shoot.size() == fd.size());
    for (std::size_t i = 0; i < shoot.size(); ++i) {
      CHECK(std::abs(shoot[i] - fd[i]) <= 1e-6 * std::abs(fd[i]));
      // Closed form +-(mu + 1/2 + l).
      const double frac = std::abs(shoot[i]) - mu - 0.5;
      CHECK(std::abs(frac - std::round(frac)) <= 1e-8);
    }
  }
}

TEST_CASE("window collisions are reported") {
  const ClosedModel m = round_model(1.0, 3);
  CHECK_THROWS_AS(mode_eigenvalues(m, 1.5, -6.0, 6.0), WindowCollisionError);
  CHECK_THROWS_AS(assemble_spectrum(m, 2.5), WindowCollisionError);
}

TEST_CASE("assembled round spectrum") {
  const ClosedModel m = round_model(1.0, 3);
  const Spectrum s = assemble_spectrum(m, 3.7);
  const auto f = s.flat();
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(f[i] + f[f.size() - 1 - i]) <= 1e-8);
  REQUIRE(!s.entries.empty());
  // Lowest entries: +-3/2 with S^3 multiplicity 2.
  CHECK(s.count(-1.6, -1.4) == 2);
  CHECK(s.count(2.4, 2.6) == 6);
  CHECK(s.count(3.4, 3.6) == 12);
  CHECK(assemble_spectrum(m, 0.5).entries.empty());
  // Window monotonicity.
  const Spectrum big = assemble_spectrum(m, 7.4);
  for (const auto& e : s.entries) CHECK(big.count(e.eigenvalue - 1e-9, e.eigenvalue + 1e-9) >= e.multiplicity);
}

TEST_CASE("glued spectrum count is stable under a tighter tolerance") {
  const ClosedModel g = glue(round_cap(1.0, 0.25), round_cap(1.3, 0.25), 0.1);
  AssemblyOptions a, b;
  b.eigen.tolerance = 1e-11;
  b.eigen.ode = {1e-13, 1e-13};
  const Spectrum s1 = assemble_spectrum(g, 2.0, a), s2 = assemble_spectrum(g, 2.0, b);
  CHECK(s1.total() == s2.total());
  const auto f1 = s1.flat(), f2 = s2.flat();
  for (std::size_t i = 0; i < f1.size(); ++i) CHECK(std::abs(f1[i] - f2[i]) <= 1e-8);
}

TEST_CASE("disjoint union adds multiplicities") {
  const Spectrum a = make_spectrum(2, {{0.5, 1, 1}, {1.0, 2, 1}});
  const Spectrum b = make_spectrum(2, {{0.5, 3, 2}, {-1.0, 1, 1}});
  const Spectrum u = disjoint_union(a, b);
  CHECK(u.total() == 7);
  CHECK(u.count(0.5, 0.5) == 4);
  CHECK(u.count(-2, 0) == 1);
}

TEST_CASE("spectral closeness") {
  const Spectrum a = make_spectrum(1, {{0.5, 1, 1}});
  CHECK(spectral_close(a, a, 1, 0.1).close());
  CHECK(spectral_close(a, a, 1, 0.1).max_gap == 0.0);
  const Spectrum b = make_spectrum(1, {{0.6, 1, 1}});
  CHECK(spectral_close(a, b, 1, 0.2).close());
  CHECK(spectral_close(a, b, 1, 0.05).status == Closeness::not_close);
  const Spectrum c = make_spectrum(1, {{0.5, 2, 1}});
  CHECK_FALSE(spectral_close(c, a, 1, 10).close());
  const Spectrum edge = make_spectrum(1, {{1.0, 1, 1}});
  CHECK(spectral_close(edge, edge, 1, 0.1).status == Closeness::indeterminate);
}

TEST_CASE("claim counts") {
  const Spectrum s1 = make_spectrum(3, {{0.5, 2, 1}, {1.5, 1, 1}});
  const Spectrum s2 = make_spectrum(3, {{-0.7, 1, 1}});
  const Spectrum g = make_spectrum(3, {{0.52, 2, 1}, {1.49, 1, 1}, {-0.69, 1, 1}});
  const ClaimReport none = claim_counts(g, s1, s2, 1.0, 0.1);
  CHECK(none.point_count == 0);
  CHECK(none.glued_count == 0);
  CHECK(none.outer_count == 0);
  CHECK(none.passed);
  const ClaimReport at = claim_counts(g, s1, s2, 0.5, 0.1);
  CHECK(at.point_count == 2);
  CHECK(at.glued_count == 2);
  CHECK(at.passed);
  const ClaimReport wide = claim_counts(g, s1, s2, 0.5, 0.6);
  CHECK(wide.passed);
  CHECK(wide.outer_count >= wide.glued_count);
}

TEST_CASE("Rayleigh bounds on cap eigenmodes") {
  const double t2 = std::ldexp(1.0, -8);
  const GlueSchedule sched = GlueSchedule::make(t2, 1, 0.5, 0);
  const ClosedModel cap = cap_model(round_cap(2.0, 0.25), 3);
  const Spectrum s = assemble_spectrum(cap, 1.0);
  REQUIRE(!s.entries.empty());
  for (const auto& e : s.entries) {
    const RayleighReport r = rayleigh_check(cap, sched, e.mode_mu, e.eigenvalue);
    CHECK(r.passed());
    CHECK(r.chi_mass >= 0.5);
    CHECK(r.bound_c == doctest::Approx(4096 * t2));
    const RayleighReport one =
        rayleigh_check(cap, sched, e.mode_mu, e.eigenvalue, CutoffFunction::identity());
    CHECK(one.quotient == 0.0);
    CHECK(one.chi_mass == doctest::Approx(1.0));
  }
  CHECK(4096 * std::ldexp(1.0, -14) == 0.25);
}
