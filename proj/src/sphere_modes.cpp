#include "dirac/sphere_modes.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dirac {

long mode_multiplicity(int n, long k) {
  // C(k + n - 2, k) computed incrementally; exact in integers.
  long binom = 1;
  for (long i = 1; i <= k; ++i) binom = binom * (n - 2 + i) / i;
  long mult = (1L << ((n - 1) / 2)) * binom;
  if (n % 2 == 0) mult *= 2;
  return mult;
}

ModeSpectrum mode_spectrum(int n, double mu_max) {
  if (n < 3)
    throw std::invalid_argument("mode_spectrum: n must be >= 3 (got " + std::to_string(n) + ")");
  if (!(mu_max >= 1.0))
    throw std::invalid_argument(
        "mode_spectrum: mu_max below smallest eigenvalue magnitude 1");

  ModeSpectrum out;
  out.n = n;
  out.mu_max = mu_max;
  const double base = 0.5 * (n - 1);
  std::vector<Mode> pos;
  for (long k = 0; base + k <= mu_max; ++k) pos.push_back({base + k, mode_multiplicity(n, k)});
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.modes.push_back({-it->mu, it->multiplicity});
  out.modes.insert(out.modes.end(), pos.begin(), pos.end());
  return out;
}

std::vector<Mode> ModeSpectrum::positive() const {
  std::vector<Mode> out;
  std::copy_if(modes.begin(), modes.end(), std::back_inserter(out),
               [](const Mode& m) { return m.mu > 0; });
  return out;
}

long ModeSpectrum::total_count() const {
  long c = 0;
  for (const auto& m : modes) c += m.multiplicity;
  return c;
}

}  // namespace dirac
