#pragma once

#include <vector>

namespace dirac {

/// One eigenvalue of the sphere operator together with its multiplicity.
struct Mode {
  double mu = 0;
  long multiplicity = 0;
};

/// Eigenvalues of the (possibly doubled) Dirac operator on the round unit
/// S^{n-1} with |mu| <= mu_max, sorted ascending and symmetric under mu -> -mu.
///
/// Uses mu = +-((n-1)/2 + k), k >= 0, with multiplicity
/// 2^floor((n-1)/2) * C(k+n-2, k) per sign. For even n the restricted spinor
/// bundle is two copies of the sphere bundle and the multiplicity is doubled.
struct ModeSpectrum {
  int n = 0;
  double mu_max = 0;
  std::vector<Mode> modes;

  /// The positive half of the list, ascending. Each entry indexes one 2x2
  /// radial system (the pair sigma_j, sigma_{-j}).
  std::vector<Mode> positive() const;
  /// Number of eigenvalues (with multiplicity) listed.
  long total_count() const;
};

/// Throws std::invalid_argument for n < 3 or mu_max < 1.
ModeSpectrum mode_spectrum(int n, double mu_max);

/// Multiplicity of the single eigenvalue +((n-1)/2 + k).
long mode_multiplicity(int n, long k);

}  // namespace dirac
