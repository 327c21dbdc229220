#pragma once

// Zero crossings of one-parameter families T -> spectrum(D_T), located from
// the change of the sign balance (negatives - positives) in [-1, 1].

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dirac/glued_model.hpp"

namespace dirac {

struct SignedCount {
  long negatives = 0, positives = 0, zeros = 0;
  long balance() const { return negatives - positives; }
};

/// Multiplicity-weighted signs of the eigenvalues in [lo, hi]; |lambda| <= zero_tol counts as 0.
SignedCount count_signed(const Spectrum& spec, double lo = -1, double hi = 1,
                         double zero_tol = 1e-8);

struct BranchFamily {
  double a = 0, b = 1;
  std::function<Spectrum(double)> generator;
  long multiplicity = 1;  // of the branch expected to cross
  std::string tag;
};

/// spectrum(T) = {2T - 1 (x m)} plus a fixed background, T in [0, 1].
BranchFamily synthetic_linear_family(long m, std::vector<SpectrumEntry> background = {},
                                     double window = 1.5);

struct GeometricFamilyOptions {
  double fixed_radius = 1.0;   // cap 1
  double opening = 0.15;       // Euclidean collar of both caps, <= a / 4
  double t_2 = 0.1;
  double well_depth = 2.0;     // V = -depth on cap 2 beyond its collar blend
  // Range of the cap 2 radius. Inside it only the lowest cap 2 branch meets [-1, 1].
  double a = 0.65, b = 0.8;
  int n = 3;
  double window = 1.5;
  AssemblyOptions assembly{};
};

/// Glued model whose second cap has radius T and carries a potential well.
BranchFamily geometric_family(const GeometricFamilyOptions& opt = {});

/// The potential used by geometric_family (zero on x <= 2 opening).
Potential cap_well(double opening, double depth);

struct CrossingReport {
  double T0 = 0;
  double residual = 0;     // min |eigenvalue| at T0
  double bracket_lo = 0, bracket_hi = 0;
  SignedCount at_a, at_b;
  int evaluations = 0;
};

/// Bisection on the sign balance (strict signs, no zero tolerance), keeping
/// balance(lo) == balance(a). Throws
/// NoCrossingError when the balances at a and b are equal. `grid` > 1 first scans that
/// many equal subintervals for the first balance change.
CrossingReport find_crossing(const BranchFamily& family, double tol, int grid = 1);

/// Writes "T,eigenvalue,multiplicity" rows for the given parameters.
void write_branch_csv(std::ostream& os, const BranchFamily& family, const std::vector<double>& Ts);

}  // namespace dirac
