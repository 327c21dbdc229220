#pragma once

// Staggered finite-difference discretization of the radial Dirac problem
//   lambda beta_+ = -beta_-' + (mu/rho) beta_-,   lambda beta_- = beta_+' + (mu/rho) beta_+
// on [0, L] with rho vanishing at both ends. beta_- lives on interior nodes
// (it vanishes at both poles for regular solutions), beta_+ on half nodes.
// The eigenvalues are +-singular values of the first-order difference
// operator, obtained from the tridiagonal normal matrix (LAPACK dstevr).
//
// Independent of the shooting solver; potential-free profiles only.

#include <functional>
#include <vector>

namespace dirac::oracle {

struct FdOptions {
  int cells = 4096;         // grid cells of the coarse discretization
  bool richardson = true;   // extrapolate cells and 2*cells assuming O(h^2) error
};

/// Radial eigenvalues with |lambda| < bound, ascending.
std::vector<double> fd_mode_eigenvalues(const std::function<double(double)>& rho, double length,
                                        double mu, double bound, const FdOptions& opt = {});

}  // namespace dirac::oracle
