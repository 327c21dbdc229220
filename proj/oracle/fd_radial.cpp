#include "fd_radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <lapacke.h>

namespace dirac::oracle {

namespace {

/// Ascending singular values below `bound` of the N x (N-1) difference operator.
std::vector<double> singular_values(const std::function<double(double)>& rho, double length,
                                    double mu, int cells, double bound) {
  const double h = length / cells;
  const lapack_int m = cells - 1;
  std::vector<double> a(cells), b(cells);
  for (int r = 0; r < cells; ++r) {
    const double f = mu / rho((r + 0.5) * h);
    b[r] = 1.0 / h + 0.5 * f;   // coefficient on node r
    a[r] = -1.0 / h + 0.5 * f;  // coefficient on node r + 1
  }
  // Normal matrix P^T P: tridiagonal, eigenvalues are squared singular values.
  std::vector<double> diag(m), off(m);
  for (int j = 1; j <= m; ++j) diag[j - 1] = b[j] * b[j] + a[j - 1] * a[j - 1];
  for (int j = 1; j < m; ++j) off[j - 1] = b[j] * a[j];
  lapack_int found = 0;
  std::vector<double> w(m);
  std::vector<lapack_int> isuppz(2 * m);
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'V', m, diag.data(), off.data(), -1.0, bound * bound,
                     0, 0, 0.0, &found, w.data(), nullptr, 1, isuppz.data());
  if (info != 0) throw std::runtime_error("fd oracle: eigensolver failed");
  std::vector<double> out(static_cast<std::size_t>(found));
  for (lapack_int i = 0; i < found; ++i) out[i] = std::sqrt(std::max(0.0, w[i]));
  return out;
}

}  // namespace

std::vector<double> fd_mode_eigenvalues(const std::function<double(double)>& rho, double length,
                                        double mu, double bound, const FdOptions& opt) {
  if (opt.cells < 8 || !(length > 0) || !(mu > 0))
    throw std::invalid_argument("fd oracle: bad arguments");
  // A margin on the search bound keeps coarse and fine lists index-aligned.
  const double search = 1.05 * bound + 1.0;
  std::vector<double> sv = singular_values(rho, length, mu, opt.cells, search);
  if (opt.richardson) {
    const std::vector<double> fine = singular_values(rho, length, mu, 2 * opt.cells, search);
    sv.resize(std::min(sv.size(), fine.size()));
    for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = (4 * fine[i] - sv[i]) / 3;
  }
  std::vector<double> out;
  for (double s : sv)
    if (s < bound) {
      out.push_back(s);
      out.push_back(-s);
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dirac::oracle
