#include "hyperdoa/linalg.hpp"

#include "hyperdoa/error.hpp"

namespace hyperdoa::linalg {

namespace {
thread_local std::uint64_t tl_eig_calls = 0;
}

HermitianEigen hermitian_eigen(const CMatrix& r) {
  if (r.rows() != r.cols()) throw ShapeError("hermitian_eigen: matrix is not square");
  ++tl_eig_calls;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(r);
  if (solver.info() != Eigen::Success) throw DegenerateInputError("hermitian_eigen: solver did not converge");
  // Eigen sorts ascending; flip to descending.
  const auto n = r.rows();
  HermitianEigen out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = solver.eigenvalues()[n - 1 - k];
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

std::uint64_t eig_call_count() noexcept { return tl_eig_calls; }

std::size_t numerical_rank(const CMatrix& r, double rel_tol) {
  const auto eig = hermitian_eigen(r);
  const double lmax = eig.eigenvalues.size() ? eig.eigenvalues[0] : 0.0;
  if (lmax <= 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k)
    if (eig.eigenvalues[k] > rel_tol * lmax) ++rank;
  return rank;
}

bool is_hermitian(const CMatrix& r, double rel_tol) {
  if (r.rows() != r.cols()) return false;
  const double scale = std::max(r.norm(), 1e-300);
  return (r - r.adjoint()).norm() <= rel_tol * scale;
}

}  // namespace hyperdoa::linalg
