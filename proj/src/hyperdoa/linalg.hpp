#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace hyperdoa::linalg {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct HermitianEigen {
  RVector eigenvalues;   // descending
  CMatrix eigenvectors;  // column k pairs with eigenvalues[k]
};

// Eigendecomposition of a Hermitian matrix. Every call increments the calling
// thread's counter, which the inference trace reads to prove that a code path
// performed no decomposition.
HermitianEigen hermitian_eigen(const CMatrix& r);

[[nodiscard]] std::uint64_t eig_call_count() noexcept;

// Number of eigenvalues strictly above rel_tol * lambda_max.
[[nodiscard]] std::size_t numerical_rank(const CMatrix& r, double rel_tol = 1e-8);

[[nodiscard]] bool is_hermitian(const CMatrix& r, double rel_tol = 1e-10);

}  // namespace hyperdoa::linalg
