#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstring>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "hyperdoa/signal_model.hpp"

namespace testutil {

using hyperdoa::linalg::CMatrix;

// Rank from singular values; independent of the library's Hermitian solver.
inline std::size_t svd_rank(const CMatrix& m, double rel_tol = 1e-8) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++r;
  return r;
}

inline CMatrix random_complex(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = {nd(gen), nd(gen)};
  return m;
}

inline CMatrix random_hermitian(std::mt19937_64& gen, Eigen::Index n) {
  const CMatrix a = random_complex(gen, n, n);
  return a + a.adjoint();
}

inline std::string read_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

inline bool same_bits(const CMatrix& a, const CMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(std::complex<double>) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace testutil
