#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace sixvertex {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Scale-free deviation |a - b| / (1 + |a| + |b|) in the Frobenius norm.
inline double relative_residual(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / (1.0 + a.norm() + b.norm());
}

inline double relative_residual(cplx a, cplx b) {
  return std::abs(a - b) / (1.0 + std::abs(a) + std::abs(b));
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Integer power by repeated squaring; exact for the small exponents used here.
inline cplx ipow(cplx base, int exponent) {
  if (exponent < 0) return 1.0 / ipow(base, -exponent);
  cplx result{1.0, 0.0};
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace sixvertex
