#pragma once

// Block-diagonal operators on (C^2)^{(x)M}, one dense block per S^z sector.
//
// Basis convention: bit j-1 of a state index is the quantum number of site j,
// so site 1 is the rightmost tensor factor. Bit value 0 is spin up
// (sigma^z = +1). Inside a sector states are listed in increasing index order.

#include "sixvertex/errors.hpp"
#include "sixvertex/numeric.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace sixvertex {

/// Twice the total spin, M - 2 * (number of down spins). Always an integer.
using TwoSz = int;

inline int weight_of(TwoSz two_sz, int M) { return (M - two_sz) / 2; }
inline TwoSz two_sz_of_weight(int weight, int M) { return M - 2 * weight; }

/// Basis states (as bit masks) of the sector with the given number of down spins.
inline std::vector<std::uint32_t> sector_states(int M, int weight) {
  std::vector<std::uint32_t> states;
  states.reserve(binomial(M, weight));
  for (std::uint32_t b = 0; b < (1u << M); ++b)
    if (std::popcount(b) == weight) states.push_back(b);
  return states;
}

/// Inverse of sector_states: position of each state inside its sector.
inline std::vector<int> sector_positions(int M) {
  std::vector<int> pos(std::size_t{1} << M, 0);
  std::vector<int> counter(M + 1, 0);
  for (std::uint32_t b = 0; b < (1u << M); ++b) pos[b] = counter[std::popcount(b)]++;
  return pos;
}

class SectorOperator {
 public:
  SectorOperator() = default;
  explicit SectorOperator(int M) : M_(M) {
    if (M < 1 || M > 24) throw DomainError("SectorOperator: M must lie in [1, 24]");
  }

  static SectorOperator zero(int M) {
    SectorOperator op(M);
    for (int w = 0; w <= M; ++w) {
      const auto d = static_cast<Eigen::Index>(binomial(M, w));
      op.blocks_[two_sz_of_weight(w, M)] = Matrix::Zero(d, d);
    }
    return op;
  }

  static SectorOperator identity(int M, cplx value = 1.0) {
    SectorOperator op(M);
    for (int w = 0; w <= M; ++w) {
      const auto d = static_cast<Eigen::Index>(binomial(M, w));
      op.blocks_[two_sz_of_weight(w, M)] = value * Matrix::Identity(d, d);
    }
    return op;
  }

  /// Diagonal operator whose value on sector two_sz is f(two_sz).
  static SectorOperator sz_function(int M, const std::function<cplx(TwoSz)>& f) {
    SectorOperator op = identity(M);
    for (auto& [two_sz, block] : op.blocks_) block *= f(two_sz);
    return op;
  }

  int M() const { return M_; }
  const std::map<TwoSz, Matrix>& blocks() const { return blocks_; }
  bool has_block(TwoSz two_sz) const { return blocks_.count(two_sz) != 0; }

  const Matrix& block(TwoSz two_sz) const {
    auto it = blocks_.find(two_sz);
    if (it == blocks_.end()) throw DomainError("SectorOperator: no block for 2S^z = " + std::to_string(two_sz));
    return it->second;
  }
  Matrix& block(TwoSz two_sz) { return blocks_[two_sz]; }
  void set_block(TwoSz two_sz, Matrix m) { blocks_[two_sz] = std::move(m); }

  std::size_t dimension() const {
    std::size_t d = 0;
    for (const auto& [k, b] : blocks_) d += static_cast<std::size_t>(b.rows());
    return d;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [k, b] : blocks_) s += b.squaredNorm();
    return std::sqrt(s);
  }

  SectorOperator& operator+=(const SectorOperator& o) { return combine(o, [](Matrix& a, const Matrix& b) { a += b; }); }
  SectorOperator& operator-=(const SectorOperator& o) { return combine(o, [](Matrix& a, const Matrix& b) { a -= b; }); }
  SectorOperator& operator*=(cplx c) {
    for (auto& [k, b] : blocks_) b *= c;
    return *this;
  }

  friend SectorOperator operator+(SectorOperator a, const SectorOperator& b) { return a += b; }
  friend SectorOperator operator-(SectorOperator a, const SectorOperator& b) { return a -= b; }
  friend SectorOperator operator*(cplx c, SectorOperator a) { return a *= c; }
  friend SectorOperator operator*(SectorOperator a, cplx c) { return a *= c; }

  friend SectorOperator operator*(const SectorOperator& a, const SectorOperator& b) {
    a.require_same_shape(b);
    SectorOperator out(a.M_);
    for (const auto& [k, blk] : a.blocks_) out.blocks_[k] = blk * b.blocks_.at(k);
    return out;
  }

  SectorOperator transpose() const { return map_blocks([](const Matrix& m) -> Matrix { return m.transpose(); }); }
  SectorOperator adjoint() const { return map_blocks([](const Matrix& m) -> Matrix { return m.adjoint(); }); }
  SectorOperator inverse() const {
    return map_blocks([](const Matrix& m) -> Matrix { return m.partialPivLu().inverse(); });
  }

  /// Multiply sector two_sz by f(two_sz); equals (f(S^z) * O) for block-diagonal O.
  SectorOperator scaled_by_sz(const std::function<cplx(TwoSz)>& f) const {
    SectorOperator out = *this;
    for (auto& [k, b] : out.blocks_) b *= f(k);
    return out;
  }

  SectorOperator map_blocks(const std::function<Matrix(const Matrix&)>& f) const {
    SectorOperator out(M_);
    for (const auto& [k, b] : blocks_) out.blocks_[k] = f(b);
    return out;
  }

  /// Conjugation by the spin reversal R = prod sigma^x: (R O R).
  SectorOperator spin_reversed() const {
    SectorOperator out(M_);
    const std::uint32_t mask = (1u << M_) - 1u;
    const auto pos = sector_positions(M_);
    for (const auto& [k, b] : blocks_) {
      const auto states = sector_states(M_, weight_of(k, M_));
      Matrix m(b.rows(), b.cols());
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
          m(pos[states[i] ^ mask], pos[states[j] ^ mask]) = b(i, j);
      out.blocks_[-k] = std::move(m);
    }
    return out;
  }

  /// Full 2^M x 2^M matrix in the computational (Kronecker) basis.
  Matrix to_dense() const {
    const std::size_t dim = std::size_t{1} << M_;
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& [k, b] : blocks_) {
      const auto states = sector_states(M_, weight_of(k, M_));
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) out(states[i], states[j]) = b(i, j);
    }
    return out;
  }

 private:
  template <class F>
  SectorOperator& combine(const SectorOperator& o, F&& f) {
    require_same_shape(o);
    for (auto& [k, b] : blocks_) f(b, o.blocks_.at(k));
    return *this;
  }

  void require_same_shape(const SectorOperator& o) const {
    if (M_ != o.M_ || blocks_.size() != o.blocks_.size())
      throw DomainError("SectorOperator: incompatible operands");
    for (const auto& [k, b] : blocks_)
      if (!o.has_block(k)) throw DomainError("SectorOperator: incompatible sectors");
  }

  int M_ = 0;
  std::map<TwoSz, Matrix> blocks_;
};

inline SectorOperator commutator(const SectorOperator& a, const SectorOperator& b) { return a * b - b * a; }

inline double relative_residual(const SectorOperator& a, const SectorOperator& b) {
  return (a - b).norm() / (1.0 + a.norm() + b.norm());
}

/// S^z, the spin reversal R and the sign operator (fraktur S) of a chain.
struct SymmetryOps {
  int M = 0;
  SectorOperator sz;
  SectorOperator parity;  // prod sigma^z, (-1)^{#down spins}

  /// R as a dense permutation matrix (it swaps sector S^z with -S^z).
  Matrix reversal_dense() const {
    const std::size_t dim = std::size_t{1} << M;
    const std::uint32_t mask = (1u << M) - 1u;
    Matrix r = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint32_t b = 0; b < dim; ++b) r(b ^ mask, b) = 1.0;
    return r;
  }

  /// R O R.
  SectorOperator reverse(const SectorOperator& op) const { return op.spin_reversed(); }
};

inline SymmetryOps symmetry_ops(int M) {
  if (M < 1) throw DomainError("symmetry_ops: M must be >= 1");
  SymmetryOps ops;
  ops.M = M;
  ops.sz = SectorOperator::sz_function(M, [](TwoSz k) { return cplx(0.5 * k, 0.0); });
  ops.parity = SectorOperator::sz_function(M, [M](TwoSz k) { return weight_of(k, M) % 2 == 0 ? cplx(1) : cplx(-1); });
  return ops;
}

}  // namespace sixvertex
