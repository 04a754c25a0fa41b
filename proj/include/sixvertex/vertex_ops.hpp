#pragma once

// Local vertices R^{(n)} and L, auxiliary-space traces of their products
// (fusion matrices T^{(n)}, auxiliary matrices Q), and the partition function.

#include "sixvertex/cyclo.hpp"
#include "sixvertex/sector_operator.hpp"

#include <array>
#include <optional>
#include <string>

namespace sixvertex {

/// Operator on C^{aux} (x) C^2 stored as four aux x aux blocks <a|V|b>.
struct LocalVertex {
  Eigen::Index aux_dim = 0;
  std::array<Matrix, 4> blocks;  // index 2*a + b

  const Matrix& block(int a, int b) const { return blocks[2 * a + b]; }
  Matrix& block(int a, int b) { return blocks[2 * a + b]; }

  /// (1 (x) sigma^x) V (1 (x) sigma^x).
  LocalVertex spin_flipped() const {
    LocalVertex out;
    out.aux_dim = aux_dim;
    out.block(0, 0) = block(1, 1);
    out.block(0, 1) = block(1, 0);
    out.block(1, 0) = block(0, 1);
    out.block(1, 1) = block(0, 0);
    return out;
  }

  /// Dense matrix on aux (x) quantum, aux index major.
  Matrix to_dense() const {
    Matrix out = Matrix::Zero(2 * aux_dim, 2 * aux_dim);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (Eigen::Index i = 0; i < aux_dim; ++i)
          for (Eigen::Index j = 0; j < aux_dim; ++j) out(2 * i + a, 2 * j + b) = block(a, b)(i, j);
    return out;
  }
};

/// R^{(n_spin+1)}(z) on C^{n_spin+1} (x) C^2.
inline LocalVertex build_R_fused(const RootOfUnity& root, int n_spin, cplx z) {
  const EvalRep rep = eval_rep(root, n_spin);
  const cplx q = root.q;
  const cplx dq = q - 1.0 / q;
  LocalVertex v;
  v.aux_dim = rep.dim();
  v.block(0, 0) = z * q * rep.k_half - rep.k_half_inv;
  v.block(0, 1) = z * q * dq * rep.k_half * rep.f;
  v.block(1, 0) = dq * rep.e * rep.k_half_inv;
  v.block(1, 1) = z * q * rep.k_half_inv - rep.k_half;
  return v;
}

/// Intertwiner L(z; r, s) on C^{N'} (x) C^2 with blocks alpha, beta, gamma, delta.
/// The minus sign gives the spin-reversed vertex.
inline LocalVertex build_L(const RootOfUnity& root, Sign sign, cplx z, cplx r, cplx s) {
  const BorelRep pi = borel_rep(root, Sign::plus, z, r, s);
  const cplx q = root.q;
  const cplx dq = q - 1.0 / q;
  const Matrix k1_half_inv = pi.k1_half.inverse();
  const Matrix k0_half_inv = pi.k0_half.inverse();
  LocalVertex v;
  v.aux_dim = pi.dim();
  v.block(0, 0) = z * s / r * pi.k1_half - k1_half_inv;
  v.block(0, 1) = dq * pi.e0 * k0_half_inv;
  v.block(1, 0) = dq * pi.e1 * k1_half_inv;
  v.block(1, 1) = z * r * q * q * k1_half_inv - pi.k1_half;
  return sign == Sign::plus ? v : v.spin_flipped();
}

struct TraceOptions {
  /// Refuse when 2^M * aux_dim^2 exceeds this many entries.
  double guard_entries = 1e8;
  bool guard_override = false;
  /// Restrict the computation to one sector (others are omitted from the result).
  std::optional<TwoSz> only_sector;
};

namespace detail {

struct MonodromyWalker {
  const LocalVertex& vertex;
  int M;
  int target_weight;
  std::uint32_t rho;
  std::array<bool, 4> nonzero;
  const std::vector<int>& positions;
  Matrix& column_out;  // filled at rows pos(sigma)
  Eigen::Index column;

  // Sites are appended in the order 1, 2, ..., M; the product grows on the left.
  void walk(int site, int ones, std::uint32_t sigma, const Matrix& product) {
    if (site == M) {
      column_out(positions[sigma], column) = product.trace();
      return;
    }
    const int rho_bit = static_cast<int>((rho >> site) & 1u);
    const int remaining = M - site - 1;
    for (int sigma_bit = 0; sigma_bit < 2; ++sigma_bit) {
      const int next_ones = ones + sigma_bit;
      if (next_ones > target_weight || next_ones + remaining < target_weight) continue;
      if (!nonzero[2 * sigma_bit + rho_bit]) continue;
      const Matrix next = vertex.block(sigma_bit, rho_bit) * product;
      walk(site + 1, next_ones, sigma | (static_cast<std::uint32_t>(sigma_bit) << site), next);
    }
  }
};

inline void check_guard(int M, Eigen::Index aux_dim, const TraceOptions& opt) {
  if (M < 1) throw DomainError("trace_monodromy: M must be >= 1");
  if (M > 20) throw ResourceGuardError("trace_monodromy: M > 20 is not supported");
  const double entries = std::ldexp(1.0, M) * static_cast<double>(aux_dim * aux_dim);
  if (!opt.guard_override && entries > opt.guard_entries)
    throw ResourceGuardError("trace_monodromy: 2^M * aux_dim^2 = " + std::to_string(entries) +
                             " exceeds the guard of " + std::to_string(opt.guard_entries) + " entries");
  // Stored sector blocks: sum_w binom(M, w)^2 = binom(2M, M), or one block.
  const double stored = opt.only_sector
                            ? std::pow(static_cast<double>(binomial(M, (M - *opt.only_sector) / 2)), 2.0)
                            : static_cast<double>(binomial(2 * M, M));
  if (!opt.guard_override && stored > opt.guard_entries)
    throw ResourceGuardError("trace_monodromy: sector blocks need " + std::to_string(stored) +
                             " entries, above the guard of " + std::to_string(opt.guard_entries));
}

}  // namespace detail

/// <sigma|O|rho> = Tr_aux[ V^{sigma_M rho_M} ... V^{sigma_1 rho_1} ], stored per S^z sector.
inline SectorOperator trace_monodromy(const LocalVertex& vertex, int M, const TraceOptions& opt = {}) {
  detail::check_guard(M, vertex.aux_dim, opt);
  std::array<bool, 4> nonzero{};
  for (int i = 0; i < 4; ++i) nonzero[i] = vertex.blocks[i].cwiseAbs().maxCoeff() != 0.0;

  const auto positions = sector_positions(M);
  const Matrix id = Matrix::Identity(vertex.aux_dim, vertex.aux_dim);
  SectorOperator out(M);
  for (int w = 0; w <= M; ++w) {
    const TwoSz key = two_sz_of_weight(w, M);
    if (opt.only_sector && *opt.only_sector != key) continue;
    const auto states = sector_states(M, w);
    const auto d = static_cast<Eigen::Index>(states.size());
    Matrix blk = Matrix::Zero(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
      detail::MonodromyWalker walker{vertex, M, w, states[c], nonzero, positions, blk, c};
      walker.walk(0, 0, 0u, id);
    }
    out.set_block(key, std::move(blk));
  }
  if (opt.only_sector && !out.has_block(*opt.only_sector))
    throw DomainError("trace_monodromy: sector 2S^z = " + std::to_string(*opt.only_sector) + " does not exist");
  return out;
}

/// All 4^M matrix elements of the same trace, without sector projection.
/// Used to measure leakage between S^z sectors; exponential in M.
inline Matrix trace_monodromy_dense(const LocalVertex& vertex, int M, const TraceOptions& opt = {}) {
  detail::check_guard(M, vertex.aux_dim, opt);
  if (M > 10) throw ResourceGuardError("trace_monodromy_dense: M > 10 is not supported");
  const Eigen::Index dim = Eigen::Index{1} << M;
  Matrix out = Matrix::Zero(dim, dim);
  const Matrix id = Matrix::Identity(vertex.aux_dim, vertex.aux_dim);
  std::function<void(int, std::uint32_t, std::uint32_t, const Matrix&)> walk =
      [&](int site, std::uint32_t sigma, std::uint32_t rho, const Matrix& product) {
        if (site == M) {
          out(sigma, rho) = product.trace();
          return;
        }
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            walk(site + 1, sigma | (std::uint32_t(a) << site), rho | (std::uint32_t(b) << site),
                 vertex.block(a, b) * product);
      };
  walk(0, 0u, 0u, id);
  return out;
}

/// T^{(n)}(z) = Tr_0 R^{(n)}_{0M}(z q^n) ... R^{(n)}_{01}(z q^n); T^{(0)} = 0.
inline SectorOperator fusion_matrix(const RootOfUnity& root, int n, cplx z, int M, const TraceOptions& opt = {}) {
  if (n < 0) throw DomainError("fusion_matrix: n must be >= 0");
  if (n == 0) {
    SectorOperator zero = SectorOperator::zero(M);
    if (opt.only_sector) {
      SectorOperator one(M);
      one.set_block(*opt.only_sector, zero.block(*opt.only_sector));
      return one;
    }
    return zero;
  }
  return trace_monodromy(build_R_fused(root, n - 1, z * root.power(n)), M, opt);
}

/// Row-to-row transfer matrix T(z) = T^{(2)}(z q^{-2}).
inline SectorOperator transfer_matrix(const RootOfUnity& root, cplx z, int M, const TraceOptions& opt = {}) {
  return fusion_matrix(root, 2, z * root.power(-2), M, opt);
}

/// Closed form of T^{(1)}(z) = (z q^2 - 1)^M id.
inline SectorOperator quantum_determinant(const RootOfUnity& root, cplx z, int M) {
  return SectorOperator::identity(M, ipow(z * root.power(2) - 1.0, M));
}

/// Q(z; r, s) = Tr_0 L_{0M} ... L_{01}; with s_zero_limit the Q^{+/-}(z) limit (s = 0, r = 1).
inline SectorOperator aux_matrix(const RootOfUnity& root, cplx z, cplx r, cplx s, Sign sign, int M,
                                 bool s_zero_limit = false, const TraceOptions& opt = {}) {
  if (s_zero_limit) {
    s = 0.0;
    r = 1.0;
  }
  return trace_monodromy(build_L(root, sign, z, r, s), M, opt);
}

/// Q(z; s) = Q(z; 1, s).
inline SectorOperator aux_matrix(const RootOfUnity& root, cplx z, cplx s, int M, const TraceOptions& opt = {}) {
  return aux_matrix(root, z, 1.0, s, Sign::plus, M, false, opt);
}

/// Q^{+}(z) or Q^{-}(z).
inline SectorOperator aux_limit(const RootOfUnity& root, Sign sign, cplx z, int M, const TraceOptions& opt = {}) {
  return aux_matrix(root, z, 1.0, 0.0, sign, M, true, opt);
}

/// Z = Tr T(z)^{M_rows}, summed over eigenvalues sector by sector.
inline cplx partition_function(const RootOfUnity& root, cplx z, int M, int M_rows, const TraceOptions& opt = {}) {
  if (M < 1 || M_rows < 0) throw DomainError("partition_function: need M >= 1 and M_rows >= 0");
  if (M_rows == 0) return std::ldexp(1.0, M);
  const SectorOperator t = transfer_matrix(root, z, M, opt);
  cplx total = 0.0;
  for (const auto& [k, blk] : t.blocks()) {
    Eigen::ComplexEigenSolver<Matrix> es(blk, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) total += ipow(es.eigenvalues()(i), M_rows);
  }
  return total;
}

}  // namespace sixvertex
