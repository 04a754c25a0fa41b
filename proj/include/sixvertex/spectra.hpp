#pragma once

// Joint eigenbases of commuting sector blocks, eigenvalues of Q as
// polynomials in z, and the split of their zeroes into x^+ and x^- sets.

#include "sixvertex/sampling.hpp"
#include "sixvertex/vertex_ops.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sixvertex {

struct EigenFamily {
  TwoSz two_sz = 0;
  Matrix basis;   // orthonormal columns
  Matrix labels;  // labels(i, k): eigenvalue of registered operator k on basis vector i
  std::vector<double> offdiag_residual;
  bool degenerate = false;
  int refinements = 0;

  Eigen::Index size() const { return basis.cols(); }

  /// diag(V^* B V) for a block B of the same sector.
  Vector eigenvalues_of(const Matrix& block) const { return (basis.adjoint() * block * basis).diagonal(); }

  /// |V^* B V - diag| / |B|.
  double offdiagonal(const Matrix& block) const {
    Matrix d = basis.adjoint() * block * basis;
    d.diagonal().setZero();
    const double n = block.norm();
    return n == 0.0 ? 0.0 : d.norm() / n;
  }
};

namespace detail {

inline double commutation_defect(const Matrix& a, const Matrix& b) {
  const double scale = a.norm() * b.norm();
  if (scale == 0.0) return 0.0;
  return (a * b - b * a).norm() / scale;
}

/// Number of eigenvalue pairs closer than tol * scale.
inline int near_coincidences(const Vector& ev, double tol) {
  const double scale = std::max(1e-300, ev.cwiseAbs().maxCoeff());
  int count = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    for (Eigen::Index j = i + 1; j < ev.size(); ++j)
      if (std::abs(ev(i) - ev(j)) < tol * scale) ++count;
  return count;
}

}  // namespace detail

/// Common eigenbasis of mutually commuting normal blocks, via the Schur vectors
/// of a seeded random combination. ops[0] carries the largest weight.
inline EigenFamily joint_eigenbasis_blocks(const std::vector<Matrix>& ops, TwoSz two_sz, std::uint64_t seed) {
  if (ops.empty()) throw FamilyError("joint_eigenbasis: no operators");
  const Eigen::Index d = ops.front().rows();
  double largest = 0.0;
  for (const auto& o : ops) {
    if (o.rows() != d || o.cols() != d) throw FamilyError("joint_eigenbasis: blocks of different size");
    largest = std::max(largest, o.norm());
  }
  // Blocks at rounding level (identically vanishing eigenvalues) carry no information.
  std::vector<bool> live(ops.size());
  for (std::size_t k = 0; k < ops.size(); ++k) live[k] = ops[k].norm() > 1e-11 * (1.0 + largest);
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      if (!live[i] || !live[j]) continue;
      const double defect = detail::commutation_defect(ops[i], ops[j]);
      if (defect > 1e-9)
        throw FamilyError("joint_eigenbasis: operators " + std::to_string(i) + " and " + std::to_string(j) +
                          " do not commute (defect " + std::to_string(defect) + ")");
    }

  EigenFamily fam;
  fam.two_sz = two_sz;
  int best_coincidences = -1;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Sampler rng(seed + 7919u * static_cast<std::uint64_t>(attempt));
    Matrix combo = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (!live[k]) continue;
      const double n = ops[k].norm();
      const cplx c = k == 0 ? cplx(1.0) : rng.annulus(0.2, 0.6);
      combo += (c / n) * ops[k];
    }
    Eigen::ComplexSchur<Matrix> schur(combo);
    const Vector ev = schur.matrixT().diagonal();
    const int coincidences = detail::near_coincidences(ev, 1e-8);
    if (best_coincidences < 0 || coincidences < best_coincidences) {
      best_coincidences = coincidences;
      fam.basis = schur.matrixU();
      fam.refinements = attempt;
    }
    if (coincidences == 0) break;
  }
  fam.degenerate = best_coincidences > 0;
  fam.labels.resize(d, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k) {
    fam.labels.col(static_cast<Eigen::Index>(k)) = fam.eigenvalues_of(ops[k]);
    fam.offdiag_residual.push_back(live[k] ? fam.offdiagonal(ops[k]) : 0.0);
  }
  return fam;
}

inline EigenFamily joint_eigenbasis(const std::vector<SectorOperator>& ops, TwoSz two_sz, std::uint64_t seed) {
  std::vector<Matrix> blocks;
  blocks.reserve(ops.size());
  for (const auto& o : ops) blocks.push_back(o.block(two_sz));
  return joint_eigenbasis_blocks(blocks, two_sz, seed);
}

// ---- polynomial eigenvalues ------------------------------------------------

struct QSample {
  cplx s;
  Vector coeffs;  // Q_0 .. Q_M
};

struct ZeroString {
  cplx start;
  int length = 0;
  bool minus_side = false;
};

struct QPolynomial {
  TwoSz two_sz = 0;
  Eigen::Index eigen_index = 0;
  std::vector<QSample> samples;
  std::vector<cplx> zeroes_plus;
  std::vector<cplx> zeroes_minus;
  std::vector<ZeroString> strings;
  cplx normalization = 0.0;
  bool vanishing = false;
  std::vector<std::string> warnings;
};

/// Q(z; s) restricted to one sector, as a function of (z, s).
using SectorBlockBuilder = std::function<Matrix(cplx z, cplx s)>;

inline SectorBlockBuilder aux_block_builder(const RootOfUnity& root, int M, TwoSz two_sz, const TraceOptions& opt = {}) {
  TraceOptions local = opt;
  local.only_sector = two_sz;
  return [root, M, two_sz, local](cplx z, cplx s) { return aux_matrix(root, z, s, M, local).block(two_sz); };
}

namespace detail {

inline Matrix vandermonde(const std::vector<cplx>& nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Matrix v(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    cplx p = 1.0;
    for (Eigen::Index m = 0; m < n; ++m, p *= nodes[j]) v(j, m) = p;
  }
  return v;
}

inline double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) == 0.0 ? INFINITY : sv(0) / sv(sv.size() - 1);
}

}  // namespace detail

/// Coefficients Q_0..Q_M of every family eigenvalue of Q(z; s), from M + 1
/// samples on the circle |z| = sample_radius.
inline std::vector<QPolynomial> polynomial_eigenvalues(const EigenFamily& family, const SectorBlockBuilder& builder,
                                                       int M, cplx s, double sample_radius = 1.0) {
  std::vector<double> radii = {sample_radius, 1.0, 0.8, 1.25};
  for (double radius : radii) {
    std::vector<cplx> nodes;
    for (int j = 0; j <= M; ++j) nodes.push_back(std::polar(radius, 2.0 * std::numbers::pi * j / (M + 1)));
    const Matrix v = detail::vandermonde(nodes);
    if (detail::condition_number(v) > 1e10) continue;
    Matrix values(M + 1, family.size());
    for (int j = 0; j <= M; ++j) values.row(j) = family.eigenvalues_of(builder(nodes[j], s)).transpose();
    const Matrix coeffs = v.partialPivLu().solve(values);
    std::vector<QPolynomial> out;
    for (Eigen::Index i = 0; i < family.size(); ++i) {
      QPolynomial p;
      p.two_sz = family.two_sz;
      p.eigen_index = i;
      p.samples.push_back({s, coeffs.col(i)});
      p.normalization = coeffs(0, i);
      p.vanishing = coeffs.col(i).cwiseAbs().maxCoeff() < 1e-10;
      out.push_back(std::move(p));
    }
    return out;
  }
  throw ReconstructionError("polynomial_eigenvalues: Vandermonde system ill-conditioned at every radius");
}

/// Adds a further s sample to polynomials built by polynomial_eigenvalues.
inline void add_s_sample(std::vector<QPolynomial>& polys, const EigenFamily& family, const SectorBlockBuilder& builder,
                         int M, cplx s, double sample_radius = 1.0) {
  auto extra = polynomial_eigenvalues(family, builder, M, s, sample_radius);
  for (std::size_t i = 0; i < polys.size(); ++i) polys[i].samples.push_back(extra[i].samples.front());
}

inline cplx evaluate_polynomial(const Vector& coeffs, cplx z) {
  cplx acc = 0.0;
  for (Eigen::Index m = coeffs.size(); m-- > 0;) acc = acc * z + coeffs(m);
  return acc;
}

/// Roots of sum_m c_m z^m via the companion matrix, polished by one Newton step when needed.
inline std::vector<cplx> polynomial_roots(const Vector& coeffs, double rel_trim = 1e-9) {
  const double scale = coeffs.cwiseAbs().maxCoeff();
  if (scale == 0.0) return {};
  Eigen::Index deg = coeffs.size() - 1;
  while (deg > 0 && std::abs(coeffs(deg)) <= rel_trim * scale) --deg;
  if (deg == 0) return {};
  Matrix companion = Matrix::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs(i) / coeffs(deg);
  Eigen::ComplexEigenSolver<Matrix> es(companion, false);
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  const Vector head = coeffs.head(deg + 1);
  Vector deriv(deg);
  for (Eigen::Index m = 1; m <= deg; ++m) deriv(m - 1) = static_cast<double>(m) * head(m);
  for (cplx& r : roots) {
    const cplx p = evaluate_polynomial(head, r);
    if (std::abs(p) <= 1e-9 * scale * std::max(1.0, std::pow(std::abs(r), static_cast<double>(deg)))) continue;
    const cplx dp = evaluate_polynomial(deriv, r);
    if (dp != 0.0) r -= p / dp;
  }
  return roots;
}

/// Full strings x, x q^2, ..., x q^{2N'-2} among a zero set (multiplicities ignored).
inline std::vector<ZeroString> detect_strings(const std::vector<cplx>& zeroes, const RootOfUnity& root,
                                              bool minus_side = false, double tol = 1e-6) {
  std::vector<cplx> distinct;
  for (const cplx& x : zeroes) {
    bool seen = false;
    for (const cplx& y : distinct) seen = seen || std::abs(x - y) <= tol * std::max(1.0, std::abs(x));
    if (!seen) distinct.push_back(x);
  }
  std::vector<bool> used(distinct.size(), false);
  std::vector<ZeroString> out;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> members;
    for (int k = 0; k < root.N_prime; ++k) {
      const cplx target = distinct[i] * root.power(2 * k);
      for (std::size_t j = 0; j < distinct.size(); ++j)
        if (!used[j] && std::abs(distinct[j] - target) <= tol * std::max(1.0, std::abs(target))) {
          members.push_back(j);
          break;
        }
    }
    if (static_cast<int>(members.size()) == root.N_prime) {
      for (std::size_t j : members) used[j] = true;
      out.push_back({distinct[i], root.N_prime, minus_side});
    }
  }
  return out;
}

/// Splits the zeroes of a polynomial reconstructed at two or more s values into
/// s-independent ones (x^+, root z = 1/x^+) and ones scaling like 1/s (x^-, z = 1/(s x^-)).
inline QPolynomial& extract_and_classify_zeroes(QPolynomial& poly, const RootOfUnity& root, double tol = 1e-6) {
  if (poly.samples.size() < 2) throw DomainError("extract_and_classify_zeroes: need at least two s samples");
  poly.zeroes_plus.clear();
  poly.zeroes_minus.clear();
  poly.strings.clear();
  if (poly.vanishing) {
    poly.warnings.push_back("eigenvalue vanishes identically; no zeroes extracted");
    return poly;
  }
  const QSample& a = poly.samples[0];
  const QSample& b = poly.samples[1];
  const auto roots_a = polynomial_roots(a.coeffs);
  const auto roots_b = polynomial_roots(b.coeffs);
  if (roots_a.size() != roots_b.size())
    poly.warnings.push_back("degree changes between s samples (" + std::to_string(roots_a.size()) + " vs " +
                            std::to_string(roots_b.size()) + ")");
  std::vector<bool> used(roots_b.size(), false);
  const cplx ratio = a.s / b.s;
  for (const cplx& r : roots_a) {
    double best_const = INFINITY, best_lin = INFINITY;
    std::size_t idx_const = 0, idx_lin = 0;
    for (std::size_t j = 0; j < roots_b.size(); ++j) {
      if (used[j]) continue;
      const double dc = std::abs(roots_b[j] - r) / std::abs(r);
      const double dl = std::abs(roots_b[j] - r * ratio) / std::abs(r * ratio);
      if (dc < best_const) best_const = dc, idx_const = j;
      if (dl < best_lin) best_lin = dl, idx_lin = j;
    }
    if (best_const < tol && best_const <= best_lin) {
      used[idx_const] = true;
      poly.zeroes_plus.push_back(1.0 / r);
    } else if (best_lin < tol) {
      used[idx_lin] = true;
      poly.zeroes_minus.push_back(1.0 / (a.s * r));
    } else {
      poly.warnings.push_back("root " + std::to_string(r.real()) + "+" + std::to_string(r.imag()) +
                              "i unclassified: constancy residual " + std::to_string(best_const) +
                              ", linear residual " + std::to_string(best_lin));
    }
  }
  poly.strings = detect_strings(poly.zeroes_plus, root, false);
  for (const auto& st : detect_strings(poly.zeroes_minus, root, true)) poly.strings.push_back(st);
  return poly;
}

/// -(1 - q^{2N'S^z}) / (1 - q^{2S^z}).
inline cplx factorized_normalization(const RootOfUnity& root, TwoSz two_sz) {
  return -(1.0 - root.half_power(2L * root.N_prime * two_sz)) / (1.0 - root.half_power(2L * two_sz));
}

/// N prod (1 - z x^+) prod (1 - z s x^-).
inline cplx factorized_value(const QPolynomial& poly, cplx normalization, cplx z, cplx s) {
  cplx v = normalization;
  for (const cplx& x : poly.zeroes_plus) v *= 1.0 - z * x;
  for (const cplx& x : poly.zeroes_minus) v *= 1.0 - z * s * x;
  return v;
}

// ---- sector analysis -------------------------------------------------------

struct SpectralOptions {
  std::uint64_t seed = 1;
  cplx s_first{0.7, 0.4};
  double sample_radius = 1.0;
  bool include_limits = true;  // register Q^+ and Q^- in the family (even N only)
  TraceOptions trace;
};

/// Joint eigenbasis of a sector and the Q-polynomials of its vectors at s and 2s.
struct SectorSpectrum {
  TwoSz two_sz = 0;
  EigenFamily family;
  std::vector<QPolynomial> polys;
};

inline SectorSpectrum analyze_sector(const RootOfUnity& root, int M, TwoSz two_sz, const SpectralOptions& opt = {}) {
  TraceOptions tr = opt.trace;
  tr.only_sector = two_sz;
  Sampler rng(opt.seed);
  std::vector<Matrix> ops;
  ops.push_back(aux_matrix(root, rng.annulus(), rng.annulus(), M, tr).block(two_sz));
  ops.push_back(aux_matrix(root, rng.annulus(), rng.annulus(), M, tr).block(two_sz));
  ops.push_back(transfer_matrix(root, rng.annulus(), M, tr).block(two_sz));
  if (opt.include_limits && root.even()) {
    ops.push_back(aux_limit(root, Sign::plus, rng.annulus(), M, tr).block(two_sz));
    ops.push_back(aux_limit(root, Sign::minus, rng.annulus(), M, tr).block(two_sz));
  }
  SectorSpectrum out;
  out.two_sz = two_sz;
  out.family = joint_eigenbasis_blocks(ops, two_sz, opt.seed);
  const auto builder = aux_block_builder(root, M, two_sz, opt.trace);
  out.polys = polynomial_eigenvalues(out.family, builder, M, opt.s_first, opt.sample_radius);
  add_s_sample(out.polys, out.family, builder, M, 2.0 * opt.s_first, opt.sample_radius);
  for (auto& p : out.polys) extract_and_classify_zeroes(p, root);
  return out;
}

}  // namespace sixvertex
