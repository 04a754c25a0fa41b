#pragma once

// Root-of-unity arithmetic and the finite-dimensional representations of
// U_q(sl_2) and of the upper Borel subalgebra of U_q(affine sl_2).

#include "sixvertex/errors.hpp"
#include "sixvertex/numeric.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace sixvertex {

enum class Sign { plus, minus };

/// q = exp(2 pi i n / N) together with the fixed branch q_half = exp(pi i n / N).
///
/// `n` is stored signed so that inverse() can flip it; every other member is
/// derived from (N, n). Half-integer powers of q always go through q_half.
struct RootOfUnity {
  int N = 0;
  int n = 0;
  int N_prime = 0;
  cplx q;
  cplx q_half;

  /// q^k for integer k, reduced modulo N before evaluation.
  cplx power(long k) const { return half_power(2 * k); }

  /// q^{twice/2} = q_half^twice.
  cplx half_power(long twice) const {
    const long period = 2L * N;
    long phase = (static_cast<long>(n) * twice) % period;
    if (phase < 0) phase += period;
    return std::polar(1.0, std::numbers::pi * static_cast<double>(phase) / static_cast<double>(N));
  }

  /// q^{x S^z} for the sector with total spin two_sz / 2.
  cplx sz_power(int x, int two_sz) const { return half_power(static_cast<long>(x) * two_sz); }

  /// The root q^{-1} with branch q_half^{-1}.
  RootOfUnity inverse() const {
    RootOfUnity r = *this;
    r.n = -n;
    r.q = std::conj(q);
    r.q_half = std::conj(q_half);
    return r;
  }

  bool even() const { return N % 2 == 0; }
};

inline RootOfUnity make_root_of_unity(int N, int n) {
  if (N < 3) throw DomainError("root of unity: order N must be >= 3, got " + std::to_string(N));
  if (n < 1 || n >= N) throw DomainError("root of unity: need 1 <= n < N, got n=" + std::to_string(n));
  if (std::gcd(N, n) != 1)
    throw PrimitivityError("root of unity: gcd(" + std::to_string(N) + "," + std::to_string(n) +
                           ") = " + std::to_string(std::gcd(N, n)) + ", q is not primitive");
  RootOfUnity r;
  r.N = N;
  r.n = n;
  r.N_prime = (N % 2 == 0) ? N / 2 : N;
  r.q = r.power(1);
  r.q_half = r.half_power(1);
  return r;
}

/// [k]_q = (q^k - q^-k) / (q - q^-1).
inline cplx q_integer(const RootOfUnity& root, int k) {
  return (root.power(k) - root.power(-k)) / (root.q - 1.0 / root.q);
}

/// Spin n_spin/2 evaluation representation on C^{n_spin+1}, basis |0>..|n_spin>.
struct EvalRep {
  int n_spin = 0;
  Matrix e, f;
  Matrix k;           // q^h
  Matrix k_half;      // q^{h/2}
  Matrix k_half_inv;  // q^{-h/2}

  int dim() const { return n_spin + 1; }
};

inline EvalRep eval_rep(const RootOfUnity& root, int n_spin) {
  if (n_spin < 0) throw DomainError("eval_rep: n_spin must be >= 0");
  const int d = n_spin + 1;
  EvalRep rep;
  rep.n_spin = n_spin;
  rep.e = Matrix::Zero(d, d);
  rep.f = Matrix::Zero(d, d);
  rep.k = Matrix::Zero(d, d);
  rep.k_half = Matrix::Zero(d, d);
  rep.k_half_inv = Matrix::Zero(d, d);
  for (int m = 0; m < d; ++m) {
    // Kets |-1> and |n_spin+1> are the zero vector.
    if (m >= 1) rep.e(m - 1, m) = q_integer(root, n_spin - m + 1);
    if (m + 1 < d) rep.f(m + 1, m) = q_integer(root, m + 1);
    rep.k(m, m) = root.power(n_spin - 2 * m);
    rep.k_half(m, m) = root.half_power(n_spin - 2 * m);
    rep.k_half_inv(m, m) = root.half_power(-(n_spin - 2 * m));
  }
  return rep;
}

/// N'-dimensional representation pi^{+/-}(z; r, s) of the upper Borel subalgebra.
///
/// For Sign::minus the generator roles of index 0 and 1 are exchanged.
struct BorelRep {
  Sign sign = Sign::plus;
  cplx z, r, s;
  Matrix e0, e1;
  Matrix k0, k1;            // q^{h_0}, q^{h_1}
  Matrix k0_half, k1_half;  // q^{h_0/2}, q^{h_1/2}

  Eigen::Index dim() const { return e0.rows(); }
};

inline BorelRep borel_rep(const RootOfUnity& root, Sign sign, cplx z, cplx r, cplx s) {
  const int d = root.N_prime;
  const cplx q = root.q;
  const cplx r_half = std::sqrt(r);  // principal branch
  const cplx denom = (q - 1.0 / q) * (q - 1.0 / q);

  Matrix e0 = Matrix::Zero(d, d), e1 = Matrix::Zero(d, d);
  Matrix k1 = Matrix::Zero(d, d), k1_half = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    if (j + 1 < d) e0(j + 1, j) = z;
    if (j >= 1) e1(j - 1, j) = (s + 1.0 - root.power(2 * j) - s * root.power(-2 * j)) / denom;
    k1(j, j) = r * root.power(-2 * j);
    k1_half(j, j) = r_half * root.power(-j);
  }
  // On pi^+ q^{-h_0} acts as q^{h_1}.
  Matrix k0 = k1.inverse();
  Matrix k0_half = k1_half.inverse();

  BorelRep rep;
  rep.sign = sign;
  rep.z = z;
  rep.r = r;
  rep.s = s;
  if (sign == Sign::plus) {
    rep.e0 = std::move(e0);
    rep.e1 = std::move(e1);
    rep.k0 = std::move(k0);
    rep.k1 = std::move(k1);
    rep.k0_half = std::move(k0_half);
    rep.k1_half = std::move(k1_half);
  } else {
    rep.e0 = std::move(e1);
    rep.e1 = std::move(e0);
    rep.k0 = std::move(k1);
    rep.k1 = std::move(k0);
    rep.k0_half = std::move(k1_half);
    rep.k1_half = std::move(k0_half);
  }
  return rep;
}

// ---- algebra relation residuals -------------------------------------------

/// Max residual of the U_q(sl_2) relations in an evaluation representation.
inline double eval_rep_relation_residual(const RootOfUnity& root, const EvalRep& rep) {
  const cplx q = root.q;
  const Matrix k_inv = rep.k.inverse();
  double res = 0.0;
  res = std::max(res, relative_residual(rep.e * rep.f - rep.f * rep.e, (rep.k - k_inv) / (q - 1.0 / q)));
  res = std::max(res, relative_residual(rep.k * rep.e * k_inv, q * q * rep.e));
  res = std::max(res, relative_residual(rep.k * rep.f * k_inv, rep.f / (q * q)));
  res = std::max(res, relative_residual(rep.k_half * rep.k_half, rep.k));
  res = std::max(res, relative_residual(rep.k_half * rep.k_half_inv, Matrix::Identity(rep.dim(), rep.dim())));
  return res;
}

/// x_i^3 x_j - [3] x_i^2 x_j x_i + [3] x_i x_j x_i^2 - x_j x_i^3.
inline Matrix serre_combination(const RootOfUnity& root, const Matrix& xi, const Matrix& xj) {
  const cplx q3 = q_integer(root, 3);
  return xi * xi * xi * xj - q3 * xi * xi * xj * xi + q3 * xi * xj * xi * xi - xj * xi * xi * xi;
}

/// Serre relations for e and f of the affine algebra pulled back along ev_z.
inline double eval_serre_residual(const RootOfUnity& root, const EvalRep& rep, cplx z) {
  const Matrix e0 = z * rep.f, e1 = rep.e;
  const Matrix f0 = rep.e / z, f1 = rep.f;
  const double scale = 1.0 + std::pow(rep.e.norm() + rep.f.norm() * std::max(1.0, std::abs(z)), 4);
  double res = 0.0;
  for (const auto& m : {serre_combination(root, e0, e1), serre_combination(root, e1, e0),
                        serre_combination(root, f0, f1), serre_combination(root, f1, f0)})
    res = std::max(res, m.norm() / scale);
  return res;
}

/// Borel relations q^{h_i} e_j q^{-h_i} = q^{A_ij} e_j, Cartan commutativity and Serre.
inline double borel_relation_residual(const RootOfUnity& root, const BorelRep& rep) {
  const Matrix* e[2] = {&rep.e0, &rep.e1};
  const Matrix* k[2] = {&rep.k0, &rep.k1};
  double res = relative_residual(rep.k0 * rep.k1, rep.k1 * rep.k0);
  res = std::max(res, relative_residual(rep.k0_half * rep.k0_half, rep.k0));
  res = std::max(res, relative_residual(rep.k1_half * rep.k1_half, rep.k1));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const int cartan = (i == j) ? 2 : -2;
      res = std::max(res, relative_residual(*k[i] * *e[j] * k[i]->inverse(), root.power(cartan) * *e[j]));
    }
  const double scale = 1.0 + std::pow(rep.e0.norm() + rep.e1.norm(), 4);
  res = std::max(res, serre_combination(root, rep.e0, rep.e1).norm() / scale);
  res = std::max(res, serre_combination(root, rep.e1, rep.e0).norm() / scale);
  return res;
}

}  // namespace sixvertex
