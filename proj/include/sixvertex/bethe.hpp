#pragma once

// Quadratic Wronskian system for the elementary symmetric functions e_k^+/-
// of the Bethe roots, its Newton solver, and the Bethe equations they imply.

#include "sixvertex/spectra.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace sixvertex {

struct BetheSolution {
  TwoSz two_sz = 0;
  std::vector<cplx> e_plus{1.0};   // e_0 .. e_{n+}
  std::vector<cplx> e_minus{1.0};  // e_0 .. e_{n-}
  std::vector<cplx> x_plus, x_minus;
  /// Bethe parameters, principal branch of log(u) / (i pi); u = e^{i pi k}.
  std::vector<cplx> k_plus, k_minus;
  std::vector<cplx> u_plus, u_minus;
  double residual_wronskian = 0.0;
  double residual_bae = 0.0;
  /// Index into the oracle list this solution coincides with, if any.
  std::optional<int> oracle_index;
  bool certified = false;
};

/// Number of Bethe roots above (plus) and below (minus) the equator.
inline int roots_above(int M, TwoSz two_sz) { return (M - two_sz) / 2; }
inline int roots_below(int M, TwoSz two_sz) { return (M + two_sz) / 2; }

/// e_0 .. e_n of x_1 q^{-1}, ..., x_n q^{-1}.
inline std::vector<cplx> elementary_symmetric(const std::vector<cplx>& zeroes, cplx q) {
  std::vector<cplx> e(zeroes.size() + 1, cplx{0.0});
  e[0] = 1.0;
  for (std::size_t i = 0; i < zeroes.size(); ++i) {
    const cplx y = zeroes[i] / q;
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += y * e[k - 1];
  }
  return e;
}

namespace detail {

inline void check_sector(int M, TwoSz two_sz) {
  if (M < 1 || (M - two_sz) % 2 != 0 || std::abs(two_sz) > M)
    throw DomainError("bethe: 2S^z = " + std::to_string(two_sz) + " is not a sector of M = " + std::to_string(M));
  if (two_sz % 2 == 0) throw DomainError("bethe: the Wronskian system needs half-odd S^z (M odd)");
}

/// c_{m,k} = (q^{S^z-m+2k} - q^{-S^z+m-2k}) / (q^{S^z} - q^{-S^z}).
inline cplx wronski_coefficient(const RootOfUnity& root, TwoSz two_sz, int m, int k) {
  const cplx den = root.half_power(two_sz) - root.half_power(-two_sz);
  if (std::abs(den) < 1e-14) throw DomainError("bethe: q^{S^z} = q^{-S^z}");
  const long e = two_sz - 2L * m + 4L * k;
  return (root.half_power(e) - root.half_power(-e)) / den;
}

inline cplx at(const std::vector<cplx>& e, int k) {
  return k >= 0 && k < static_cast<int>(e.size()) ? e[static_cast<std::size_t>(k)] : cplx{0.0};
}

/// F_m = sum_k c_{m,k} e_k^+ e_{m-k}^- - binom(M, m), m = 0..M.
inline Vector wronski_defects(const std::vector<cplx>& ep, const std::vector<cplx>& em, TwoSz two_sz, int M,
                              const RootOfUnity& root) {
  Vector f(M + 1);
  for (int m = 0; m <= M; ++m) {
    cplx acc = 0.0;
    for (int k = 0; k <= m; ++k) acc += wronski_coefficient(root, two_sz, m, k) * at(ep, k) * at(em, m - k);
    f(m) = acc - static_cast<double>(binomial(M, m));
  }
  return f;
}

}  // namespace detail

/// max_m |binom(M, m) - sum_k c_{m,k} e_k^+ e_{m-k}^-|.
inline double wronskian_residual(const std::vector<cplx>& e_plus, const std::vector<cplx>& e_minus, TwoSz two_sz,
                                 int M, const RootOfUnity& root) {
  detail::check_sector(M, two_sz);
  return detail::wronski_defects(e_plus, e_minus, two_sz, M, root).cwiseAbs().maxCoeff();
}

struct WronskianSolveOptions {
  int restarts = 200;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  int max_iterations = 100;
  double dedup = 1e-8;
  /// Extra Newton starts (e^+, e^-), e.g. from the spectra module; also used for matching.
  std::vector<std::pair<std::vector<cplx>, std::vector<cplx>>> oracle;
};

struct WronskianSolveResult {
  std::vector<BetheSolution> solutions;
  int attempts = 0;
  int converged = 0;
  std::size_t bound = 0;  // binom(M, n+)
  std::vector<std::string> diagnostics;
};

namespace detail {

inline Vector pack(const std::vector<cplx>& ep, const std::vector<cplx>& em) {
  Vector v(static_cast<Eigen::Index>(ep.size() + em.size() - 2));
  Eigen::Index i = 0;
  for (std::size_t k = 1; k < ep.size(); ++k) v(i++) = ep[k];
  for (std::size_t k = 1; k < em.size(); ++k) v(i++) = em[k];
  return v;
}

inline void unpack(const Vector& v, int np, int nm, std::vector<cplx>& ep, std::vector<cplx>& em) {
  ep.assign(static_cast<std::size_t>(np) + 1, cplx{1.0});
  em.assign(static_cast<std::size_t>(nm) + 1, cplx{1.0});
  for (int k = 1; k <= np; ++k) ep[static_cast<std::size_t>(k)] = v(k - 1);
  for (int k = 1; k <= nm; ++k) em[static_cast<std::size_t>(k)] = v(np + k - 1);
}

/// Newton on equations m = 1..M (m = 0 holds identically) with halving line search.
inline std::optional<Vector> newton(Vector v, int np, int nm, TwoSz two_sz, int M, const RootOfUnity& root,
                                    const WronskianSolveOptions& opt) {
  std::vector<cplx> ep, em;
  Matrix c(M + 1, M + 1);
  for (int m = 0; m <= M; ++m)
    for (int k = 0; k <= m; ++k) c(m, k) = wronski_coefficient(root, two_sz, m, k);
  auto defects = [&](const Vector& x) {
    unpack(x, np, nm, ep, em);
    return Vector(wronski_defects(ep, em, two_sz, M, root).tail(M));
  };
  Vector f = defects(v);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (f.cwiseAbs().maxCoeff() < opt.tol) return v;
    unpack(v, np, nm, ep, em);
    Matrix jac = Matrix::Zero(M, np + nm);
    for (int m = 1; m <= M; ++m) {
      for (int k = 1; k <= std::min(m, np); ++k) jac(m - 1, k - 1) += c(m, k) * at(em, m - k);
      for (int j = 1; j <= std::min(m, nm); ++j) jac(m - 1, np + j - 1) += c(m, m - j) * at(ep, m - j);
    }
    const Eigen::FullPivLU<Matrix> lu(jac);
    if (!lu.isInvertible()) return std::nullopt;
    const Vector step = lu.solve(f);
    const double f0 = f.squaredNorm();
    double alpha = 1.0;
    Vector trial, ft;
    for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
      trial = v - alpha * step;
      ft = defects(trial);
      if (ft.squaredNorm() < f0) break;
    }
    if (!(ft.squaredNorm() < f0)) return std::nullopt;
    v = trial;
    f = ft;
  }
  return f.cwiseAbs().maxCoeff() < opt.tol ? std::optional<Vector>(v) : std::nullopt;
}

inline bool canonical_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double ar = std::round(a(i).real() * 1e6), br = std::round(b(i).real() * 1e6);
    if (ar != br) return ar < br;
    const double ai = std::round(a(i).imag() * 1e6), bi = std::round(b(i).imag() * 1e6);
    if (ai != bi) return ai < bi;
  }
  return false;
}

}  // namespace detail

/// Seeded Newton restarts on the Wronskian system in sector two_sz; solutions
/// are deduplicated and returned in a canonical order.
inline WronskianSolveResult solve_wronskian_system(const RootOfUnity& root, int M, TwoSz two_sz,
                                                   const WronskianSolveOptions& opt = {}) {
  detail::check_sector(M, two_sz);
  const int np = roots_above(M, two_sz), nm = roots_below(M, two_sz);
  WronskianSolveResult out;
  out.bound = binomial(M, np);
  const double radius = static_cast<double>(binomial(M, (M + 1) / 2));

  std::vector<Vector> starts;
  for (const auto& [ep, em] : opt.oracle) {
    if (ep.size() != static_cast<std::size_t>(np) + 1 || em.size() != static_cast<std::size_t>(nm) + 1)
      throw DomainError("solve_wronskian_system: oracle start has the wrong length");
    starts.push_back(detail::pack(ep, em));
  }
  Sampler rng(opt.seed);
  for (int r = 0; r < opt.restarts; ++r) {
    Vector v(np + nm);
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v(i) = std::polar(radius * std::sqrt(rng.uniform(0.0, 1.0)), rng.uniform(0.0, 2.0 * std::numbers::pi));
    starts.push_back(v);
  }

  std::vector<Vector> found;
  for (const Vector& start : starts) {
    ++out.attempts;
    const auto sol = detail::newton(start, np, nm, two_sz, M, root, opt);
    if (!sol) continue;
    ++out.converged;
    const bool dup = std::any_of(found.begin(), found.end(), [&](const Vector& f) {
      return (f - *sol).cwiseAbs().maxCoeff() < opt.dedup;
    });
    if (!dup) found.push_back(*sol);
  }
  if (found.empty()) out.diagnostics.push_back("no restart converged");
  std::sort(found.begin(), found.end(), detail::canonical_less);

  for (const Vector& v : found) {
    BetheSolution s;
    s.two_sz = two_sz;
    detail::unpack(v, np, nm, s.e_plus, s.e_minus);
    s.residual_wronskian = wronskian_residual(s.e_plus, s.e_minus, two_sz, M, root);
    for (std::size_t i = 0; i < opt.oracle.size(); ++i)
      if ((detail::pack(opt.oracle[i].first, opt.oracle[i].second) - v).cwiseAbs().maxCoeff() < 1e-6)
        s.oracle_index = static_cast<int>(i);
    out.solutions.push_back(std::move(s));
  }
  if (out.solutions.size() > out.bound)
    out.diagnostics.push_back("more distinct solutions than binom(M, n+): " + std::to_string(out.solutions.size()));
  return out;
}

namespace detail {

/// Roots y of sum_k (-1)^k e_k Y^{n-k}.
inline std::vector<cplx> roots_from_elementary(const std::vector<cplx>& e) {
  const auto n = static_cast<Eigen::Index>(e.size()) - 1;
  if (n <= 0) return {};
  Vector coeffs(n + 1);
  for (Eigen::Index j = 0; j <= n; ++j) coeffs(j) = ((n - j) % 2 ? -1.0 : 1.0) * e[static_cast<std::size_t>(n - j)];
  return polynomial_roots(coeffs, 0.0);
}

/// max_i |u_i^M prod_j B_ij - (-1)^{n-1} prod_j B_ji|, B_ij = 1 - 2 cos(2 pi n / N) u_j + u_i u_j.
inline double bae_residual(const std::vector<cplx>& u, int M, const RootOfUnity& root) {
  const double delta = 2.0 * std::cos(2.0 * std::numbers::pi * root.n / root.N);
  const std::size_t n = u.size();
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx lhs = ipow(u[i], M), rhs = sign;
    for (std::size_t j = 0; j < n; ++j) {
      lhs *= 1.0 - delta * u[j] + u[i] * u[j];
      rhs *= 1.0 - delta * u[i] + u[j] * u[i];
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace detail

/// Recovers x^+/-, u = e^{i pi k} from (x q^{-1}) = (u q - 1) / (u - q), and the
/// Bethe-equation residual on both sides of the equator.
inline BetheSolution bethe_certify(BetheSolution sol, const RootOfUnity& root, int M) {
  const cplx q = root.q;
  auto side = [&](const std::vector<cplx>& e, std::vector<cplx>& x, std::vector<cplx>& u, std::vector<cplx>& k) {
    x.clear();
    u.clear();
    k.clear();
    for (const cplx& y : detail::roots_from_elementary(e)) {
      const cplx num = y * q - 1.0, den = y - q;
      if (std::abs(den) < 1e-12 || std::abs(num) < 1e-12)
        throw BranchError("bethe_certify: Moebius inversion singular at x = " + std::to_string((y * q).real()) + " + " +
                          std::to_string((y * q).imag()) + "i");
      x.push_back(y * q);
      u.push_back(num / den);
      k.push_back(std::log(u.back()) / cplx(0.0, std::numbers::pi));
    }
  };
  side(sol.e_plus, sol.x_plus, sol.u_plus, sol.k_plus);
  side(sol.e_minus, sol.x_minus, sol.u_minus, sol.k_minus);
  sol.residual_bae = std::max(detail::bae_residual(sol.u_plus, M, root), detail::bae_residual(sol.u_minus, M, root));
  sol.certified = true;
  return sol;
}

/// e^+/- of every joint eigenvector in a sector, from the extracted Q zeroes.
inline std::vector<BetheSolution> bethe_from_spectrum(const SectorSpectrum& spec, const RootOfUnity& root, int M) {
  std::vector<BetheSolution> out;
  for (const QPolynomial& p : spec.polys) {
    if (p.vanishing) continue;
    BetheSolution s;
    s.two_sz = spec.two_sz;
    s.e_plus = elementary_symmetric(p.zeroes_plus, root.q);
    s.e_minus = elementary_symmetric(p.zeroes_minus, root.q);
    s.x_plus = p.zeroes_plus;
    s.x_minus = p.zeroes_minus;
    s.residual_wronskian = wronskian_residual(s.e_plus, s.e_minus, spec.two_sz, M, root);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sixvertex
