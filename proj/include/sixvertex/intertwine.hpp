#pragma once

// Intertwiners S for pi^+(z;s) (x) pi^+(1;t) at N = 4 and N = 6, their checks,
// and a numeric nullspace search at other orders.

#include "sixvertex/identities.hpp"

#include <Eigen/SVD>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace sixvertex {

/// printed: the entries exactly as tabulated. amended: entries corrected to the
/// nullspace of the defining equation.
enum class Transcription { printed, amended };

/// Reading of the stray symbol w in the N = 6 block V3.
enum class WSubstitution { one, z };

struct IntertwinerMatrix {
  int N = 0;
  cplx z, s, t;
  std::optional<cplx> lambda;
  Transcription transcription = Transcription::amended;
  WSubstitution w_subst = WSubstitution::z;
  Matrix matrix;  // index a * N' + b for |a, b>
  /// Basis indices of V1, V2, V3 (N = 6 only).
  std::vector<std::array<int, 3>> blocks;
};

namespace detail {

inline void require_nonzero(cplx d, const char* what) {
  if (std::abs(d) < 1e-12) throw PoleError(std::string("build_intertwiner: pole at ") + what);
}

inline IntertwinerMatrix build_s4(cplx z, cplx s, cplx t, cplx lam, Transcription tr) {
  IntertwinerMatrix S;
  S.matrix = Matrix::Zero(4, 4);
  S.matrix(0, 0) = 1.0;
  S.matrix(3, 3) = lam;
  if (tr == Transcription::printed) {
    require_nonzero(1.0 + z, "1 + z = 0");
    require_nonzero(1.0 + s, "1 + s = 0");
    const cplx d = (1.0 + s) * (1.0 + z);
    S.matrix(1, 1) = (1.0 + t - (1.0 + s) * lam * z) / d;
    S.matrix(1, 2) = (1.0 + lam) / (1.0 + z);
    S.matrix(2, 1) = (1.0 + lam) / (1.0 + z) * z;
    S.matrix(2, 2) = ((1.0 + s) * z - (1.0 + t) * lam) / d;
  } else {
    const cplx d = (1.0 + s) * z + (1.0 + t);
    require_nonzero(d, "(1 + s) z + 1 + t = 0");
    S.matrix(1, 1) = (1.0 + t - (1.0 + s) * lam * z) / d;
    S.matrix(1, 2) = (1.0 + lam) * (1.0 + s) / d;
    S.matrix(2, 1) = z * (1.0 + lam) * (1.0 + t) / d;
    S.matrix(2, 2) = ((1.0 + s) * z - (1.0 + t) * lam) / d;
  }
  return S;
}

inline IntertwinerMatrix build_s6(const RootOfUnity& root, cplx z, cplx s, cplx t, Transcription tr,
                                  WSubstitution ws) {
  const cplx q = root.q, qi = 1.0 / root.q;
  const cplx d = (s * z + q) * (s * z + qi);
  require_nonzero(s * z + q, "s z + q = 0");
  require_nonzero(s * z + qi, "s z + q^-1 = 0");
  const cplx w = ws == WSubstitution::one ? cplx{1.0} : z;

  using Block = std::array<std::array<cplx, 3>, 3>;
  Block v1{{{1.0 * d, 0.0, 0.0},
            {0.0, (1.0 - z) * (z * qi + t), (q + s) * (t + z * qi)},
            {0.0, z * (z * q + t) * (t + q), (s * z - t) * (z + t * q)}}};
  if (tr == Transcription::amended) v1[2][1] = z * (z * qi + t) * (t + q);
  const Block v2{{{(1.0 - z) * (s * z * qi + 1.0), (s * q + 1.0) * (1.0 + s * z * qi), 0.0},
                  {z * (s * z + q) * (t + qi), (s * z - t) * (s * z + q), 0.0},
                  {0.0, 0.0, (z * q + t) * (z * qi + t)}}};
  const Block v3{{{(1.0 - z) * (1.0 + z * q), q * (w - 1.0) * (s * q + 1.0), (s + q) * (s + qi)},
                  {(t + q) * (1.0 - z) * z, w * (1.0 + s) * (1.0 + t) - t * qi - w * w * s * q, q * (s + q) * (s * z - t)},
                  {(t + q) * (t + qi) * z * z, (t + qi) * (s * z - t) * z, (s * z - t) * (s * z + t * qi)}}};

  IntertwinerMatrix S;
  S.matrix = Matrix::Zero(9, 9);
  S.blocks = {{0, 5, 7}, {1, 3, 8}, {2, 4, 6}};
  const std::array<const Block*, 3> vs{&v1, &v2, &v3};
  for (int b = 0; b < 3; ++b)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) S.matrix(S.blocks[b][i], S.blocks[b][j]) = (*vs[b])[i][j] / d;
  return S;
}

}  // namespace detail

/// S(z; s, t) with w = 1. lambda is required for N = 4 and rejected for N = 6.
inline IntertwinerMatrix build_intertwiner(int N, cplx z, cplx s, cplx t, std::optional<cplx> lambda,
                                           Transcription tr = Transcription::amended,
                                           WSubstitution ws = WSubstitution::z) {
  IntertwinerMatrix S;
  if (N == 4) {
    if (!lambda) throw ParameterError("build_intertwiner: N = 4 needs lambda");
    S = detail::build_s4(z, s, t, *lambda, tr);
  } else if (N == 6) {
    if (lambda) throw ParameterError("build_intertwiner: N = 6 takes no lambda");
    S = detail::build_s6(make_root_of_unity(6, 1), z, s, t, tr, ws);
  } else {
    throw DomainError("build_intertwiner: tabulated only for N = 4 and N = 6");
  }
  S.N = N;
  S.z = z;
  S.s = s;
  S.t = t;
  S.lambda = lambda;
  S.transcription = tr;
  S.w_subst = ws;
  return S;
}

enum class Generator { e0, e1, k0, k1 };

inline const std::vector<Generator>& all_generators() {
  static const std::vector<Generator> g = {Generator::e0, Generator::e1, Generator::k0, Generator::k1};
  return g;
}

namespace detail {

/// (pi (x) pi') Delta(x) and (pi (x) pi') Delta^op(x).
inline std::pair<Matrix, Matrix> coproduct_pair(const BorelRep& a, const BorelRep& b, Generator g) {
  const Matrix ia = Matrix::Identity(a.dim(), a.dim()), ib = Matrix::Identity(b.dim(), b.dim());
  switch (g) {
    case Generator::e0:
      return {kron(a.e0, ib) + kron(a.k0, b.e0), kron(ia, b.e0) + kron(a.e0, b.k0)};
    case Generator::e1:
      return {kron(a.e1, ib) + kron(a.k1, b.e1), kron(ia, b.e1) + kron(a.e1, b.k1)};
    case Generator::k0:
      return {kron(a.k0, b.k0), kron(a.k0, b.k0)};
    case Generator::k1:
      return {kron(a.k1, b.k1), kron(a.k1, b.k1)};
  }
  return {};
}

}  // namespace detail

/// max over generators of the relative residual of S Delta(x) = Delta^op(x) S,
/// on pi^+(z;1,s) (x) pi^+(1;1,t).
inline double check_intertwining(const Matrix& S, const RootOfUnity& root, cplx z, cplx s, cplx t,
                                 const std::vector<Generator>& gens = all_generators()) {
  const BorelRep a = borel_rep(root, Sign::plus, z, 1.0, s);
  const BorelRep b = borel_rep(root, Sign::plus, 1.0, 1.0, t);
  if (S.rows() != a.dim() * b.dim()) throw DomainError("check_intertwining: size mismatch");
  double worst = 0.0;
  for (Generator g : gens) {
    const auto [x, y] = detail::coproduct_pair(a, b, g);
    worst = std::max(worst, relative_residual(S * x, y * S));
  }
  return worst;
}

inline double check_intertwining(const IntertwinerMatrix& S, const RootOfUnity& root,
                                 const std::vector<Generator>& gens = all_generators()) {
  return check_intertwining(S.matrix, root, S.z, S.s, S.t, gens);
}

/// lambda at which the N = 4 family satisfies the Yang-Baxter relation, ratio x = z / w.
inline cplx ybe_lambda(cplx x, cplx s, cplx t) { return (t + x) / (s * x + 1.0); }

/// Residual of S12 L13(z;s) L23(w;t) = L23(w;t) L13(z;s) S12 on C^{N'} (x) C^{N'} (x) C^2.
inline double ybe_residual(const Matrix& S, const RootOfUnity& root, cplx z, cplx w, cplx s, cplx t) {
  const Matrix l1 = build_L(root, Sign::plus, z, 1.0, s).to_dense();
  const Matrix l2 = build_L(root, Sign::plus, w, 1.0, t).to_dense();
  const int d = root.N_prime;
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d * 2;
  auto idx = [d](int i, int j, int a) { return static_cast<Eigen::Index>((i * d + j) * 2 + a); };
  Matrix l13 = Matrix::Zero(dim, dim), l23 = Matrix::Zero(dim, dim);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int a = 0; a < 2; ++a)
        for (int k = 0; k < d; ++k)
          for (int b = 0; b < 2; ++b) {
            l13(idx(i, j, a), idx(k, j, b)) = l1(2 * i + a, 2 * k + b);
            l23(idx(j, i, a), idx(j, k, b)) = l2(2 * i + a, 2 * k + b);
          }
  const Matrix s12 = kron(S, Matrix::Identity(2, 2));
  return relative_residual(s12 * l13 * l23, l23 * l13 * s12);
}

/// YBE at (z, w) with S built at ratio z / w, then [Q(z;s), Q(w;t)] on M sites.
inline IdentityReport check_ybe_and_qcomm(int N, cplx z, cplx w, cplx s, cplx t, int M,
                                          Transcription tr = Transcription::amended, double tol = 1e-10) {
  const RootOfUnity root = make_root_of_unity(N, 1);
  const cplx x = z / w;
  const IntertwinerMatrix S =
      build_intertwiner(N, x, s, t, N == 4 ? std::optional<cplx>(ybe_lambda(x, s, t)) : std::nullopt, tr);
  CheckOptions opt;
  opt.tol = tol;
  IdentityReport rep = detail::make_report("YBE", root, M, opt);
  const std::map<std::string, cplx> params = {{"z", z}, {"w", w}, {"s", s}, {"t", t}};
  rep.add({params, ybe_residual(S.matrix, root, z, w, s, t), "YBE"});
  const SectorOperator a = aux_matrix(root, z, s, M), b = aux_matrix(root, w, t, M);
  std::string where;
  rep.add({params, detail::sector_residual(a * b, b * a, std::nullopt, where), "QCOMM " + where});
  rep.finish();
  return rep;
}

struct NullspaceResult {
  std::vector<Matrix> basis;  // unit Frobenius norm
  Eigen::VectorXd singular_values;
  double threshold = 0.0;
  /// Smallest singular value above the threshold divided by the largest below it.
  double gap = 0.0;
  std::size_t dimension() const { return basis.size(); }
};

/// Numeric nullspace of the defining equation over all generators, at w = 1.
/// The Cartan equations are diagonal and are solved first: only entries joining
/// equal weights are kept as unknowns, and the e_0, e_1 equations act on those.
inline NullspaceResult solve_intertwiner_numeric(const RootOfUnity& root, cplx z, cplx s, cplx t,
                                                 double rel_threshold = 1e-9) {
  const int d = root.N_prime;
  if (d * d > 64) throw ResourceGuardError("solve_intertwiner_numeric: N'^2 > 64");
  const BorelRep a = borel_rep(root, Sign::plus, z, 1.0, s);
  const BorelRep b = borel_rep(root, Sign::plus, 1.0, 1.0, t);
  const Eigen::Index D = static_cast<Eigen::Index>(d) * d;

  const Matrix k0 = kron(a.k0, b.k0), k1 = kron(a.k1, b.k1);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> unknowns;
  for (Eigen::Index j = 0; j < D; ++j)
    for (Eigen::Index i = 0; i < D; ++i)
      if (std::abs(k0(i, i) - k0(j, j)) < 1e-12 && std::abs(k1(i, i) - k1(j, j)) < 1e-12) unknowns.emplace_back(i, j);
  const auto U = static_cast<Eigen::Index>(unknowns.size());

  // Row (g, r, c) of S X - Y S, linear in the kept entries S(i, j).
  Matrix sys = Matrix::Zero(2 * D * D, U);
  for (int g = 0; g < 2; ++g) {
    const auto [x, y] = detail::coproduct_pair(a, b, g == 0 ? Generator::e0 : Generator::e1);
    for (Eigen::Index u = 0; u < U; ++u) {
      const auto [i, j] = unknowns[static_cast<std::size_t>(u)];
      for (Eigen::Index c = 0; c < D; ++c) sys(g * D * D + i * D + c, u) += x(j, c);
      for (Eigen::Index r = 0; r < D; ++r) sys(g * D * D + r * D + j, u) -= y(r, i);
    }
  }
  Eigen::BDCSVD<Matrix> svd(sys, Eigen::ComputeFullV);
  NullspaceResult out;
  out.singular_values = svd.singularValues();
  const Eigen::VectorXd& sv = out.singular_values;
  out.threshold = rel_threshold * std::max(sv.size() ? sv(0) : 0.0, 1.0);
  double below = 0.0, above = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < U; ++i) {
    const double value = i < sv.size() ? sv(i) : 0.0;
    if (value < out.threshold) {
      below = std::max(below, value);
      Matrix m = Matrix::Zero(D, D);
      for (Eigen::Index u = 0; u < U; ++u) {
        const auto [r, c] = unknowns[static_cast<std::size_t>(u)];
        m(r, c) = svd.matrixV()(u, i);
      }
      out.basis.push_back(m / m.norm());
    } else {
      above = std::min(above, value);
    }
  }
  out.gap = out.basis.empty() ? 0.0 : above / std::max(below, 1e-300);
  return out;
}

/// |<S, P S>| / |S|^2 with P the projector onto the nullspace span.
inline double nullspace_overlap(const NullspaceResult& ns, const Matrix& S) {
  if (ns.basis.empty()) return 0.0;
  Matrix B(S.size(), static_cast<Eigen::Index>(ns.basis.size()));
  for (std::size_t i = 0; i < ns.basis.size(); ++i)
    B.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(ns.basis[i].data(), S.size());
  const Eigen::HouseholderQR<Matrix> qr(B);
  const Matrix Q = qr.householderQ() * Matrix::Identity(B.rows(), B.cols());
  const Vector v = Eigen::Map<const Vector>(S.data(), S.size());
  return (Q.adjoint() * v).squaredNorm() / v.squaredNorm();
}

/// Deviation from S(lambda) = S(0) + lambda S' over three points (N = 4).
inline double lambda_linearity_residual(cplx z, cplx s, cplx t, cplx l1, cplx l2,
                                        Transcription tr = Transcription::amended) {
  const Matrix s0 = build_intertwiner(4, z, s, t, cplx{0.0}, tr).matrix;
  const Matrix sa = build_intertwiner(4, z, s, t, l1, tr).matrix;
  const Matrix sb = build_intertwiner(4, z, s, t, l2, tr).matrix;
  return relative_residual((sb - s0) * l1, (sa - s0) * l2);
}

struct WResolution {
  double residual_one = 0.0, residual_z = 0.0;
  WSubstitution adopted = WSubstitution::z;
  bool resolved = false;
};

/// Evaluates both readings of w on the N = 6 matrix and adopts the one whose residual falls below tol.
inline WResolution resolve_w_substitution(cplx z, cplx s, cplx t, Transcription tr, double tol = 1e-10) {
  const RootOfUnity root = make_root_of_unity(6, 1);
  WResolution r;
  r.residual_one = check_intertwining(build_intertwiner(6, z, s, t, std::nullopt, tr, WSubstitution::one), root);
  r.residual_z = check_intertwining(build_intertwiner(6, z, s, t, std::nullopt, tr, WSubstitution::z), root);
  r.adopted = r.residual_z <= r.residual_one ? WSubstitution::z : WSubstitution::one;
  r.resolved = std::min(r.residual_one, r.residual_z) < tol;
  return r;
}

}  // namespace sixvertex
