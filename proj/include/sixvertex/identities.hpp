#pragma once

// Functional identities of the fusion hierarchy and the auxiliary matrices,
// certified as relative Frobenius residuals at seeded sample points.

#include "sixvertex/spectra.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sixvertex {

enum class IdentityId { FUS, TCOMM, QSYM, QCOMM, RQ, QCT, TTRANS, TQ0, TQPM, FUNC, SUMQP, COEFF, ALG, FACTOR };

inline const std::vector<IdentityId>& all_identities() {
  static const std::vector<IdentityId> ids = {IdentityId::FUS,    IdentityId::TCOMM, IdentityId::QSYM,  IdentityId::QCOMM,
                                              IdentityId::RQ,     IdentityId::QCT,   IdentityId::TTRANS, IdentityId::TQ0,
                                              IdentityId::TQPM,   IdentityId::FUNC,  IdentityId::SUMQP, IdentityId::COEFF,
                                              IdentityId::ALG,    IdentityId::FACTOR};
  return ids;
}

inline std::string to_string(IdentityId id) {
  switch (id) {
    case IdentityId::FUS: return "FUS";
    case IdentityId::TCOMM: return "TCOMM";
    case IdentityId::QSYM: return "QSYM";
    case IdentityId::QCOMM: return "QCOMM";
    case IdentityId::RQ: return "RQ";
    case IdentityId::QCT: return "QCT";
    case IdentityId::TTRANS: return "TTRANS";
    case IdentityId::TQ0: return "TQ0";
    case IdentityId::TQPM: return "TQPM";
    case IdentityId::FUNC: return "FUNC";
    case IdentityId::SUMQP: return "SUMQP";
    case IdentityId::COEFF: return "COEFF";
    case IdentityId::ALG: return "ALG";
    case IdentityId::FACTOR: return "FACTOR";
  }
  return "?";
}

inline std::optional<IdentityId> identity_from_string(const std::string& name) {
  for (IdentityId id : all_identities())
    if (to_string(id) == name) return id;
  return std::nullopt;
}

struct SampleRecord {
  std::map<std::string, cplx> params;
  double residual = 0.0;
  std::string witness;
};

struct IdentityReport {
  std::string identity;
  int N = 0, n = 0, M = 0;
  std::optional<TwoSz> sector;
  std::vector<SampleRecord> samples;
  double max_residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string witness;
  std::string note;

  void add(SampleRecord rec) {
    if (rec.residual > max_residual || samples.empty()) {
      max_residual = std::max(max_residual, rec.residual);
      witness = "sample " + std::to_string(samples.size()) + (rec.witness.empty() ? "" : ", " + rec.witness);
    }
    samples.push_back(std::move(rec));
  }

  void finish() { pass = skipped || max_residual < tol; }
};

struct CheckOptions {
  int samples = 5;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::optional<TwoSz> sector;
  TraceOptions trace;
};

namespace detail {

/// Relative Frobenius residual of the whole operator (or of one sector when
/// `sector` is set); `where` receives the sector with the largest deviation.
inline double sector_residual(const SectorOperator& lhs, const SectorOperator& rhs, std::optional<TwoSz> sector,
                              std::string& where) {
  double diff2 = 0.0, lhs2 = 0.0, rhs2 = 0.0, worst = -1.0;
  where.clear();
  for (const auto& [k, blk] : lhs.blocks()) {
    if (sector && *sector != k) continue;
    const Matrix& other = rhs.block(k);
    const double d = (blk - other).squaredNorm();
    diff2 += d;
    lhs2 += blk.squaredNorm();
    rhs2 += other.squaredNorm();
    if (d > worst) worst = d, where = "2Sz=" + std::to_string(k);
  }
  return std::sqrt(diff2) / (1.0 + std::sqrt(lhs2) + std::sqrt(rhs2));
}

inline SampleRecord compare(const SectorOperator& lhs, const SectorOperator& rhs, std::optional<TwoSz> sector,
                            std::map<std::string, cplx> params) {
  SampleRecord rec;
  rec.params = std::move(params);
  rec.residual = sector_residual(lhs, rhs, sector, rec.witness);
  return rec;
}

inline std::vector<cplx> special_points(const RootOfUnity& root) {
  return {0.0, 1.0, root.power(2), root.power(-2), root.power(1), root.power(-1), -1.0};
}

inline IdentityReport make_report(const std::string& name, const RootOfUnity& root, int M, const CheckOptions& opt) {
  IdentityReport rep;
  rep.identity = name;
  rep.N = root.N;
  rep.n = root.n;
  rep.M = M;
  rep.sector = opt.sector;
  rep.tol = opt.tol;
  return rep;
}

/// Coefficient operators O_0..O_deg of a polynomial operator function, by a
/// discrete Fourier transform over the unit circle.
inline std::vector<SectorOperator> operator_coefficients(const std::function<SectorOperator(cplx)>& f, int deg) {
  const int count = deg + 1;
  std::vector<SectorOperator> values;
  std::vector<cplx> nodes;
  for (int j = 0; j < count; ++j) {
    nodes.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / count));
    values.push_back(f(nodes.back()));
  }
  std::vector<SectorOperator> coeffs;
  for (int m = 0; m < count; ++m) {
    SectorOperator acc = cplx(0.0) * values.front();
    for (int j = 0; j < count; ++j) acc += (std::conj(ipow(nodes[j], m)) / static_cast<double>(count)) * values[j];
    coeffs.push_back(std::move(acc));
  }
  return coeffs;
}

}  // namespace detail

/// Whether the Wronskian-type identities apply (N even, M odd).
inline bool even_order_odd_length(const RootOfUnity& root, int M) { return root.even() && M % 2 == 1; }

inline IdentityReport check_identity(IdentityId id, const RootOfUnity& root, int M, const CheckOptions& opt = {}) {
  IdentityReport rep = detail::make_report(to_string(id), root, M, opt);
  Sampler rng(opt.seed * 1000003u + static_cast<std::uint64_t>(id) * 7919u + static_cast<std::uint64_t>(M));
  const auto avoid = detail::special_points(root);
  const auto& tr = opt.trace;
  const cplx q = root.q;
  const int Np = root.N_prime;
  auto sz_scale = [](const SectorOperator& op, auto&& f) { return op.scaled_by_sz(f); };

  switch (id) {
    case IdentityId::FUS: {
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus_avoiding(avoid);
        const SectorOperator t = transfer_matrix(root, z, M, tr);
        for (int n = 1; n <= 3; ++n) {
          const SectorOperator lhs = fusion_matrix(root, n, z, M, tr) * t;
          const SectorOperator rhs = ipow(z * q * q - 1.0, M) * fusion_matrix(root, n + 1, z / (q * q), M, tr) +
                                     ipow(z - 1.0, M) * fusion_matrix(root, n - 1, z * q * q, M, tr);
          rep.add(detail::compare(lhs, rhs, opt.sector, {{"z", z}, {"n", n}}));
        }
      }
      break;
    }
    case IdentityId::TCOMM: {
      const std::array<std::pair<int, int>, 4> pairs = {{{1, 2}, {2, 2}, {2, 3}, {3, 3}}};
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus_avoiding(avoid), w = rng.annulus_avoiding(avoid);
        for (auto [m, n] : pairs) {
          const SectorOperator a = fusion_matrix(root, m, z, M, tr), b = fusion_matrix(root, n, w, M, tr);
          rep.add(detail::compare(a * b, b * a, opt.sector, {{"z", z}, {"w", w}, {"m", m}, {"n", n}}));
        }
      }
      break;
    }
    case IdentityId::QSYM: {
      const SymmetryOps sym = symmetry_ops(M);
      const Matrix sz = sym.sz.to_dense(), parity = sym.parity.to_dense();
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus_avoiding(avoid), w = rng.annulus_avoiding(avoid), s = rng.annulus(),
                   r = rng.annulus();
        const SectorOperator qo = aux_matrix(root, z, r, s, Sign::plus, M, false, tr);
        for (int n = 2; n <= 3; ++n) {
          const SectorOperator t = fusion_matrix(root, n, w, M, tr);
          rep.add(detail::compare(qo * t, t * qo, opt.sector, {{"z", z}, {"w", w}, {"r", r}, {"s", s}, {"n", n}}));
        }
        if (M <= 10) {
          const Matrix dense = trace_monodromy_dense(build_L(root, Sign::plus, z, r, s), M, tr);
          SampleRecord rec;
          rec.params = {{"z", z}, {"r", r}, {"s", s}};
          rec.residual = std::max(relative_residual(dense * sz, sz * dense), relative_residual(dense * parity, parity * dense));
          rec.witness = "[Q,S^z], [Q,parity] on the full space";
          rep.add(rec);
        }
      }
      break;
    }
    case IdentityId::QCOMM: {
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus(), w = rng.annulus(), s = rng.annulus(), t = rng.annulus();
        const SectorOperator a = aux_matrix(root, z, s, M, tr), b = aux_matrix(root, w, t, M, tr);
        rep.add(detail::compare(a * b, b * a, opt.sector, {{"z", z}, {"w", w}, {"s", s}, {"t", t}}));
      }
      rep.note = "numerical evidence, not proof";
      break;
    }
    case IdentityId::RQ: {
      const RootOfUnity inv = root.inverse();
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus_avoiding(avoid), s = rng.annulus();
        const SectorOperator lhs = aux_matrix(root, z, s, M, tr).spin_reversed();
        const SectorOperator first =
            sz_scale(aux_matrix(root, 1.0 / (z * q * q * s), s, M, tr).transpose(), [&](TwoSz k) {
              return ipow(-z, M) * root.power(M + k) * ipow(s, (M - k) / 2);
            });
        const SectorOperator second = aux_matrix(inv, z * q * q * s, 1.0 / s, M, tr).transpose();
        const SectorOperator third =
            sz_scale(aux_matrix(root, z * s, 1.0 / s, M, tr), [&](TwoSz k) { return root.power(static_cast<long>(Np + 1) * k); });
        const std::map<std::string, cplx> params = {{"z", z}, {"s", s}};
        for (const auto* rhs : {&first, &second, &third}) rep.add(detail::compare(lhs, *rhs, opt.sector, params));
      }
      rep.note = "last equality with prefactor q^{2(N'+1)S^z}";
      break;
    }
    case IdentityId::QCT: {
      const RootOfUnity inv = root.inverse();
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus_avoiding(avoid), s = rng.annulus();
        const SectorOperator lhs = aux_matrix(root, z, s, M, tr).adjoint();
        const SectorOperator first = aux_matrix(inv, std::conj(z), std::conj(s), M, tr).transpose();
        const SectorOperator second = sz_scale(aux_matrix(root, std::conj(z) / (q * q), std::conj(s), M, tr),
                                               [&](TwoSz k) { return root.power(static_cast<long>(Np + 1) * k); });
        rep.add(detail::compare(lhs, first, opt.sector, {{"z", z}, {"s", s}}));
        rep.add(detail::compare(lhs, second, opt.sector, {{"z", z}, {"s", s}}));
      }
      rep.note = "last equality with prefactor q^{2(N'+1)S^z}";
      break;
    }
    case IdentityId::TTRANS: {
      const RootOfUnity inv = root.inverse();
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus_avoiding(avoid);
        rep.add(detail::compare(transfer_matrix(root, z, M, tr), transfer_matrix(inv, z * q * q, M, tr).transpose(),
                                opt.sector, {{"z", z}}));
      }
      break;
    }
    case IdentityId::TQ0: {
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus_avoiding(avoid), s = rng.annulus();
        const SectorOperator lhs = aux_matrix(root, z, s, M, tr) * transfer_matrix(root, z, M, tr);
        const SectorOperator up = sz_scale(aux_matrix(root, z * q * q, s / (q * q), M, tr),
                                           [&](TwoSz k) { return ipow(z - 1.0, M) * root.half_power(k); });
        const SectorOperator down = sz_scale(aux_matrix(root, z / (q * q), s * q * q, M, tr),
                                             [&](TwoSz k) { return ipow(z * q * q - 1.0, M) * root.half_power(-k); });
        rep.add(detail::compare(lhs, up + down, opt.sector, {{"z", z}, {"s", s}}));
      }
      break;
    }
    case IdentityId::TQPM: {
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus_avoiding(avoid);
        const SectorOperator t = transfer_matrix(root, z, M, tr);
        for (Sign sign : {Sign::plus, Sign::minus}) {
          const int pm = sign == Sign::plus ? 1 : -1;
          const SectorOperator lhs = aux_limit(root, sign, z, M, tr) * t;
          const SectorOperator up = sz_scale(aux_limit(root, sign, z * q * q, M, tr),
                                             [&](TwoSz k) { return ipow(z - 1.0, M) * root.half_power(pm * k); });
          const SectorOperator down = sz_scale(aux_limit(root, sign, z / (q * q), M, tr),
                                               [&](TwoSz k) { return ipow(z * q * q - 1.0, M) * root.half_power(-pm * k); });
          rep.add(detail::compare(lhs, up + down, opt.sector, {{"z", z}, {"sign", cplx(pm)}}));
        }
      }
      break;
    }
    case IdentityId::FUNC: {
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus_avoiding(avoid), s = rng.annulus(), t = rng.annulus();
        const cplx zz = z * q * q / s;
        const SectorOperator lhs = aux_matrix(root, zz, s, M, tr) * aux_matrix(root, z, t, M, tr);
        const SectorOperator fused = Np - 1 == 1 ? quantum_determinant(root, z * q * q, M)
                                                 : fusion_matrix(root, Np - 1, z * q * q, M, tr);
        const SectorOperator bracket =
            SectorOperator::identity(M, ipow(z * q * q - 1.0, M)) +
            sz_scale(fused, [&](TwoSz k) { return root.half_power(static_cast<long>(Np) * (2L * M - k)); });
        const SectorOperator rhs = aux_matrix(root, zz, s * t / (q * q), M, tr) * bracket;
        rep.add(detail::compare(lhs, rhs, opt.sector, {{"z", z}, {"s", s}, {"t", t}}));
      }
      break;
    }
    case IdentityId::SUMQP: {
      if (!even_order_odd_length(root, M)) {
        rep.skipped = true;
        rep.note = "requires N even and M odd";
        break;
      }
      const SectorOperator qm0 = aux_limit(root, Sign::minus, 0.0, M, tr);
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus_avoiding(avoid);
        const SectorOperator qp = aux_limit(root, Sign::plus, z, M, tr);
        SectorOperator sum = cplx(0.0) * qp;
        for (int l = 1; l <= Np; ++l) {
          const SectorOperator den =
              aux_limit(root, Sign::plus, z * root.power(2 * l), M, tr) * aux_limit(root, Sign::plus, z * root.power(2 * l - 2), M, tr);
          sum += sz_scale(den.inverse(),
                          [&](TwoSz k) { return root.power(-static_cast<long>(l) * k) * ipow(z * root.power(2 * l) - 1.0, M); });
        }
        const SectorOperator rhs = root.power(static_cast<long>(Np) * M) * (qm0 * qp * sum);
        rep.add(detail::compare(aux_limit(root, Sign::minus, z, M, tr), rhs, opt.sector, {{"z", z}}));
      }
      break;
    }
    case IdentityId::COEFF: {
      const RootOfUnity inv = root.inverse();
      for (int i = 0; i < opt.samples; ++i) {
        const cplx s = rng.annulus();
        const auto cq = detail::operator_coefficients([&](cplx z) { return aux_matrix(root, z, s, M, tr); }, M);
        const auto ci = detail::operator_coefficients([&](cplx z) { return aux_matrix(inv, z, 1.0 / s, M, tr); }, M);
        for (int m = 0; m <= M; ++m) {
          const SectorOperator rhs = sz_scale(ci[m], [&](TwoSz k) {
            return ipow(-1.0, M) * root.power(M - k) * ipow(s, (M + k) / 2);
          });
          rep.add(detail::compare(cq[M - m], rhs, opt.sector, {{"s", s}, {"m", m}}));
        }
        const SectorOperator norm = SectorOperator::sz_function(M, [&](TwoSz k) {
          cplx acc = 0.0;
          for (int l = 0; l < Np; ++l) acc += root.half_power(2L * l * k);
          return ipow(-1.0, M) * acc;
        });
        SectorOperator lhs0 = cq[0];
        SectorOperator rhs0 = norm;
        if (tr.only_sector) {
          rhs0 = SectorOperator(M);
          rhs0.set_block(*tr.only_sector, norm.block(*tr.only_sector));
        }
        rep.add(detail::compare(lhs0, rhs0, opt.sector, {{"s", s}, {"m", -1}}));
      }
      rep.note = "m = -1 rows compare the constant term with the trace formula";
      break;
    }
    case IdentityId::ALG: {
      for (int i = 0; i < opt.samples; ++i) {
        const cplx z = rng.annulus(), r = rng.annulus(), s = rng.annulus();
        SampleRecord rec;
        rec.params = {{"z", z}, {"r", r}, {"s", s}};
        for (int spin = 0; spin <= 6; ++spin) {
          const EvalRep rep_n = eval_rep(root, spin);
          double res = eval_rep_relation_residual(root, rep_n);
          if (spin <= 4) res = std::max(res, eval_serre_residual(root, rep_n, z));
          if (res > rec.residual) rec.residual = res, rec.witness = "n_spin=" + std::to_string(spin);
        }
        for (Sign sign : {Sign::plus, Sign::minus}) {
          const double res = borel_relation_residual(root, borel_rep(root, sign, z, r, s));
          if (res > rec.residual) rec.residual = res, rec.witness = sign == Sign::plus ? "borel +" : "borel -";
        }
        rep.add(rec);
      }
      break;
    }
    case IdentityId::FACTOR: {
      if (!even_order_odd_length(root, M)) {
        rep.skipped = true;
        rep.note = "requires N even and M odd";
        break;
      }
      for (int k = -M; k <= M; k += 2) {
        if (opt.sector && *opt.sector != k) continue;
        SpectralOptions so;
        so.seed = opt.seed + 31u * static_cast<std::uint64_t>(k + M);
        so.trace = tr;
        const SectorSpectrum spec = analyze_sector(root, M, k, so);
        TraceOptions one = tr;
        one.only_sector = k;
        const Vector qm0 = spec.family.eigenvalues_of(aux_limit(root, Sign::minus, 0.0, M, one).block(k));
        const cplx norm = factorized_normalization(root, k);
        for (int i = 0; i < opt.samples; ++i) {
          const cplx z = rng.annulus(), s = rng.annulus();
          const Vector qzs = spec.family.eigenvalues_of(aux_matrix(root, z, s, M, one).block(k));
          const Vector qp = spec.family.eigenvalues_of(aux_limit(root, Sign::plus, z, M, one).block(k));
          const Vector qm = spec.family.eigenvalues_of(aux_limit(root, Sign::minus, z * s, M, one).block(k));
          SampleRecord rec;
          rec.params = {{"z", z}, {"s", s}, {"2Sz", cplx(k)}};
          for (Eigen::Index v = 0; v < qzs.size(); ++v) {
            const double r1 = relative_residual(qzs(v), qp(v) * qm(v) / qm0(v));
            const double r2 = relative_residual(qzs(v), factorized_value(spec.polys[v], norm, z, s));
            const double r = std::max(r1, r2);
            if (r > rec.residual || rec.witness.empty())
              rec.residual = std::max(rec.residual, r), rec.witness = "2Sz=" + std::to_string(k) + " vec=" + std::to_string(v);
          }
          rep.add(rec);
        }
      }
      rep.note = "eigenvalue level: Q = Q-(0)^{-1} Q+(z) Q-(zs) and the factorized zero form";
      break;
    }
  }
  rep.finish();
  return rep;
}

// ---- fusion eigenvalues from Q --------------------------------------------

enum class FusionMethod { SPEC, WRONSKI };

inline std::string to_string(FusionMethod m) { return m == FusionMethod::SPEC ? "SPEC" : "WRONSKI"; }

/// Eigenvalues of T^{(n)}(z) rebuilt from Q^+ / Q^- eigenvalues, compared with
/// the directly constructed fusion matrix in a joint eigenbasis.
inline IdentityReport fusion_from_Q(FusionMethod method, const RootOfUnity& root, int M, int n,
                                    const CheckOptions& opt = {}, Sign sign = Sign::plus) {
  IdentityReport rep = detail::make_report(to_string(method), root, M, opt);
  rep.tol = opt.tol;
  if (n < 1) throw DomainError("fusion_from_Q: n must be >= 1");
  if (method == FusionMethod::WRONSKI && (!even_order_odd_length(root, M) || n > root.N_prime)) {
    rep.skipped = true;
    rep.note = "requires N even, M odd and 1 <= n <= N'";
    rep.finish();
    return rep;
  }
  const int pm = sign == Sign::plus ? 1 : -1;
  const auto avoid = detail::special_points(root);
  Sampler rng(opt.seed * 7777u + static_cast<std::uint64_t>(n) * 131u + static_cast<std::uint64_t>(M));
  int skipped_vectors = 0, compared = 0;

  for (int k = -M; k <= M; k += 2) {
    if (opt.sector && *opt.sector != k) continue;
    TraceOptions one = opt.trace;
    one.only_sector = k;
    std::vector<Matrix> ops = {aux_matrix(root, rng.annulus(), rng.annulus(), M, one).block(k),
                               transfer_matrix(root, rng.annulus(), M, one).block(k)};
    if (root.even() || method == FusionMethod::WRONSKI) {
      ops.push_back(aux_limit(root, Sign::plus, rng.annulus(), M, one).block(k));
      ops.push_back(aux_limit(root, Sign::minus, rng.annulus(), M, one).block(k));
    } else {
      ops.insert(ops.begin(), aux_limit(root, sign, rng.annulus(), M, one).block(k));
    }
    const EigenFamily fam = joint_eigenbasis_blocks(ops, k, opt.seed + static_cast<std::uint64_t>(k + M));
    auto qpm = [&](Sign sg, cplx z) { return fam.eigenvalues_of(aux_limit(root, sg, z, M, one).block(k)); };

    // Eigenvectors on which Q^{sign} vanishes identically are outside the formula's scope.
    const Vector probe1 = qpm(sign, cplx(0.31, 0.77)), probe2 = qpm(sign, cplx(-1.13, 0.29));
    std::vector<bool> active(static_cast<std::size_t>(fam.size()), true);
    if (method == FusionMethod::SPEC)
      for (Eigen::Index v = 0; v < fam.size(); ++v)
        if (std::abs(probe1(v)) < 1e-9 && std::abs(probe2(v)) < 1e-9) active[v] = false, ++skipped_vectors;

    for (int i = 0; i < opt.samples; ++i) {
      cplx z;
      Vector direct, formula;
      bool ok = false;
      for (int attempt = 0; attempt < 6 && !ok; ++attempt) {
        z = rng.annulus_avoiding(avoid);
        direct = fam.eigenvalues_of(fusion_matrix(root, n, z, M, one).block(k));
        formula = Vector::Zero(fam.size());
        ok = true;
        if (method == FusionMethod::SPEC) {
          std::vector<Vector> qs;  // Q(z q^{2l}) for l = 0..n
          for (int l = 0; l <= n; ++l) qs.push_back(qpm(sign, z * root.power(2 * l)));
          for (Eigen::Index v = 0; v < fam.size() && ok; ++v) {
            if (!active[v]) continue;
            cplx sum = 0.0;
            for (int l = 1; l <= n; ++l) {
              const cplx den = qs[l](v) * qs[l - 1](v);
              if (std::abs(den) < 1e-10) {
                ok = false;
                break;
              }
              sum += root.half_power(-2L * pm * l * k) * ipow(z * root.power(2 * l) - 1.0, M) / den;
            }
            formula(v) = root.half_power(static_cast<long>(pm) * (n + 1) * k) * qs[0](v) * qs[n](v) * sum;
          }
        } else {
          const Vector p0 = qpm(Sign::plus, 0.0), m0 = qpm(Sign::minus, 0.0);
          const Vector pz = qpm(Sign::plus, z), mz = qpm(Sign::minus, z);
          const Vector pzn = qpm(Sign::plus, z * root.power(2 * n)), mzn = qpm(Sign::minus, z * root.power(2 * n));
          const cplx den = root.half_power(k) - root.half_power(-k);
          for (Eigen::Index v = 0; v < fam.size(); ++v) {
            if (std::abs(p0(v)) < 1e-12 || std::abs(m0(v)) < 1e-12) {
              ok = false;
              break;
            }
            formula(v) = -(root.half_power(static_cast<long>(n) * k) * (pzn(v) / p0(v)) * (mz(v) / m0(v)) -
                           root.half_power(-static_cast<long>(n) * k) * (pz(v) / p0(v)) * (mzn(v) / m0(v))) /
                         den;
          }
        }
      }
      if (!ok) throw SingularSampleError("fusion_from_Q: Q vanishes at every resampled point");
      SampleRecord rec;
      rec.params = {{"z", z}, {"2Sz", cplx(k)}};
      for (Eigen::Index v = 0; v < fam.size(); ++v) {
        if (!active[v]) continue;
        ++compared;
        const double r = relative_residual(formula(v), direct(v));
        if (r > rec.residual || rec.witness.empty())
          rec.residual = std::max(rec.residual, r), rec.witness = "2Sz=" + std::to_string(k) + " vec=" + std::to_string(v);
      }
      rep.add(rec);
    }
  }
  if (skipped_vectors > 0)
    rep.note = std::to_string(skipped_vectors) + " eigenvectors with identically vanishing Q excluded";
  if (compared == 0) rep.skipped = true;
  rep.finish();
  return rep;
}

}  // namespace sixvertex
