#pragma once

// JSON and CSV records for identity reports, spectra and Bethe solutions.

#include "sixvertex/bethe.hpp"
#include "sixvertex/identities.hpp"
#include "sixvertex/intertwine.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>

namespace sixvertex {

using json = nlohmann::ordered_json;

inline json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline json to_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx& c : v) out.push_back(to_json(c));
  return out;
}

/// S^z as a number: 2S^z = 1 gives 0.5.
inline json sector_json(std::optional<TwoSz> two_sz) {
  if (!two_sz) return "all";
  if (*two_sz % 2 == 0) return *two_sz / 2;
  return *two_sz / 2.0;
}

inline std::string format_sz(TwoSz two_sz) {
  if (two_sz % 2 == 0) return std::to_string(two_sz / 2);
  return (two_sz < 0 ? "-" : "") + std::to_string(std::abs(two_sz)) + "/2";
}

inline json to_json(const IdentityReport& r) {
  json samples = json::array();
  for (const SampleRecord& s : r.samples) {
    json params = json::object();
    for (const auto& [k, v] : s.params) params[k] = to_json(v);
    json rec = {{"params", params}, {"residual", s.residual}};
    if (!s.witness.empty()) rec["witness"] = s.witness;
    samples.push_back(rec);
  }
  json out = {{"identity_id", r.identity}, {"N", r.N},           {"n", r.n},
              {"M", r.M},                 {"sector", sector_json(r.sector)}, {"samples", samples},
              {"max_residual", r.max_residual}, {"tol", r.tol},
              {"status", r.skipped ? "skipped" : (r.pass ? "pass" : "fail")}};
  if (!r.witness.empty()) out["witness"] = r.witness;
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

inline json to_json(const BetheSolution& s) {
  json out = {{"sector", sector_json(s.two_sz)},
              {"e_plus", to_json(s.e_plus)},
              {"e_minus", to_json(s.e_minus)},
              {"residual_wronskian", s.residual_wronskian}};
  if (s.certified) {
    out["x_plus"] = to_json(s.x_plus);
    out["x_minus"] = to_json(s.x_minus);
    out["k_plus"] = to_json(s.k_plus);
    out["k_minus"] = to_json(s.k_minus);
    out["residual_bae"] = s.residual_bae;
  }
  if (s.oracle_index) out["oracle_index"] = *s.oracle_index;
  return out;
}

inline json to_json(const QPolynomial& p) {
  json strings = json::array();
  for (const ZeroString& z : p.strings)
    strings.push_back({{"start", to_json(z.start)}, {"length", z.length}, {"side", z.minus_side ? "minus" : "plus"}});
  json samples = json::array();
  for (const QSample& s : p.samples) {
    std::vector<cplx> c(s.coeffs.data(), s.coeffs.data() + s.coeffs.size());
    samples.push_back({{"s", to_json(s.s)}, {"coeffs", to_json(c)}});
  }
  json out = {{"sector", sector_json(p.two_sz)},
              {"eigen_index", p.eigen_index},
              {"samples", samples},
              {"zeroes_plus", to_json(p.zeroes_plus)},
              {"zeroes_minus", to_json(p.zeroes_minus)},
              {"strings", strings},
              {"vanishing", p.vanishing}};
  if (!p.warnings.empty()) out["warnings"] = p.warnings;
  return out;
}

/// 17 significant digits, "re+imi".
inline std::string format_complex(cplx c) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", c.real(), c.imag());
  return buf;
}

inline std::string spectra_csv_header(int M) {
  std::string h = "sector,eigen_index";
  for (int m = 0; m <= M; ++m) h += ",coeff_" + std::to_string(m);
  return h + ",zeroes_plus,zeroes_minus,strings";
}

/// One row per eigenvector; coefficients at the first s sample, lists separated by ';'.
inline std::string spectra_csv_row(const QPolynomial& p, int M) {
  std::ostringstream row;
  row << format_sz(p.two_sz) << ',' << p.eigen_index;
  const Vector& c = p.samples.front().coeffs;
  for (int m = 0; m <= M; ++m) row << ',' << (m < c.size() ? format_complex(c(m)) : format_complex(0.0));
  auto list = [](const std::vector<cplx>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_complex(v[i]);
    return s;
  };
  row << ',' << list(p.zeroes_plus) << ',' << list(p.zeroes_minus) << ',';
  for (std::size_t i = 0; i < p.strings.size(); ++i)
    row << (i ? ";" : "") << (p.strings[i].minus_side ? "minus:" : "plus:") << format_complex(p.strings[i].start) << 'x'
        << p.strings[i].length;
  return row.str();
}

}  // namespace sixvertex
