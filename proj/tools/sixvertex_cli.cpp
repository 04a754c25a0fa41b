// sixvertex: batch front end for the identity checks, spectra, Bethe solutions,
// intertwiners and partition functions.

#include "sixvertex/report.hpp"
#include "sixvertex/sixvertex.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>

using namespace sixvertex;

namespace {

struct RunConfig {
  int N = 0;
  int n = 1;
  int M = 0;
  std::string sectors = "all";
  std::string identities = "all";
  int samples = 5;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  int restarts = 200;
  int rows = 0;
  std::string z, s, t;
  std::string out;
  std::string format;
  bool guard_override = false;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

cplx parse_complex(const std::string& text, const char* what) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  in >> re;
  if (!in) throw ConfigError(std::string("--") + what + ": expected re[,im]");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw ConfigError(std::string("--") + what + ": expected re[,im]");
  }
  return {re, im};
}

TwoSz parse_sz(const std::string& token) {
  double v = 0.0;
  const auto slash = token.find('/');
  try {
    if (slash != std::string::npos)
      v = std::stod(token.substr(0, slash)) / std::stod(token.substr(slash + 1));
    else
      v = std::stod(token);
  } catch (const std::exception&) {
    throw ConfigError("--sector: cannot parse '" + token + "'");
  }
  const double twice = 2.0 * v;
  if (std::abs(twice - std::round(twice)) > 1e-9) throw ConfigError("--sector: S^z must be a half-integer");
  return static_cast<TwoSz>(std::lround(twice));
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

/// Sectors requested by --sector.
std::vector<TwoSz> sector_list(const RunConfig& c) {
  std::vector<TwoSz> out;
  if (c.sectors == "all") {
    for (TwoSz k = -c.M; k <= c.M; k += 2) out.push_back(k);
    return out;
  }
  for (const auto& tok : split(c.sectors)) {
    const TwoSz k = parse_sz(tok);
    if (std::abs(k) > c.M || (c.M - k) % 2 != 0)
      throw ConfigError("--sector " + tok + " is not a sector of M = " + std::to_string(c.M));
    out.push_back(k);
  }
  return out;
}

RootOfUnity validated_root(const RunConfig& c) {
  if (c.N < 3) throw ConfigError("--N must be >= 3");
  if (c.n < 1 || std::gcd(c.n, c.N) != 1) throw ConfigError("--primitive-n must be coprime to N");
  if (c.M < 1) throw ConfigError("--M must be >= 1");
  if (c.M > 20) throw ResourceGuardError("--M above 20 is not supported");
  if (c.samples < 1) throw ConfigError("--samples must be >= 1");
  if (c.restarts < 0) throw ConfigError("--restarts must be >= 0");
  return make_root_of_unity(c.N, c.n);
}

TraceOptions trace_options(const RunConfig& c) {
  TraceOptions tr;
  tr.guard_override = c.guard_override;
  return tr;
}

struct Output {
  json doc;
  std::string csv;
  bool ok = true;
};

void emit(const RunConfig& c, const std::string& command, const Output& o, const std::string& default_format) {
  const std::string format = c.format.empty() ? default_format : c.format;
  const std::string text = format == "csv" ? o.csv : o.doc.dump(2) + "\n";
  std::string path = c.out;
  if (path.empty()) {
    if (const char* dir = std::getenv("SIXVERTEX_OUT_DIR"); dir && *dir)
      path = std::string(dir) + "/" + command + "_N" + std::to_string(c.N) + "_M" + std::to_string(c.M) + "." + format;
  }
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

json config_json(const RunConfig& c, const std::string& command) {
  return {{"command", command}, {"N", c.N}, {"n", c.n}, {"M", c.M}, {"sectors", c.sectors}, {"seed", c.seed}};
}

// ---- verify --------------------------------------------------------------

Output run_verify(const RunConfig& c) {
  const RootOfUnity root = validated_root(c);
  const double tol = c.tol.value_or(1e-8);
  std::vector<std::string> names;
  if (c.identities == "all") {
    for (IdentityId id : all_identities()) names.push_back(to_string(id));
    names.push_back("SPEC");
    names.push_back("WRONSKI");
  } else {
    names = split(c.identities);
  }
  for (const auto& name : names)
    if (!identity_from_string(name) && name != "SPEC" && name != "WRONSKI")
      throw ConfigError("--identities: unknown id '" + name + "'");

  std::vector<std::optional<TwoSz>> sectors;
  if (c.sectors == "all")
    sectors.push_back(std::nullopt);
  else
    for (TwoSz k : sector_list(c)) sectors.push_back(k);

  Output o;
  o.doc = config_json(c, "verify");
  o.doc["samples"] = c.samples;
  json reports = json::array();
  o.csv = "identity_id,N,n,M,sector,max_residual,tol,status\n";
  auto record = [&](const IdentityReport& r) {
    reports.push_back(to_json(r));
    o.ok = o.ok && r.pass;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", r.max_residual, r.tol);
    o.csv += r.identity + "," + std::to_string(r.N) + "," + std::to_string(r.n) + "," + std::to_string(r.M) + "," +
             (r.sector ? format_sz(*r.sector) : "all") + "," + buf + "," +
             (r.skipped ? "skipped" : (r.pass ? "pass" : "fail")) + "\n";
  };
  for (const auto& sector : sectors) {
    CheckOptions opt;
    opt.samples = c.samples;
    opt.seed = c.seed;
    opt.tol = tol;
    opt.sector = sector;
    opt.trace = trace_options(c);
    for (const auto& name : names) {
      if (auto id = identity_from_string(name)) {
        record(check_identity(*id, root, c.M, opt));
        continue;
      }
      const FusionMethod method = name == "SPEC" ? FusionMethod::SPEC : FusionMethod::WRONSKI;
      for (int level = 1; level <= root.N_prime; ++level) {
        IdentityReport r = fusion_from_Q(method, root, c.M, level, opt);
        r.identity += "[n=" + std::to_string(level) + "]";
        record(r);
      }
    }
  }
  o.doc["reports"] = reports;
  o.doc["status"] = o.ok ? "pass" : "fail";
  return o;
}

// ---- spectra -------------------------------------------------------------

Output run_spectra(const RunConfig& c) {
  const RootOfUnity root = validated_root(c);
  const auto sectors = sector_list(c);
  SpectralOptions opt;
  opt.seed = c.seed;
  opt.trace = trace_options(c);
  if (!c.s.empty()) opt.s_first = parse_complex(c.s, "s");

  Output o;
  o.doc = config_json(c, "spectra");
  o.csv = spectra_csv_header(c.M) + "\n";
  json out = json::array();
  for (TwoSz k : sectors) {
    const SectorSpectrum spec = analyze_sector(root, c.M, k, opt);
    json fam = {{"sector", sector_json(k)},
                {"dimension", spec.family.size()},
                {"degenerate", spec.family.degenerate},
                {"offdiag_residual", spec.family.offdiag_residual}};
    json polys = json::array();
    for (const QPolynomial& p : spec.polys) {
      polys.push_back(to_json(p));
      o.csv += spectra_csv_row(p, c.M) + "\n";
    }
    fam["polynomials"] = polys;
    out.push_back(fam);
  }
  o.doc["results"] = out;
  return o;
}

// ---- bethe ---------------------------------------------------------------

Output run_bethe(const RunConfig& c) {
  const RootOfUnity root = validated_root(c);
  if (c.M % 2 == 0) throw ConfigError("bethe: M must be odd");
  const auto sectors = sector_list(c);
  Output o;
  o.doc = config_json(c, "bethe");
  o.doc["restarts"] = c.restarts;
  o.csv = "sector,index,e_plus,e_minus,residual_wronskian,residual_bae,oracle_index\n";
  json out = json::array();
  for (TwoSz k : sectors) {
    WronskianSolveOptions opt;
    opt.restarts = c.restarts;
    opt.seed = c.seed;
    opt.tol = c.tol.value_or(1e-10);
    json sec = {{"sector", sector_json(k)}};
    std::vector<BetheSolution> oracle;
    if (root.even()) {
      SpectralOptions so;
      so.seed = c.seed;
      so.trace = trace_options(c);
      oracle = bethe_from_spectrum(analyze_sector(root, c.M, k, so), root, c.M);
      for (const auto& b : oracle) opt.oracle.emplace_back(b.e_plus, b.e_minus);
    }
    // The oracle also seeds Newton; recovery is judged on random starts alone.
    WronskianSolveOptions blind = opt;
    blind.oracle.clear();
    const WronskianSolveResult res = solve_wronskian_system(root, c.M, k, blind);
    json sols = json::array();
    std::vector<std::string> diagnostics = res.diagnostics;
    std::vector<bool> recovered(oracle.size(), false);
    for (std::size_t i = 0; i < res.solutions.size(); ++i) {
      BetheSolution s = res.solutions[i];
      for (std::size_t j = 0; j < oracle.size(); ++j) {
        const Vector a = detail::pack(s.e_plus, s.e_minus), b = detail::pack(oracle[j].e_plus, oracle[j].e_minus);
        if ((a - b).cwiseAbs().maxCoeff() < 1e-6) {
          s.oracle_index = static_cast<int>(j);
          recovered[j] = true;
        }
      }
      try {
        s = bethe_certify(s, root, c.M);
      } catch (const BranchError& e) {
        diagnostics.push_back("solution " + std::to_string(i) + ": " + e.what());
      }
      sols.push_back(to_json(s));
      auto list = [](const std::vector<cplx>& v) {
        std::string t;
        for (std::size_t j = 0; j < v.size(); ++j) t += (j ? ";" : "") + format_complex(v[j]);
        return t;
      };
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", s.residual_wronskian, s.residual_bae);
      o.csv += format_sz(k) + "," + std::to_string(i) + "," + list(s.e_plus) + "," + list(s.e_minus) + "," + buf + "," +
               (s.oracle_index ? std::to_string(*s.oracle_index) : "") + "\n";
      o.ok = o.ok && s.residual_wronskian < opt.tol;
    }
    const auto n_recovered = std::count(recovered.begin(), recovered.end(), true);
    o.ok = o.ok && n_recovered == static_cast<long>(oracle.size()) && !res.solutions.empty();
    sec["solutions"] = sols;
    sec["distinct"] = res.solutions.size();
    sec["bound"] = res.bound;
    sec["converged_restarts"] = res.converged;
    if (root.even()) {
      sec["oracle"] = oracle.size();
      sec["oracle_recovered"] = n_recovered;
    }
    if (!diagnostics.empty()) sec["diagnostics"] = diagnostics;
    out.push_back(sec);
  }
  o.doc["results"] = out;
  o.doc["status"] = o.ok ? "pass" : "fail";
  return o;
}

// ---- intertwine ----------------------------------------------------------

Output run_intertwine(const RunConfig& c) {
  const RootOfUnity root = validated_root(c);
  const double tol = c.tol.value_or(1e-10);
  Sampler rng(c.seed);
  Output o;
  o.doc = config_json(c, "intertwine");
  o.csv = "point,amended_residual,printed_residual,ybe_residual,qcomm_residual\n";
  json points = json::array();
  if (c.N == 4 || c.N == 6) {
    for (int i = 0; i < c.samples; ++i) {
      const cplx z = c.z.empty() ? rng.annulus() : parse_complex(c.z, "z");
      const cplx s = c.s.empty() ? rng.annulus() : parse_complex(c.s, "s");
      const cplx t = c.t.empty() ? rng.annulus() : parse_complex(c.t, "t");
      const cplx w = rng.annulus();
      const cplx lam = rng.annulus();
      const std::optional<cplx> l = c.N == 4 ? std::optional<cplx>(lam) : std::nullopt;
      const double amended = check_intertwining(build_intertwiner(c.N, z, s, t, l), root);
      const double printed = check_intertwining(build_intertwiner(c.N, z, s, t, l, Transcription::printed), root);
      const IdentityReport ybe = check_ybe_and_qcomm(c.N, z, w, s, t, c.M, Transcription::amended, tol);
      json p = {{"z", to_json(z)},
                {"w", to_json(w)},
                {"s", to_json(s)},
                {"t", to_json(t)},
                {"amended_residual", amended},
                {"printed_residual", printed},
                {"ybe_residual", ybe.samples[0].residual},
                {"qcomm_residual", ybe.samples[1].residual}};
      if (c.N == 4) p["lambda"] = to_json(lam);
      if (c.N == 6) {
        const WResolution pr = resolve_w_substitution(z, s, t, Transcription::printed, tol);
        const WResolution am = resolve_w_substitution(z, s, t, Transcription::amended, tol);
        p["w_substitution"] = {{"printed", {{"w=1", pr.residual_one}, {"w=z", pr.residual_z}, {"resolved", pr.resolved}}},
                               {"amended", {{"w=1", am.residual_one}, {"w=z", am.residual_z}, {"resolved", am.resolved}}}};
      }
      points.push_back(p);
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", amended, printed, ybe.samples[0].residual,
                    ybe.samples[1].residual);
      o.csv += std::to_string(i) + "," + buf + "\n";
      o.ok = o.ok && amended < tol && ybe.samples[0].residual < tol && ybe.samples[1].residual < 1e-9;
    }
  }
  o.doc["points"] = points;
  const cplx z = c.z.empty() ? cplx{0.7, 0.3} : parse_complex(c.z, "z");
  const cplx s = c.s.empty() ? cplx{1.2, -0.4} : parse_complex(c.s, "s");
  const cplx t = c.t.empty() ? cplx{0.5, 0.9} : parse_complex(c.t, "t");
  const NullspaceResult ns = solve_intertwiner_numeric(root, z, s, t);
  json nsj = {{"z", to_json(z)}, {"s", to_json(s)}, {"t", to_json(t)}, {"dimension", ns.dimension()},
              {"threshold", ns.threshold}, {"gap", ns.gap}};
  if (c.N == 4 || c.N == 6) {
    const auto S = build_intertwiner(c.N, z, s, t, c.N == 4 ? std::optional<cplx>(0.5) : std::nullopt);
    nsj["overlap_with_tabulated"] = nullspace_overlap(ns, S.matrix);
  }
  o.doc["nullspace"] = nsj;
  o.csv += "nullspace_dimension," + std::to_string(ns.dimension()) + "\n";
  o.doc["status"] = o.ok ? "pass" : "fail";
  return o;
}

// ---- partition -----------------------------------------------------------

Output run_partition(const RunConfig& c) {
  const RootOfUnity root = validated_root(c);
  const int rows = c.rows > 0 ? c.rows : c.M;
  Sampler rng(c.seed);
  const cplx z = c.z.empty() ? rng.annulus() : parse_complex(c.z, "z");
  const cplx Z = partition_function(root, z, c.M, rows, trace_options(c));
  Output o;
  o.doc = config_json(c, "partition");
  o.doc["rows"] = rows;
  o.doc["z"] = to_json(z);
  o.doc["Z"] = to_json(Z);
  o.csv = "N,M,rows,z,Z\n" + std::to_string(c.N) + "," + std::to_string(c.M) + "," + std::to_string(rows) + "," +
          format_complex(z) + "," + format_complex(Z) + "\n";
  return o;
}

void add_common(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--N", c.N, "order of the root of unity")->required();
  cmd->add_option("--primitive-n", c.n, "q = exp(2 pi i n / N)")->capture_default_str();
  cmd->add_option("--M", c.M, "number of columns")->required();
  cmd->add_option("--sector", c.sectors, "S^z values (0.5, -3/2, ...) or all")->capture_default_str();
  cmd->add_option("--samples", c.samples, "random parameter points")->capture_default_str();
  cmd->add_option("--seed", c.seed)->capture_default_str();
  cmd->add_option("--tol", c.tol, "pass threshold");
  cmd->add_option("--out", c.out, "output file (default: $SIXVERTEX_OUT_DIR or stdout)");
  cmd->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--guard-override", c.guard_override, "ignore the memory guard");
  cmd->add_option("--z", c.z, "spectral parameter re[,im]");
  cmd->add_option("--s", c.s, "re[,im]");
  cmd->add_option("--t", c.t, "re[,im]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"six-vertex auxiliary matrices at roots of unity"};
  app.require_subcommand(1);
  RunConfig c;

  auto* verify = app.add_subcommand("verify", "check operator identities");
  add_common(verify, c);
  verify->add_option("--identities", c.identities, "comma separated ids or all")->capture_default_str();
  auto* spectra = app.add_subcommand("spectra", "Q eigenvalue polynomials and their zeroes");
  add_common(spectra, c);
  auto* bethe = app.add_subcommand("bethe", "solve the Wronskian system and certify the Bethe equations");
  add_common(bethe, c);
  bethe->add_option("--restarts", c.restarts)->capture_default_str();
  auto* intertwine = app.add_subcommand("intertwine", "intertwiner and Yang-Baxter checks");
  add_common(intertwine, c);
  auto* partition = app.add_subcommand("partition", "Z = Tr T(z)^rows");
  add_common(partition, c);
  partition->add_option("--rows", c.rows, "number of rows (default M)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Output o;
    std::string name, fmt = "json";
    if (verify->parsed()) {
      name = "verify";
      o = run_verify(c);
    } else if (spectra->parsed()) {
      name = "spectra";
      fmt = "csv";
      o = run_spectra(c);
    } else if (bethe->parsed()) {
      name = "bethe";
      o = run_bethe(c);
    } else if (intertwine->parsed()) {
      name = "intertwine";
      o = run_intertwine(c);
    } else {
      name = "partition";
      o = run_partition(c);
    }
    emit(c, name, o, fmt);
    return o.ok ? 0 : 1;
  } catch (const ResourceGuardError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
