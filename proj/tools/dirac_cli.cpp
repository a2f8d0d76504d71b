// Command-line front end: channel classification, distinguished-extension
// construction, gap spectra under a chosen boundary relation, and the
// inequality verification corpus. All machine output goes through the
// deterministic 17-digit JSON dumper.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dirac/errors.hpp"
#include "dirac/json_io.hpp"
#include "dirac/radial_ode.hpp"

namespace {

using namespace dirac;

struct CommonOpts {
  double nu = 0.0, mu = 0.0, lambda = 0.0, mass = 1.0;
  std::string format = "pretty";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--nu", c.nu, "electric coupling (the potential carries "
                                "+nu/|x|; attraction needs nu < 0)");
  cmd->add_option("--mu", c.mu, "scalar coupling");
  cmd->add_option("--lambda", c.lambda, "anomalous-magnetic coupling");
  cmd->add_option("--mass", c.mass, "mass m")->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "pretty"}));
  cmd->add_option("--out", c.out, "write the report to this path");
}

void emit(const CommonOpts& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(c.out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + c.out);
    os << text;
  }
}

Json params_json(const PotentialParams& p) {
  Json j;
  j["nu"] = p.nu;
  j["mu"] = p.mu;
  j["lambda"] = p.lambda;
  j["mass"] = p.mass;
  j["sup_norm"] = p.sup_norm;
  return j;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const CommonOpts& c) {
  const PotentialParams p(c.nu, c.mu, c.lambda, c.mass);
  const int bound = k_scan_bound(p);
  const IndexSet set = enumerate_index_set(p);
  const int d = deficiency_dimension(p);

  std::vector<ChannelClassification> scan;
  for (int k = -bound; k <= bound; ++k) {
    if (k == 0) continue;
    scan.push_back(classify_channel(p, k));
  }

  if (c.format == "json") {
    Json j;
    j["schema"] = 1;
    j["params"] = params_json(p);
    j["k_scan_bound"] = bound;
    Json rows = Json::array();
    for (const auto& cls : scan) rows.push_back(to_json(cls));
    j["scan"] = std::move(rows);
    j["d"] = d;
    j["index_set"] = to_json(set);
    emit(c, dump_json17(j));
    return 0;
  }

  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "potential: nu=%g mu=%g lambda=%g mass=%g (sup|x||V| = %g)\n",
                p.nu, p.mu, p.lambda, p.mass, p.sup_norm);
  os << buf;
  os << "   k        delta        gamma  regime\n";
  for (const auto& cls : scan) {
    std::snprintf(buf, sizeof(buf), "%4d %12.6g %12.6g  %s%s\n", cls.k,
                  cls.delta, cls.gamma, regime_name(cls.regime),
                  cls.near_boundary ? "  [near regime boundary]" : "");
    os << buf;
  }
  os << "deficiency dimension d = " << d << "\n";
  if (d == 0) {
    os << "operator essentially self-adjoint (no boundary conditions "
          "needed)\n";
  } else {
    os << "ordered index set (2j, 2mj, k):\n";
    for (const Channel& ch : set.entries) {
      std::snprintf(buf, sizeof(buf), "  (%d/2, %d/2, %d)\n", ch.twice_j,
                    ch.twice_mj, ch.k);
      os << buf;
    }
  }
  emit(c, os.str());
  return 0;
}

// ----------------------------------------------------------- distinguished

int cmd_distinguished(const CommonOpts& c) {
  const PotentialParams p(c.nu, c.mu, c.lambda, c.mass);
  const ExtensionRelation rel = distinguished_extension(p);
  const UnitaryParametrization up = relation_to_unitary(rel);
  const auto diag = check_self_adjoint(rel);

  if (c.format == "json") {
    Json j;
    j["schema"] = 1;
    j["params"] = params_json(p);
    j["relation"] = to_json(rel);
    j["unitary"] = to_json(up);
    j["self_adjoint"] = diag.ok;
    emit(c, dump_json17(j));
    return 0;
  }

  std::ostringstream os;
  os << "distinguished extension, d = " << rel.d << "\n";
  os << "per-channel rows a Gamma+ = b Gamma- :\n";
  char buf[200];
  for (int s = 0; s < rel.d; ++s) {
    const Channel& ch = rel.channel_order.entries[s];
    std::snprintf(buf, sizeof(buf),
                  "  (%d/2, %d/2, %d): a = %.12g, b = %.12g, u = "
                  "(%.12g, %.12g)\n",
                  ch.twice_j, ch.twice_mj, ch.k, rel.a_matrix(s, s).real(),
                  rel.b_matrix(s, s).real(), up.u_matrix(s, s).real(),
                  up.u_matrix(s, s).imag());
    os << buf;
  }
  os << "self-adjointness check: " << (diag.ok ? "pass" : "FAIL") << "\n";
  emit(c, os.str());
  return 0;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOpts {
  int k = -1;
  std::string relation;
  double theta = -1.0;
  bool distinguished = false;
  std::string window = "";
  int scan_points = 400;
  int max_count = 16;
  double r0 = 1e-8;
  double rinf = 0.0;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double fit_lo = 1e-8, fit_hi = 1e-5;
  std::string dump_csv;
};

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
  std::stringstream ss(s);
  double a, b;
  char comma;
  if (!(ss >> a >> comma >> b) || comma != ',')
    throw std::invalid_argument(std::string("cannot parse ") + what +
                                " '" + s + "' (expected lo,hi)");
  return {a, b};
}

RelationRow parse_relation(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if (v.size() == 2) return RelationRow{v[0], v[1]};
  if (v.size() == 4) return RelationRow{Cx(v[0], v[1]), Cx(v[2], v[3])};
  throw std::invalid_argument(
      "--relation expects 'a,b' (real) or 'are,aim,bre,bim'");
}

int cmd_spectrum(const CommonOpts& c, const SpectrumOpts& s) {
  const PotentialParams p(c.nu, c.mu, c.lambda, c.mass);
  if (s.k == 0) throw std::invalid_argument("--k must be nonzero");

  const ChannelClassification cls = classify_channel(p, s.k);
  std::optional<RelationRow> row;
  const int picked = (!s.relation.empty() ? 1 : 0) + (s.theta >= 0 ? 1 : 0) +
                     (s.distinguished ? 1 : 0);
  if (picked > 1)
    throw std::invalid_argument(
        "choose one of --relation / --theta / --distinguished");
  if (cls.regime == Regime::EssentiallySelfAdjoint) {
    if (picked != 0)
      throw std::invalid_argument(
          "channel k=" + std::to_string(s.k) +
          " is essentially self-adjoint; it takes no boundary condition");
  } else {
    if (!s.relation.empty()) row = parse_relation(s.relation);
    else if (s.theta >= 0) row = theta_row(s.theta);
    else if (s.distinguished) row = distinguished_row(p, s.k);
    else
      throw std::invalid_argument(
          "channel k=" + std::to_string(s.k) +
          " needs --relation, --theta or --distinguished");
  }

  double lo = -0.999 * p.mass, hi = 0.999 * p.mass;
  if (!s.window.empty()) std::tie(lo, hi) = parse_pair(s.window, "--window");

  SolveOptions opts;
  opts.r0 = s.r0;
  opts.r_inf = s.rinf;
  opts.abs_tol = s.abs_tol;
  opts.rel_tol = s.rel_tol;
  opts.scan_points = s.scan_points;
  opts.max_count = s.max_count;
  opts.fit_window = FitWindow{s.fit_lo, s.fit_hi};

  const EigenvalueResult res = eigenvalues_in_gap(p, s.k, row, lo, hi, opts);

  if (!s.dump_csv.empty()) {
    for (std::size_t i = 0; i < res.eigenfunctions.size(); ++i) {
      const std::string path = s.dump_csv + "_" + std::to_string(i) + ".csv";
      std::ofstream os(path, std::ios::binary);
      if (!os) throw std::runtime_error("cannot open " + path);
      write_radial_csv(os, res.eigenfunctions[i]);
    }
  }

  if (c.format == "json") {
    Json j;
    j["schema"] = 1;
    j["params"] = params_json(p);
    j["regime"] = regime_name(cls.regime);
    j["window"] = Json::array({lo, hi});
    j["result"] = to_json(res);
    emit(c, dump_json17(j));
  } else if (c.format == "csv") {
    std::ostringstream os;
    os << "index,eigenvalue,match_defect,error_estimate\n";
    char buf[160];
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", i,
                    res.eigenvalues[i], res.match_defects[i],
                    res.energy_error_estimates[i]);
      os << buf;
    }
    emit(c, os.str());
  } else {
    std::ostringstream os;
    os << "channel k = " << s.k << " (" << regime_name(cls.regime) << ")";
    if (row) {
      os << ", row a = (" << row->a.real() << "," << row->a.imag()
         << "), b = (" << row->b.real() << "," << row->b.imag() << ")";
    }
    os << "\nwindow [" << lo << ", " << hi << "], "
       << res.eigenvalues.size() << " eigenvalue(s)\n";
    char buf[200];
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i) {
      std::snprintf(buf, sizeof(buf),
                    "  E[%zu] = %.12f   |W| = %.3g   est.err = %.2g\n", i,
                    res.eigenvalues[i], res.match_defects[i],
                    res.energy_error_estimates[i]);
      os << buf;
      if (i < res.boundary_checks.size()) {
        const BoundaryData& bd = res.boundary_checks[i];
        std::snprintf(buf, sizeof(buf),
                      "        Gamma+ = (%.6g, %.6g), Gamma- = (%.6g, %.6g), "
                      "fit residual %.2g\n",
                      bd.gamma_plus.real(), bd.gamma_plus.imag(),
                      bd.gamma_minus.real(), bd.gamma_minus.imag(),
                      bd.fit_residual);
        os << buf;
      }
    }
    if (res.eigenvalues.empty()) os << "  (no eigenvalues in the window)\n";
    emit(c, os.str());
  }
  return 0;
}

// --------------------------------------------------- verify-inequalities

struct VerifyOpts {
  int trials = 100;
  std::uint64_t seed = 0;
  double r_ref = 1.0;
  std::vector<int> ks{1, -1, 2, -2};
  bool serial = false;
};

int cmd_verify(const CommonOpts& c, const VerifyOpts& v) {
  const PotentialParams p(c.nu, c.mu, c.lambda, c.mass);
  const CorpusReport rep =
      v.serial ? run_inequality_corpus_serial(p, v.ks, v.trials, v.seed,
                                              v.r_ref)
               : run_inequality_corpus(p, v.ks, v.trials, v.seed, v.r_ref);

  if (c.format == "json") {
    Json j;
    j["schema"] = 1;
    j["params"] = params_json(p);
    j["report"] = to_json(rep);
    emit(c, dump_json17(j));
  } else {
    std::ostringstream os;
    os << "inequality corpus: " << rep.trials << " trials x "
       << rep.ks.size() << " channels, seed " << rep.base_seed << "\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "min relative margin: %.3e\n",
                  rep.min_margin_rel);
    os << buf;
    os << "sharpness ratios:";
    for (double r : rep.sharpness_ratios) {
      std::snprintf(buf, sizeof(buf), " %.4f", r);
      os << buf;
    }
    os << (rep.sharpness_decreasing ? "  (decreasing)" : "  (NOT decreasing)")
       << "\n";
    os << (rep.all_ok ? "all margins within budget\n"
                      : "MARGIN VIOLATIONS FOUND\n");
    emit(c, os.str());
  }
  return rep.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "self-adjoint realizations of the 3D Dirac operator with a "
      "Coulomb-type matrix potential: channel classification, boundary "
      "relations, gap spectra, functional-inequality verification"};
  app.require_subcommand(1);

  CommonOpts c_classify, c_dist, c_spec, c_verify;
  SpectrumOpts s;
  VerifyOpts v;

  CLI::App* classify =
      app.add_subcommand("classify", "per-channel regime classification and "
                                     "the ordered deficiency index set");
  add_common(classify, c_classify);

  CLI::App* dist = app.add_subcommand(
      "distinguished",
      "the self-adjoint extension whose domain sits in the form domain");
  add_common(dist, c_dist);

  CLI::App* spec = app.add_subcommand(
      "spectrum", "eigenvalues in the mass gap under a boundary relation");
  add_common(spec, c_spec);
  spec->add_option("--k", s.k, "spin-orbit channel number (nonzero)")
      ->required();
  spec->add_option("--relation", s.relation,
                   "row a,b (real) or are,aim,bre,bim of a Gamma+ = b Gamma-");
  spec->add_option("--theta", s.theta,
                   "theta-family row (cos theta, sin theta), theta in [0, pi)");
  spec->add_flag("--distinguished", s.distinguished,
                 "use the distinguished row on this channel");
  spec->add_option("--window", s.window, "energy window lo,hi inside (-m, m)");
  spec->add_option("--scan-points", s.scan_points,
                   "bracketing scan resolution")
      ->check(CLI::PositiveNumber);
  spec->add_option("--max-count", s.max_count, "stop after this many roots")
      ->check(CLI::PositiveNumber);
  spec->add_option("--r0", s.r0, "outward start radius")
      ->check(CLI::PositiveNumber);
  spec->add_option("--rinf", s.rinf, "inward start radius (0 = automatic)");
  spec->add_option("--abs-tol", s.abs_tol, "integrator absolute tolerance")
      ->check(CLI::PositiveNumber);
  spec->add_option("--rel-tol", s.rel_tol, "integrator relative tolerance")
      ->check(CLI::PositiveNumber);
  spec->add_option("--fit-lo", s.fit_lo, "boundary fit window lower end")
      ->check(CLI::PositiveNumber);
  spec->add_option("--fit-hi", s.fit_hi, "boundary fit window upper end")
      ->check(CLI::PositiveNumber);
  spec->add_option("--dump-csv", s.dump_csv,
                   "write eigenfunction samples to <prefix>_<i>.csv");

  CLI::App* verify = app.add_subcommand(
      "verify-inequalities",
      "seeded quadrature corpus for the Hardy-type, Kato-Nenciu, log-Hardy "
      "and quadratic-form bounds");
  add_common(verify, c_verify);
  verify->add_option("--trials", v.trials, "draws per channel")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", v.seed, "base seed");
  verify->add_option("--r-ref", v.r_ref, "reference radius R")
      ->check(CLI::PositiveNumber);
  verify->add_option("--k", v.ks, "channel list (default 1 -1 2 -2)");
  verify->add_flag("--serial", v.serial, "disable the parallel runner");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: BadArguments: " << e.what() << "\n";
    return 2;
  }

  try {
    if (classify->parsed()) return cmd_classify(c_classify);
    if (dist->parsed()) return cmd_distinguished(c_dist);
    if (spec->parsed()) return cmd_spectrum(c_spec, s);
    if (verify->parsed()) return cmd_verify(c_verify, v);
  } catch (const dirac::DomainError& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: BadArguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 20;
  }
  return 0;
}
