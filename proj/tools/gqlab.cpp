// gqlab: spectral geometry of prequantized torus fibrations on the lattice.
//
// Subcommands: bs, assemble, spectrum, sweep, limit, localize, gap,
// curvature, verify. Configuration comes from a flat [section] key=value
// file plus command-line overrides; outputs are CSV/JSON files in --out.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "gqlab/analysis.hpp"
#include "gqlab/config.hpp"
#include "gqlab/curvature.hpp"
#include "gqlab/io.hpp"
#include "gqlab/verify.hpp"

using json = nlohmann::json;
using namespace gqlab;

namespace {

struct Session {
  RunConfig cfg;

  Grid grid() const {
    int nth = cfg.n_theta > 0 ? cfg.n_theta : cfg.default_n_theta();
    int nx = cfg.n_x > 0 ? cfg.n_x : cfg.default_n_x();
    return Grid(cfg.n, nth, nx);
  }

  ComplexStructureFamily family() const {
    if (!cfg.family_file.empty()) {
      ComplexStructureFamily fam = load_tabulated_family(cfg.family_file);
      if (fam.n != cfg.n)
        fail(ErrorKind::config, "family file has n=" + std::to_string(fam.n) +
                                    ", config says n=" +
                                    std::to_string(cfg.n));
      return fam;
    }
    return preset_family(cfg.preset, cfg.n);
  }

  PrequantumBundle bundle() const {
    return PrequantumBundle(cfg.n, cfg.k, cfg.offsets);
  }

  EigsOptions eig_opts() const {
    EigsOptions o;
    o.m = cfg.m;
    o.tol = cfg.tol;
    o.seed = cfg.seed;
    if (cfg.method == "lanczos") o.method = EigsOptions::Method::lanczos;
    if (cfg.method == "dense") o.method = EigsOptions::Method::dense;
    return o;
  }

  SparseHermitianOperator assemble(const MetricField& mf) const {
    PrequantumBundle b = bundle();
    if (cfg.operator_kind == "bochner") return assemble_bochner(mf, b);
    if (cfg.operator_kind == "sharp") return assemble_sharp(mf, b, false);
    if (cfg.operator_kind == "circle_reduced")
      return assemble_circle_reduced(mf, b);
    return assemble_dbar(mf, b);
  }

  std::string out_path(const std::string& file) const {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / file).string();
  }
};

int cmd_bs(const Session& ses) {
  BSPointSet set = bs_points(ses.bundle());
  std::ostringstream csv;
  for (int i = 0; i < ses.cfg.n; ++i) csv << "b_" << (i + 1) << ",";
  csv << "strict_level\n";
  for (const auto& p : set.points) {
    for (double b : p.b) csv << fmt12(b) << ",";
    csv << p.strict_level << "\n";
  }
  write_text_file(ses.out_path("bs.csv"), csv.str());
  std::cout << "wrote " << set.points.size() << " Bohr-Sommerfeld points to "
            << ses.out_path("bs.csv") << "\n";
  return 0;
}

int cmd_assemble(const Session& ses) {
  MetricField mf = family_at(ses.family(), ses.cfg.s, ses.grid());
  SparseHermitianOperator op = ses.assemble(mf);
  write_coordinate_file(op, ses.out_path("operator.txt"));
  std::cout << operator_kind_name(op.kind) << " operator: dim " << op.dim
            << ", nnz " << op.nnz() << " -> " << ses.out_path("operator.txt")
            << "\n";
  return 0;
}

int cmd_spectrum(const Session& ses) {
  MetricField mf = family_at(ses.family(), ses.cfg.s, ses.grid());
  SparseHermitianOperator op = ses.assemble(mf);
  SpectrumResult sp = lowest_eigenpairs(op, ses.eig_opts());
  std::ostringstream csv;
  csv << "j,lambda,residual\n";
  for (std::size_t i = 0; i < sp.values.size(); ++i)
    csv << (i + 1) << "," << fmt12(sp.values[i]) << ","
        << fmt12(sp.residuals[i]) << "\n";
  write_text_file(ses.out_path("spectrum.csv"), csv.str());
  std::cout << "lowest " << sp.values.size() << " eigenvalues ("
            << sp.method << ", " << sp.iterations << " matvecs) -> "
            << ses.out_path("spectrum.csv") << "\n";
  return 0;
}

int cmd_sweep(const Session& ses) {
  SweepResult res = sweep(ses.family(), ses.bundle(), ses.grid(),
                          ses.cfg.s_list, ses.cfg.m, ses.eig_opts());
  if (res.semiflat_warning)
    std::cerr << "warning: family is not asymptotically semiflat; the limit "
                 "targets are not guaranteed\n";
  std::ostringstream csv;
  csv << "s,j,lambda,target,abs_err\n";
  for (const auto& r : res.rows)
    csv << fmt12(r.s) << "," << r.j << "," << fmt12(r.lambda) << ","
        << fmt12(r.target) << "," << fmt12(r.abs_err) << "\n";
  write_text_file(ses.out_path("sweep.csv"), csv.str());
  bool all_ok = true;
  for (bool c : res.converging) all_ok = all_ok && c;
  std::cout << "sweep over " << res.s_values.size() << " values of s ("
            << operator_kind_name(res.operator_kind) << ") -> "
            << ses.out_path("sweep.csv") << "; converging verdicts "
            << (all_ok ? "pass" : "FAIL") << "\n";
  return all_ok ? 0 : 1;
}

int cmd_limit(const Session& ses) {
  std::uint64_t bs_count = 1;
  for (int i = 0; i < ses.cfg.n; ++i) bs_count *= ses.cfg.k;
  LimitSpectrum sp =
      gaussian_spectrum(ses.cfg.k, ses.cfg.n, bs_count, ses.cfg.N_max);
  std::ostringstream csv;
  // Half-Laplacian convention: eigenvalue k*N of the limit of the dbar
  // Laplacian (equivalently half the sharp operator).
  csv << "N,eigenvalue,multiplicity,cumulative\n";
  for (const auto& lv : sp.levels)
    csv << lv.N << "," << fmt12(lv.eigenvalue) << "," << lv.multiplicity
        << "," << lv.cumulative << "\n";
  write_text_file(ses.out_path("limit.csv"), csv.str());
  std::cout << "limit spectrum (dbar convention, eigenvalues k*N) -> "
            << ses.out_path("limit.csv") << "\n";
  return 0;
}

int cmd_localize(const Session& ses) {
  MetricField mf = family_at(ses.family(), ses.cfg.s, ses.grid());
  PrequantumBundle b = ses.bundle();
  SparseHermitianOperator op = assemble_dbar(mf, b);
  EigsOptions opts = ses.eig_opts();
  SpectrumResult sp = lowest_eigenpairs(op, opts);
  BSPointSet bs = bs_points(b);
  LocalizationReport rep =
      ses.cfg.radius > 0.0
          ? localization_mass(sp, 0, mf, bs, ses.cfg.radius)
          : smallest_localization_radius(sp, 0, mf, bs, ses.cfg.epsilon);
  json out = {{"s", rep.s},
              {"C", rep.C},
              {"fraction", rep.fraction},
              {"epsilon", ses.cfg.epsilon},
              {"eigvec_index", rep.eigvec_index}};
  write_text_file(ses.out_path("localize.json"), out.dump(2) + "\n");
  std::cout << "ground-state mass " << fmt12(rep.fraction)
            << " within base distance C=" << fmt12(rep.C) << " -> "
            << ses.out_path("localize.json") << "\n";
  return 0;
}

int cmd_gap(const Session& ses) {
  MetricField mf = family_at(ses.family(), ses.cfg.s, ses.grid());
  PrequantumBundle b = ses.bundle();
  SparseHermitianOperator op = assemble_sharp(mf, b, false);
  SpectrumResult sp = lowest_eigenpairs(op, ses.eig_opts());
  std::uint64_t bs_count = 1;
  for (int i = 0; i < ses.cfg.n; ++i) bs_count *= ses.cfg.k;
  GapReport rep = gap_report(sp, ses.cfg.k, ses.cfg.kappa, ses.cfg.delta,
                             ses.cfg.n, bs_count);
  json out = {{"cluster_size", rep.cluster_size},
              {"gap", rep.gap},
              {"low_edge", rep.low_edge},
              {"next_eigenvalue", rep.next_eigenvalue},
              {"fitted_C", rep.fitted_C},
              {"rr_expected", rep.rr_expected},
              {"rr_verdict", rep.rr_verdict},
              {"pattern_verdict", rep.pattern_verdict}};
  write_text_file(ses.out_path("gap.json"), out.dump(2) + "\n");
  std::cout << "sharp-operator cluster size " << rep.cluster_size << ", gap "
            << fmt12(rep.gap) << ", rr_verdict "
            << (rep.rr_verdict ? "true" : "false") << " -> "
            << ses.out_path("gap.json") << "\n";
  return (rep.rr_verdict && rep.pattern_verdict) ? 0 : 1;
}

int cmd_curvature(const Session& ses) {
  Grid g = ses.grid();
  if (ses.cfg.curv_n_theta > 0 || ses.cfg.curv_n_x > 0)
    g = Grid(ses.cfg.n,
             ses.cfg.curv_n_theta > 0 ? ses.cfg.curv_n_theta : g.n_theta,
             ses.cfg.curv_n_x > 0 ? ses.cfg.curv_n_x : g.n_x);
  ComplexStructureFamily fam = ses.family();
  RicciBoundProbe probe = semiflat_ricci_bound_probe(fam, ses.cfg.s_list, g);
  if (!probe.warning.empty())
    std::cerr << "warning: " << probe.warning << "\n";
  std::ostringstream csv;
  csv << "s,kappa_hat\n";
  for (std::size_t i = 0; i < probe.s_values.size(); ++i)
    csv << fmt12(probe.s_values[i]) << "," << fmt12(probe.kappa_hat[i])
        << "\n";
  write_text_file(ses.out_path("curvature.csv"), csv.str());

  SemiflatnessReport sf = semiflatness_check(fam, g);
  json out = {{"bounded", probe.bounded},
              {"verdict", probe.bounded ? "bounded" : "unbounded-below"},
              {"is_semiflat", sf.is_semiflat},
              {"semiflat_deviation", sf.deviation},
              {"warning", probe.warning}};
  write_text_file(ses.out_path("curvature.json"), out.dump(2) + "\n");
  std::cout << "kappa_hat table -> " << ses.out_path("curvature.csv")
            << "; Ricci bound verdict: "
            << (probe.bounded ? "bounded" : "unbounded-below")
            << ", semiflat: " << (sf.is_semiflat ? "yes" : "no") << "\n";
  // Cross-validation per the Ricci-bound dichotomy: for integrable families
  // the two verdicts must agree.
  if (fam.claims_integrable && sf.is_semiflat != probe.bounded) {
    std::cout << "dichotomy cross-check FAILED\n";
    return 1;
  }
  return 0;
}

int cmd_verify(const Session& ses) {
  auto results = run_verify_suite(ses.cfg.seed);
  int failures = 0;
  json items = json::array();
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << "\n";
    if (!r.pass) ++failures;
    items.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  json out = {{"failures", failures}, {"checks", items}};
  write_text_file(ses.out_path("verify.json"), out.dump(2) + "\n");
  std::cout << results.size() - failures << "/" << results.size()
            << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gqlab: lattice spectral geometry of prequantized torus fibrations"};
  app.require_subcommand(1);

  std::string config_path, grid_str, s_list_str;
  Session ses;

  app.add_option("--config", config_path, "config file ([section] key=value)");
  app.add_option("--preset", ses.cfg.preset,
                 "family preset (flat, semiflat, nonsemiflat, heart, "
                 "potential, twisted)")
      ->capture_default_str();
  app.add_option("--family-file", ses.cfg.family_file,
                 "tabulated family file (overrides --preset)");
  app.add_option("--out", ses.cfg.out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--seed", ses.cfg.seed, "eigensolver seed")
      ->capture_default_str();
  app.add_option("--grid", grid_str,
                 "lattice resolution NTHxNX (default 64x64 for n=1, 16x16 "
                 "for n=2)");
  app.add_option("--n", ses.cfg.n, "half-dimension of the torus")
      ->capture_default_str();
  app.add_option("--k", ses.cfg.k, "prequantum level")->capture_default_str();
  app.add_option("--s", s_list_str,
                 "family parameter(s): one value or a decreasing list "
                 "(default 0.4,0.2,0.1,0.05 for sweeps, 1 otherwise)");
  app.add_option("--m", ses.cfg.m, "number of eigenvalues")
      ->capture_default_str();
  app.add_option("--tol", ses.cfg.tol, "eigensolver residual tolerance")
      ->capture_default_str();
  app.add_option("--operator", ses.cfg.operator_kind,
                 "operator kind: bochner|sharp|dbar|circle_reduced")
      ->capture_default_str();
  app.add_option("--method", ses.cfg.method, "eigensolver: auto|lanczos|dense")
      ->capture_default_str();
  app.add_option("--kappa", ses.cfg.kappa, "Ricci lower-bound constant")
      ->capture_default_str();
  app.add_option("--delta", ses.cfg.delta, "almost-complex deviation delta")
      ->capture_default_str();
  app.add_option("--epsilon", ses.cfg.epsilon, "localization mass defect")
      ->capture_default_str();
  app.add_option("--radius", ses.cfg.radius,
                 "localization radius C (0 = dyadic search)")
      ->capture_default_str();

  app.add_subcommand("bs", "enumerate Bohr-Sommerfeld points (CSV)");
  app.add_subcommand("assemble", "assemble an operator and export it");
  app.add_subcommand("spectrum", "lowest eigenvalues of an operator (CSV)");
  app.add_subcommand("sweep", "eigenvalue convergence sweep over s (CSV)");
  app.add_subcommand("limit", "limit spectrum table (CSV)");
  app.add_subcommand("localize", "ground-state localization report (JSON)");
  app.add_subcommand("gap", "spectral gap / Riemann-Roch report (JSON)");
  app.add_subcommand("curvature", "Ricci bound diagnostics (CSV+JSON)");
  app.add_subcommand("verify", "run the full invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) ses.cfg.load_file(config_path);
    // Flags override the file: reparse argv on top of the loaded config.
    {
      CLI::App overlay;
      overlay.allow_extras();
      overlay.add_option("--preset", ses.cfg.preset);
      overlay.add_option("--family-file", ses.cfg.family_file);
      overlay.add_option("--out", ses.cfg.out_dir);
      overlay.add_option("--seed", ses.cfg.seed);
      overlay.add_option("--n", ses.cfg.n);
      overlay.add_option("--k", ses.cfg.k);
      overlay.add_option("--m", ses.cfg.m);
      overlay.add_option("--tol", ses.cfg.tol);
      overlay.add_option("--operator", ses.cfg.operator_kind);
      overlay.add_option("--method", ses.cfg.method);
      overlay.add_option("--kappa", ses.cfg.kappa);
      overlay.add_option("--delta", ses.cfg.delta);
      overlay.add_option("--epsilon", ses.cfg.epsilon);
      overlay.add_option("--radius", ses.cfg.radius);
      std::vector<std::string> args(argv + 1, argv + argc);
      std::reverse(args.begin(), args.end());
      overlay.parse(args);
    }
    if (!grid_str.empty()) ses.cfg.set("lattice.grid", grid_str);
    if (!s_list_str.empty()) {
      ses.cfg.s_list = parse_double_list(s_list_str);
      ses.cfg.s = ses.cfg.s_list.front();
    }
    ses.cfg.validate();

    if (app.got_subcommand("bs")) return cmd_bs(ses);
    if (app.got_subcommand("assemble")) return cmd_assemble(ses);
    if (app.got_subcommand("spectrum")) return cmd_spectrum(ses);
    if (app.got_subcommand("sweep")) return cmd_sweep(ses);
    if (app.got_subcommand("limit")) return cmd_limit(ses);
    if (app.got_subcommand("localize")) return cmd_localize(ses);
    if (app.got_subcommand("gap")) return cmd_gap(ses);
    if (app.got_subcommand("curvature")) return cmd_curvature(ses);
    if (app.got_subcommand("verify")) return cmd_verify(ses);
  } catch (const Error& e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what()
              << "\n";
    return e.kind() == ErrorKind::config ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
