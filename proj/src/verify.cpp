#include "gqlab/verify.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "gqlab/analysis.hpp"
#include "gqlab/curvature.hpp"
#include "gqlab/io.hpp"

namespace gqlab {

namespace {

struct Suite {
  std::vector<CheckResult> results;
  std::uint64_t seed;

  void run(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = body();  // empty or informational detail = pass
      r.pass = true;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

std::vector<double> dense_spectrum(const SparseHermitianOperator& op) {
  Eigen::MatrixXcd M = op.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M,
                                                     Eigen::EigenvaluesOnly);
  return std::vector<double>(es.eigenvalues().data(),
                             es.eigenvalues().data() + op.dim);
}

double max_abs_diff(const std::vector<double>& a,
                    const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

std::vector<CheckResult> run_verify_suite(std::uint64_t seed) {
  Suite suite;
  suite.seed = seed;
  std::mt19937_64 rng(seed);

  // ---- model -------------------------------------------------------------

  suite.run("model.metric-spd-unit-det", [&] {
    struct Case { const char* preset; int n; double s; Grid grid; };
    std::vector<Case> cases = {
        {"flat", 1, 0.3, Grid(1, 16, 16)},
        {"semiflat", 1, 0.2, Grid(1, 16, 16)},
        {"nonsemiflat", 1, 0.2, Grid(1, 16, 16)},
        {"heart", 1, 0.2, Grid(1, 16, 16)},
        {"potential", 2, 0.3, Grid(2, 8, 8)},
    };
    double worst = 0.0;
    for (const auto& c : cases) {
      MetricField mf = family_at(preset_family(c.preset, c.n), c.s, c.grid);
      for (const auto& g : mf.g) {
        worst = std::max(worst, std::abs(g.determinant() - 1.0));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            g, Eigen::EigenvaluesOnly);
        require(es.eigenvalues().minCoeff() > 0.0, "metric not SPD");
      }
    }
    require(worst <= 1e-10, "det defect " + fmt12(worst));
    return "max |det g - 1| = " + fmt12(worst);
  });

  suite.run("model.block-diagonal-for-iQ", [&] {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd B(2, 2);
    B << 2.0 + nd(rng) * 0.1, 0.3, 0.3, 1.5 + nd(rng) * 0.1;
    Eigen::MatrixXd Q = 0.5 * (B + B.transpose());
    Eigen::MatrixXcd A = std::complex<double>(0, 1) * Q;
    Eigen::MatrixXd g = metric_from_A(A);
    double off = g.topRightCorner(2, 2).cwiseAbs().maxCoeff();
    double dq = (g.topLeftCorner(2, 2) - Q).cwiseAbs().maxCoeff();
    double dqi =
        (g.bottomRightCorner(2, 2) - Q.inverse()).cwiseAbs().maxCoeff();
    require(off == 0.0 && dq <= 1e-14 && dqi <= 1e-14,
            "P=0 metric is not block diagonal Q / Q^{-1}");
    return std::string();
  });

  suite.run("model.linear-family-homogeneity", [&] {
    auto fam = preset_family("semiflat", 1);
    for (double s : {0.4, 0.1, 0.025}) {
      for (double x : {0.0, 0.31, 0.77}) {
        double th = 1.1;
        Eigen::MatrixXcd a = fam.at(s, &x, &th);
        Eigen::MatrixXcd a0 = fam.leading_at(&x, &th);
        require((a - s * a0).cwiseAbs().maxCoeff() == 0.0,
                "A(s) != s A0 exactly");
      }
    }
    return std::string();
  });

  suite.run("model.integrability-rate", [&] {
    auto flat = preset_family("flat", 1);
    double r_flat = integrability_residual(flat, 0.5, Grid(1, 16, 16));
    require(r_flat <= 1e-13, "n=1 residual must vanish, got " + fmt12(r_flat));

    auto pot = preset_family("potential", 2);
    double coarse = integrability_residual(pot, 0.7, Grid(2, 8, 8));
    double fine = integrability_residual(pot, 0.7, Grid(2, 16, 16));
    require(coarse > 1e-6, "expected nonzero truncation on coarse grid");
    require(coarse / fine >= 3.0,
            "O(h^2) rate violated: " + fmt12(coarse) + " -> " + fmt12(fine));

    auto tw = preset_family("twisted", 2);
    double r_tw = integrability_residual(tw, 1.0, Grid(2, 16, 16));
    require(r_tw > 0.25, "twisted preset should be visibly non-integrable");
    return "rate " + fmt12(coarse / fine) + ", twisted residual " +
           fmt12(r_tw);
  });

  // ---- bundle ------------------------------------------------------------

  suite.run("bundle.bs-count-off-sets", [&] {
    std::uniform_real_distribution<double> ud(0.0, kTwoPi);
    for (int n : {1, 2})
      for (int k : {1, 2, 3}) {
        std::vector<double> offs(n);
        for (auto& o : offs) o = ud(rng);
        auto set = bs_points(PrequantumBundle(n, k, offs));
        std::size_t expect = 1;
        for (int i = 0; i < n; ++i) expect *= k;
        require(set.points.size() == expect, "count != k^n");
      }
    return std::string();
  });

  suite.run("bundle.strict-level-divisors", [&] {
    PrequantumBundle bundle(1, 6, {0.3});
    auto b6 = bs_points(bundle);
    for (const auto& p : b6.points) {
      require(6 % p.strict_level == 0, "strict level does not divide k");
      // The point must lie in B_{strict} and its strict level be minimal.
      for (int kp = 1; kp < p.strict_level; ++kp) {
        bool in_kp = true;
        for (int i = 0; i < 1; ++i) {
          double v = kp * (p.b[i] + 0.3 / kTwoPi);
          in_kp = in_kp && std::abs(v - std::round(v)) < 1e-9;
        }
        require(!in_kp, "strict level not minimal");
      }
    }
    // Divisor monotonicity: B_2 and B_3 lie inside B_6.
    for (int kp : {2, 3}) {
      auto small = bs_points(PrequantumBundle(1, kp, {0.3}));
      for (const auto& p : small.points) {
        bool found = false;
        for (const auto& q : b6.points)
          found = found || std::abs(p.b[0] - q.b[0]) < 1e-9;
        require(found, "divisor monotonicity violated");
      }
    }
    return std::string();
  });

  suite.run("bundle.holonomy-vs-enumeration", [&] {
    PrequantumBundle bundle(2, 3, {1.0, 2.5});
    auto set = bs_points(bundle);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    auto is_listed = [&](const std::vector<double>& b) {
      for (const auto& p : set.points) {
        double d = 0;
        for (int i = 0; i < 2; ++i)
          d = std::max(d, std::min(std::abs(b[i] - p.b[i]),
                                   1.0 - std::abs(b[i] - p.b[i])));
        if (d < 1e-9) return true;
      }
      return false;
    };
    auto trivial = [&](const std::vector<double>& b) {
      for (auto ph : fiber_holonomy(bundle, b))
        if (std::abs(ph - std::complex<double>(1, 0)) > 1e-9) return false;
      return true;
    };
    for (const auto& p : set.points)
      require(trivial(p.b), "BS point without trivial holonomy");
    int agree = 0;
    for (int t = 0; t < 100; ++t) {
      std::vector<double> b = {ud(rng), ud(rng)};
      if (is_listed(b) == trivial(b)) ++agree;
    }
    require(agree == 100, "holonomy and enumeration disagree");
    return std::string();
  });

  // ---- lattice -----------------------------------------------------------

  suite.run("lattice.gauge-invariance", [&] {
    Grid grid(1, 16, 16);
    PrequantumBundle bundle(1, 2);
    MetricField mf = family_at(preset_family("flat", 1), 0.7, grid);
    SparseHermitianOperator op = assemble_bochner(mf, bundle);
    Eigen::MatrixXcd M = op.dense();
    std::uniform_real_distribution<double> ud(0.0, kTwoPi);
    Eigen::VectorXcd d(op.dim);
    for (std::int64_t i = 0; i < op.dim; ++i) d[i] = std::polar(1.0, ud(rng));
    Eigen::MatrixXcd Mg = d.asDiagonal() * M *
                          d.conjugate().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e1(M,
                                                       Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e2(Mg,
                                                       Eigen::EigenvaluesOnly);
    double diff = (e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff();
    require(diff <= 1e-10, "spectrum moved by " + fmt12(diff));
    return "max shift " + fmt12(diff);
  });

  suite.run("lattice.measure-scaling", [&] {
    Grid grid(1, 16, 16);
    PrequantumBundle bundle(1, 1);
    MetricField mf = family_at(preset_family("semiflat", 1), 0.3, grid);
    SparseHermitianOperator a = assemble_bochner(mf, bundle);
    std::vector<double> w(grid.sites(), 7.0 * grid.cell_volume());
    SparseHermitianOperator b = assemble_bochner(mf, bundle, w);
    double diff = max_abs_diff(dense_spectrum(a), dense_spectrum(b));
    double scale = std::max(1.0, a.norm_inf());
    require(diff <= 1e-12 * scale, "spectrum moved by " + fmt12(diff));
    return "max shift " + fmt12(diff);
  });

  suite.run("lattice.chern-flux", [&] {
    for (int k : {1, 3}) {
      GaugeLattice gl(Grid(1, 12, 20), PrequantumBundle(1, k));
      Multi base{};
      double flux = gl.plaquette_flux_sum(0, base);
      require(std::abs(flux - kTwoPi * k) <= 1e-9,
              "n=1 flux " + fmt12(flux) + " != 2 pi k");
    }
    GaugeLattice gl2(Grid(2, 6, 8), PrequantumBundle(2, 2));
    for (int plane = 0; plane < 2; ++plane) {
      Multi base{};
      base[1 - plane] = 3;  // off-origin base point in the other plane
      base[2 + (1 - plane)] = 2;
      double flux = gl2.plaquette_flux_sum(plane, base);
      require(std::abs(flux - kTwoPi * 2) <= 1e-9,
              "n=2 flux " + fmt12(flux) + " != 2 pi k");
    }
    return std::string();
  });

  suite.run("lattice.h-refinement", [&] {
    PrequantumBundle bundle(1, 1);
    EigsOptions opts;
    opts.m = 1;
    opts.tol = 1e-9;
    opts.seed = seed;
    double err[2] = {0.0, 0.0};
    int idx = 0;
    for (int npts : {32, 64}) {
      Grid grid(1, npts, npts);
      MetricField mf = family_at(preset_family("flat", 1), 1.0, grid);
      SparseHermitianOperator op = assemble_bochner(mf, bundle);
      opts.method = npts == 32 ? EigsOptions::Method::automatic
                               : EigsOptions::Method::lanczos;
      SpectrumResult sp = lowest_eigenpairs(op, opts);
      err[idx++] = std::abs(sp.values[0] - 1.0);  // Landau level k(2N+1)
    }
    require(err[0] / err[1] >= 3.0,
            "refinement ratio " + fmt12(err[0] / err[1]) + " < 3");
    return "errors " + fmt12(err[0]) + " -> " + fmt12(err[1]);
  });

  suite.run("lattice.hermitian-psd", [&] {
    struct Case { const char* preset; int n; double s; int k; Grid grid; };
    std::vector<Case> cases = {
        {"flat", 1, 1.0, 2, Grid(1, 24, 24)},
        {"heart", 1, 0.4, 1, Grid(1, 24, 24)},
        {"potential", 2, 0.5, 1, Grid(2, 8, 8)},
    };
    std::ostringstream note;
    for (const auto& c : cases) {
      MetricField mf = family_at(preset_family(c.preset, c.n), c.s, c.grid);
      SparseHermitianOperator op =
          assemble_bochner(mf, PrequantumBundle(c.n, c.k));
      double herm = op.hermiticity_defect();
      require(herm <= 1e-13 * std::max(1.0, op.norm_inf()),
              std::string(c.preset) + ": hermiticity defect " + fmt12(herm));
      EigsOptions opts;
      opts.m = 1;
      opts.tol = 1e-8;
      opts.seed = seed;
      SpectrumResult sp = lowest_eigenpairs(op, opts);
      require(sp.values[0] >= -1e-10,
              std::string(c.preset) + ": negative Rayleigh quotient " +
                  fmt12(sp.values[0]));
      note << c.preset << " min " << fmt12(sp.values[0]) << "; ";
    }
    return note.str();
  });

  suite.run("lattice.circle-reduced-identity", [&] {
    Grid grid(1, 16, 16);
    PrequantumBundle bundle(1, 2);
    MetricField mf = family_at(preset_family("semiflat", 1), 0.35, grid);
    SparseHermitianOperator boch = assemble_bochner(mf, bundle);
    SparseHermitianOperator circ = assemble_circle_reduced(mf, bundle);
    boch.shift_diagonal(static_cast<double>(bundle.k) * bundle.k);
    Eigen::MatrixXcd diff = circ.dense() - boch.dense();
    double rel = diff.cwiseAbs().maxCoeff() / boch.norm_inf();
    require(rel <= 1e-12, "identity defect " + fmt12(rel));
    return "relative defect " + fmt12(rel);
  });

  // ---- eigen -------------------------------------------------------------

  suite.run("eigen.residual-certificates", [&] {
    Grid grid(1, 32, 32);
    PrequantumBundle bundle(1, 2);
    MetricField mf = family_at(preset_family("flat", 1), 1.0, grid);
    SparseHermitianOperator op = assemble_dbar(mf, bundle);
    EigsOptions opts;
    opts.m = 6;
    opts.tol = 1e-7;
    opts.seed = seed;
    opts.method = EigsOptions::Method::lanczos;
    SpectrumResult sp = lowest_eigenpairs(op, opts);
    for (int i = 0; i < opts.m; ++i) {
      Eigen::VectorXcd v = sp.vectors.col(i);
      double r = (op.apply(v) - sp.values[i] * v).norm();
      require(r <= opts.tol * 1.5, "residual " + fmt12(r));
      require(std::abs(v.norm() - 1.0) <= 1e-8, "vector not normalized");
    }
    // Orthonormality within 1e-8.
    Eigen::MatrixXcd gram =
        sp.vectors.adjoint() * sp.vectors -
        Eigen::MatrixXcd::Identity(opts.m, opts.m);
    require(gram.cwiseAbs().maxCoeff() <= 1e-8, "vectors not orthonormal");
    return std::string();
  });

  suite.run("eigen.lanczos-vs-dense", [&] {
    Grid grid(1, 32, 32);
    PrequantumBundle bundle(1, 1);
    MetricField mf = family_at(preset_family("flat", 1), 1.0, grid);
    SparseHermitianOperator op = assemble_bochner(mf, bundle);
    EigsOptions opts;
    opts.m = 5;
    opts.tol = 1e-9;
    opts.seed = seed;
    opts.method = EigsOptions::Method::lanczos;
    SpectrumResult a = lowest_eigenpairs(op, opts);
    opts.method = EigsOptions::Method::dense;
    SpectrumResult b = lowest_eigenpairs(op, opts);
    double diff = max_abs_diff(a.values, b.values);
    require(diff <= 1e-8, "solver disagreement " + fmt12(diff));
    return "max diff " + fmt12(diff);
  });

  suite.run("eigen.seed-reproducibility", [&] {
    Grid grid(1, 32, 32);
    PrequantumBundle bundle(1, 1);
    MetricField mf = family_at(preset_family("semiflat", 1), 0.2, grid);
    SparseHermitianOperator op = assemble_dbar(mf, bundle);
    EigsOptions opts;
    opts.m = 4;
    opts.tol = 1e-9;
    opts.method = EigsOptions::Method::lanczos;
    opts.seed = 7;
    SpectrumResult a = lowest_eigenpairs(op, opts);
    SpectrumResult b = lowest_eigenpairs(op, opts);
    opts.seed = 8;
    SpectrumResult c = lowest_eigenpairs(op, opts);
    require(max_abs_diff(a.values, b.values) <= 1e-10,
            "same seed, different values");
    require(max_abs_diff(a.values, c.values) <= 1e-8,
            "cross-seed disagreement");
    return std::string();
  });

  // ---- limit -------------------------------------------------------------

  suite.run("limit.cumulative-identity", [&] {
    for (int n = 1; n <= 4; ++n) {
      std::uint64_t cum = 0;
      for (int N = 0; N <= 20; ++N) {
        cum += binom(N + n - 1, n - 1);
        require(cum == binom(N + n, n), "cumulative identity failed");
      }
    }
    return std::string();
  });

  suite.run("limit.lambda-vanishes-iff-bs", [&] {
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int k : {1, 2, 3}) {
      for (const auto& p : bs_points(PrequantumBundle(1, k)).points)
        require(lambda_k_b(k, p.b).value <= 1e-20, "lambda(k, BS) != 0");
      for (int t = 0; t < 50; ++t) {
        std::vector<double> b = {ud(rng)};
        double frac = std::abs(b[0] * k - std::round(b[0] * k));
        if (frac > 1e-3)
          require(lambda_k_b(k, b).value > 1e-7, "lambda = 0 off B_k");
      }
    }
    return std::string();
  });

  suite.run("limit.level-index-inverse", [&] {
    for (int n : {1, 2, 3})
      for (std::uint64_t bs : {1ull, 2ull, 4ull})
        for (int N = 0; N <= 6; ++N) {
          std::int64_t j = static_cast<std::int64_t>(bs * binom(N + n, n));
          require(level_index_N(j, n, bs) == N, "inverse property failed");
          require(level_index_N(j + 1, n, bs) == N + 1,
                  "inverse property failed at j+1");
        }
    return std::string();
  });

  suite.run("limit.fiber-operator-vs-lambda", [&] {
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    EigsOptions opts;
    opts.m = 1;
    opts.tol = 1e-10;
    opts.seed = seed;
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      int k = 1 + static_cast<int>(rng() % 3);
      std::vector<double> b = {ud(rng)};
      SparseHermitianOperator op = assemble_fiber_operator(b, k, {}, 256);
      SpectrumResult sp = lowest_eigenpairs(op, opts);
      worst = std::max(worst,
                       std::abs(sp.values[0] - lambda_k_b(k, b).value));
    }
    require(worst <= 1e-3, "fiber-operator disagreement " + fmt12(worst));
    return "max diff " + fmt12(worst);
  });

  // ---- analysis ----------------------------------------------------------

  suite.run("analysis.zero-cluster-count", [&] {
    Grid grid(1, 64, 64);
    PrequantumBundle bundle(1, 1);
    MetricField mf = family_at(preset_family("semiflat", 1), 0.05, grid);
    SparseHermitianOperator op = assemble_dbar(mf, bundle);
    EigsOptions opts;
    opts.m = 4;
    opts.tol = 1e-7;
    opts.seed = seed;
    SpectrumResult sp = lowest_eigenpairs(op, opts);
    int count = counting_window(sp, -0.5, 0.5, 1e-6);
    require(count == 1, "zero cluster count " + std::to_string(count));
    return std::string();
  });

  suite.run("analysis.window-monotone-additive", [&] {
    SpectrumResult sp;
    sp.values = {0.01, 0.02, 1.98, 2.01, 3.96};
    int ab = counting_window(sp, -0.5, 1.0, 1e-9);
    int bc = counting_window(sp, 1.0, 3.0, 1e-9);
    int ac = counting_window(sp, -0.5, 3.0, 1e-9);
    require(ab + bc == ac, "additivity failed");
    require(counting_window(sp, -0.5, 0.5, 1e-9) <= ab, "monotonicity failed");
    bool threw = false;
    try {
      counting_window(sp, 0.02, 1.0, 1e-3);
    } catch (const Error& e) {
      threw = e.kind() == ErrorKind::ill_posed_window;
    }
    require(threw, "edge collision not detected");
    return std::string();
  });

  suite.run("analysis.localization-monotone", [&] {
    Grid grid(1, 64, 64);
    PrequantumBundle bundle(1, 1);
    auto fam = preset_family("flat", 1);
    BSPointSet bs = bs_points(bundle);
    EigsOptions opts;
    opts.m = 1;
    opts.tol = 1e-7;
    opts.seed = seed;
    double prev_fraction_c = -1.0;
    MetricField mf01 = family_at(fam, 0.1, grid);
    SparseHermitianOperator op01 = assemble_dbar(mf01, bundle);
    SpectrumResult sp01 = lowest_eigenpairs(op01, opts);
    for (double c : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      double f = localization_mass(sp01, 0, mf01, bs, c).fraction;
      require(f >= prev_fraction_c - 1e-12, "fraction decreased in C");
      prev_fraction_c = f;
    }
    double prev = -1.0;
    for (double s : {0.2, 0.1, 0.05}) {
      MetricField mf = family_at(fam, s, grid);
      SparseHermitianOperator op = assemble_dbar(mf, bundle);
      SpectrumResult sp = lowest_eigenpairs(op, opts);
      double f = localization_mass(sp, 0, mf, bs, 2.0).fraction;
      require(f >= prev - 0.02, "fraction dropped by more than 0.02 in 1/s");
      prev = f;
    }
    return std::string();
  });

  suite.run("analysis.rayleigh-floor-presets", [&] {
    EigsOptions opts;
    opts.m = 1;
    opts.tol = 1e-7;
    opts.seed = seed;
    opts.method = EigsOptions::Method::lanczos;
    Grid grid(1, 64, 64);
    std::ostringstream note;
    struct Case { const char* preset; double s; int k; double lo, hi; };
    std::vector<Case> cases = {
        {"flat", 1.0, 1, 0.3, 0.7},
        {"flat", 1.0, 2, 0.2, 0.3},
        {"semiflat", 0.5, 1, 0.3, 0.7},
        {"heart", 0.5, 1, 0.3, 0.7},
        {"nonsemiflat", 0.5, 1, 0.3, 0.7},
    };
    for (const auto& c : cases) {
      MetricField mf = family_at(preset_family(c.preset, 1), c.s, grid);
      RegionBox region{{c.lo}, {c.hi}};
      auto rep = rayleigh_floor_probe(mf, PrequantumBundle(1, c.k), region,
                                      opts);
      require(rep.verdict, std::string(c.preset) + ": floor " +
                               fmt12(rep.floor) + " vs lambda_min " +
                               fmt12(rep.lambda_min));
      note << c.preset << "/k=" << c.k << " ok; ";
    }
    // Region containing a BS point must be rejected.
    MetricField mf = family_at(preset_family("flat", 1), 1.0, grid);
    bool threw = false;
    try {
      rayleigh_floor_probe(mf, PrequantumBundle(1, 1),
                           RegionBox{{-0.2}, {0.2}}, opts);
    } catch (const Error& e) {
      threw = e.kind() == ErrorKind::precondition;
    }
    require(threw, "BS-touching region not rejected");
    return note.str();
  });

  suite.run("analysis.gap-rr-verdicts", [&] {
    EigsOptions opts;
    opts.tol = 1e-6;
    opts.seed = seed;
    std::ostringstream note;
    for (int k : {1, 2, 3}) {
      Grid grid(1, 64, 64);
      PrequantumBundle bundle(1, k);
      MetricField mf = family_at(preset_family("flat", 1), 1.0, grid);
      SparseHermitianOperator op = assemble_sharp(mf, bundle, false);
      opts.m = k + 3;
      SpectrumResult sp = lowest_eigenpairs(op, opts);
      GapReport rep = gap_report(sp, k, 0.0, 0.05, 1, k);
      require(rep.rr_verdict && rep.pattern_verdict,
              "flat k=" + std::to_string(k) + " verdict failed");
      note << "k=" << k << " gap " << fmt12(rep.gap) << "; ";
    }
    {
      Grid grid(2, 16, 16);
      PrequantumBundle bundle(2, 1);
      MetricField mf = family_at(preset_family("flat", 2), 1.0, grid);
      SparseHermitianOperator op = assemble_sharp(mf, bundle, false);
      opts.m = 4;
      SpectrumResult sp = lowest_eigenpairs(op, opts);
      GapReport rep = gap_report(sp, 1, 0.0, 0.05, 2, 1);
      require(rep.rr_verdict, "flat n=2 k=1 rr verdict failed");
      note << "n=2 gap " << fmt12(rep.gap);
    }
    // A gapless synthetic spectrum must fail the pattern check.
    SpectrumResult fake;
    for (int i = 0; i <= 20; ++i) fake.values.push_back(0.2 * i);
    GapReport bad = gap_report(fake, 1, 0.0, 0.05, 1, 1);
    require(!bad.pattern_verdict, "gapless spectrum passed pattern check");
    return note.str();
  });

  // ---- curvature ---------------------------------------------------------

  suite.run("curvature.fstarf-identity", [&] {
    double worst = 0.0;
    for (const char* preset : {"flat", "semiflat", "heart"}) {
      MetricField mf =
          family_at(preset_family(preset, 1), 0.3, Grid(1, 16, 16));
      CurvatureReport rep = ricci_field(mf);
      worst = std::max(worst, rep.fstarf_defect);
    }
    require(worst <= 1e-10, "F*F != g, defect " + fmt12(worst));
    return "max defect " + fmt12(worst);
  });

  suite.run("curvature.circle-bundle-components", [&] {
    MetricField mf = family_at(preset_family("flat", 1), 0.5, Grid(1, 16, 16));
    CurvatureReport rep = ricci_field(mf);
    require(rep.ric_hat_mixed == 0.0, "mixed component nonzero");
    require(rep.ric_hat_fiber == 0.5, "fiber component != n/2");
    double d = 0.0;
    for (std::int64_t p = 0; p < mf.grid.sites(); ++p)
      d = std::max(d, (rep.ricci_hat_base[p] - (rep.ricci[p] - 0.5 * mf.g[p]))
                          .cwiseAbs()
                          .maxCoeff());
    require(d == 0.0, "base component formula broken");
    return std::string();
  });

  suite.run("curvature.flat-ricci-zero", [&] {
    MetricField mf = family_at(preset_family("flat", 1), 0.7, Grid(1, 64, 64));
    CurvatureReport rep = ricci_field(mf);
    double worst = 0.0;
    for (const auto& r : rep.ricci)
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    require(worst <= 1e-8, "flat Ricci " + fmt12(worst));
    return "max |Ric| = " + fmt12(worst);
  });

  return suite.results;
}

}  // namespace gqlab
