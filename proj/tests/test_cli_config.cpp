#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gqlab/config.hpp"
#include "gqlab/errors.hpp"
#include "gqlab/eigensolver.hpp"
#include "gqlab/lattice.hpp"

using namespace gqlab;

TEST_CASE("config file parsing with sections and overrides") {
  std::string path =
      (std::filesystem::temp_directory_path() / "gqlab_cfg.txt").string();
  {
    std::ofstream out(path);
    out << "# comment\n"
        << "[model]\n"
        << "preset = semiflat\n"
        << "n = 1\n"
        << "[bundle]\n"
        << "k = 2\n"
        << "[lattice]\n"
        << "grid = 32x48\n"
        << "[eigen]\n"
        << "m = 4\n"
        << "seed = 7\n"
        << "[analysis]\n"
        << "s_list = 0.4, 0.2, 0.1\n";
  }
  RunConfig cfg;
  cfg.load_file(path);
  CHECK(cfg.preset == "semiflat");
  CHECK(cfg.k == 2);
  CHECK(cfg.n_theta == 32);
  CHECK(cfg.n_x == 48);
  CHECK(cfg.m == 4);
  CHECK(cfg.seed == 7);
  REQUIRE(cfg.s_list.size() == 3);
  CHECK(cfg.s_list[1] == doctest::Approx(0.2));
  cfg.validate();
  std::remove(path.c_str());
}

TEST_CASE("malformed configs raise config errors") {
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.set("model.unknown_key", "1"), Error);
  CHECK_THROWS_AS(cfg.set("bundle.k", "two"), Error);
  cfg.preset = "not-a-preset";
  try {
    cfg.validate();
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
}

TEST_CASE("determinism contract: identical config and seed reproduce "
          "eigenvalues") {
  Grid grid(1, 32, 32);
  PrequantumBundle bundle(1, 1);
  MetricField mf = family_at(preset_family("semiflat", 1), 0.2, grid);
  SparseHermitianOperator op = assemble_dbar(mf, bundle);
  EigsOptions opts;
  opts.m = 4;
  opts.tol = 1e-8;
  opts.seed = 42;
  opts.method = EigsOptions::Method::lanczos;
  SpectrumResult a = lowest_eigenpairs(op, opts);
  SpectrumResult b = lowest_eigenpairs(op, opts);
  for (int i = 0; i < opts.m; ++i)
    CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-10);
}
