#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gqlab {

// Run configuration shared by every CLI subcommand. Flat [section] key=value
// text files; command-line flags override file values.
struct RunConfig {
  // [model]
  std::string preset = "flat";
  std::string family_file;  // overrides preset when set
  int n = 1;
  double s = 1.0;

  // [bundle]
  int k = 1;
  std::vector<double> offsets;

  // [lattice]
  int n_theta = 0;  // 0 = default (64 for n=1, 16 for n=2)
  int n_x = 0;
  std::string operator_kind = "dbar";

  // [eigen]
  int m = 6;
  double tol = 1e-8;
  std::uint64_t seed = 42;
  std::string method = "auto";

  // [analysis]
  std::vector<double> s_list = {0.4, 0.2, 0.1, 0.05};
  double epsilon = 0.1;    // localization mass defect
  double radius = 0.0;     // 0 = search the dyadic grid
  double kappa = 0.0;
  double delta = 0.05;
  std::vector<double> region_lo = {0.3};
  std::vector<double> region_hi = {0.7};
  double window_lo = -0.5, window_hi = 0.5;

  // [limit]
  int N_max = 8;
  int d_max = 6;

  // [curvature]
  int curv_n_theta = 0;  // 0 = lattice default
  int curv_n_x = 0;

  // [output]
  std::string out_dir = "out";

  void load_file(const std::string& path);
  void set(const std::string& dotted_key, const std::string& value);
  void validate() const;

  int default_n_theta() const;
  int default_n_x() const;
};

}  // namespace gqlab
