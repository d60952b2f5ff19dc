#include "gqlab/config.hpp"

#include <fstream>

#include "gqlab/errors.hpp"
#include "gqlab/family.hpp"
#include "gqlab/io.hpp"

namespace gqlab {

namespace {

int to_int(const std::string& v) {
  char* end = nullptr;
  long r = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    fail(ErrorKind::config, "bad integer '" + v + "'");
  return static_cast<int>(r);
}

double to_double(const std::string& v) {
  char* end = nullptr;
  double r = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    fail(ErrorKind::config, "bad number '" + v + "'");
  return r;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  std::string v = trim(raw);
  if (key == "model.preset") preset = v;
  else if (key == "model.family_file") family_file = v;
  else if (key == "model.n") n = to_int(v);
  else if (key == "model.s") s = to_double(v);
  else if (key == "bundle.k") k = to_int(v);
  else if (key == "bundle.offsets") offsets = parse_double_list(v);
  else if (key == "lattice.n_theta") n_theta = to_int(v);
  else if (key == "lattice.n_x") n_x = to_int(v);
  else if (key == "lattice.grid") {
    auto parts = split(v, 'x');
    if (parts.size() != 2) fail(ErrorKind::config, "grid must be NTHxNX");
    n_theta = to_int(trim(parts[0]));
    n_x = to_int(trim(parts[1]));
  } else if (key == "lattice.operator") operator_kind = v;
  else if (key == "eigen.m") m = to_int(v);
  else if (key == "eigen.tol") tol = to_double(v);
  else if (key == "eigen.seed") seed = static_cast<std::uint64_t>(to_int(v));
  else if (key == "eigen.method") method = v;
  else if (key == "analysis.s_list") s_list = parse_double_list(v);
  else if (key == "analysis.epsilon") epsilon = to_double(v);
  else if (key == "analysis.radius") radius = to_double(v);
  else if (key == "analysis.kappa") kappa = to_double(v);
  else if (key == "analysis.delta") delta = to_double(v);
  else if (key == "analysis.region_lo") region_lo = parse_double_list(v);
  else if (key == "analysis.region_hi") region_hi = parse_double_list(v);
  else if (key == "analysis.window_lo") window_lo = to_double(v);
  else if (key == "analysis.window_hi") window_hi = to_double(v);
  else if (key == "limit.N_max") N_max = to_int(v);
  else if (key == "limit.d_max") d_max = to_int(v);
  else if (key == "curvature.n_theta") curv_n_theta = to_int(v);
  else if (key == "curvature.n_x") curv_n_x = to_int(v);
  else if (key == "output.dir") out_dir = v;
  else fail(ErrorKind::config, "unknown config key '" + key + "'");
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot open config '" + path + "'");
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::config, path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    if (section.empty())
      fail(ErrorKind::config,
           path + ":" + std::to_string(lineno) + ": key outside a [section]");
    set(section + "." + key, t.substr(eq + 1));
  }
}

int RunConfig::default_n_theta() const { return n == 1 ? 64 : 16; }
int RunConfig::default_n_x() const { return n == 1 ? 64 : 16; }

void RunConfig::validate() const {
  if (n < 1) fail(ErrorKind::config, "n must be >= 1");
  if (k < 1) fail(ErrorKind::config, "k must be >= 1");
  if (m < 1) fail(ErrorKind::config, "m must be >= 1");
  if (tol <= 0) fail(ErrorKind::config, "tol must be > 0");
  if (s <= 0) fail(ErrorKind::config, "s must be > 0");
  for (double v : s_list)
    if (v <= 0) fail(ErrorKind::config, "s values must be > 0");
  if (family_file.empty()) {
    bool known = false;
    for (const auto& p : preset_names()) known = known || p == preset;
    if (!known) fail(ErrorKind::config, "unknown preset '" + preset + "'");
  }
  if (method != "auto" && method != "lanczos" && method != "dense")
    fail(ErrorKind::config, "method must be auto|lanczos|dense");
  if (operator_kind != "bochner" && operator_kind != "sharp" &&
      operator_kind != "dbar" && operator_kind != "circle_reduced")
    fail(ErrorKind::config,
         "operator must be bochner|sharp|dbar|circle_reduced");
}

}  // namespace gqlab
