#include "gqlab/family.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <memory>
#include <sstream>

#include "gqlab/errors.hpp"

namespace gqlab {

using cplx = std::complex<double>;
static const cplx kI(0.0, 1.0);

Eigen::MatrixXcd ComplexStructureFamily::at(double s, const double* x,
                                            const double* theta) const {
  if (kind == FamilyKind::linear) return s * leading(x, theta);
  return eval(s, x, theta);
}

Eigen::MatrixXcd ComplexStructureFamily::leading_at(const double* x,
                                                    const double* theta) const {
  return leading(x, theta);
}

std::vector<std::string> preset_names() {
  return {"flat", "semiflat", "nonsemiflat", "heart", "potential", "twisted"};
}

ComplexStructureFamily preset_family(const std::string& name, int n) {
  ComplexStructureFamily f;
  f.name = name;
  f.n = n;
  f.kind = FamilyKind::linear;

  if (name == "flat") {
    f.claims_integrable = true;
    f.claims_semiflat = true;
    f.claims_heart = true;
    f.leading = [n](const double*, const double*) {
      return Eigen::MatrixXcd(kI * Eigen::MatrixXcd::Identity(n, n));
    };
  } else if (name == "semiflat") {
    if (n != 1) fail(ErrorKind::config, "preset 'semiflat' is n=1 only");
    f.claims_integrable = true;
    f.claims_semiflat = true;
    f.claims_heart = true;
    f.leading = [](const double* x, const double*) {
      Eigen::MatrixXcd a(1, 1);
      a(0, 0) = kI * (1.0 + 0.5 * std::cos(kTwoPi * x[0]));
      return a;
    };
  } else if (name == "nonsemiflat") {
    if (n != 1) fail(ErrorKind::config, "preset 'nonsemiflat' is n=1 only");
    f.claims_integrable = true;  // n=1 structures are always integrable
    f.claims_semiflat = false;
    f.claims_heart = false;
    f.leading = [](const double*, const double* th) {
      Eigen::MatrixXcd a(1, 1);
      a(0, 0) = kI * (1.0 + 0.5 * std::cos(th[0]));
      return a;
    };
  } else if (name == "heart") {
    if (n != 1) fail(ErrorKind::config, "preset 'heart' is n=1 only");
    f.claims_integrable = true;
    f.claims_semiflat = true;
    f.claims_heart = true;
    f.leading = [](const double* x, const double*) {
      Eigen::MatrixXcd a(1, 1);
      a(0, 0) = 0.4 * std::cos(kTwoPi * x[0]) +
                kI * (1.0 + 0.3 * std::sin(kTwoPi * x[0]));
      return a;
    };
  } else if (name == "potential") {
    // Q0 = I + Hess_theta(phi), phi = 0.15 cos t1 cos t2 + 0.05 sin 2t1 cos
    // t2. Hessian form makes dQ0_jk/dtheta^i fully symmetric, so the family
    // is integrable while Im A0 still depends on theta; the mixed
    // frequencies keep centered differences from being exact on it.
    if (n != 2) fail(ErrorKind::config, "preset 'potential' is n=2 only");
    f.claims_integrable = true;
    f.claims_semiflat = false;
    f.claims_heart = false;
    f.leading = [](const double*, const double* th) {
      Eigen::MatrixXcd a(2, 2);
      double c1 = std::cos(th[0]), c2 = std::cos(th[1]);
      double s1 = std::sin(th[0]), s2 = std::sin(th[1]);
      double c21 = std::cos(2.0 * th[0]), s21 = std::sin(2.0 * th[0]);
      a(0, 0) = kI * (1.0 - 0.15 * c1 * c2 - 0.2 * s21 * c2);
      a(1, 1) = kI * (1.0 - 0.15 * c1 * c2 - 0.05 * s21 * c2);
      a(0, 1) = a(1, 0) = kI * (0.15 * s1 * s2 - 0.1 * c21 * s2);
      return a;
    };
  } else if (name == "twisted") {
    if (n != 2) fail(ErrorKind::config, "preset 'twisted' is n=2 only");
    f.claims_integrable = false;
    f.claims_semiflat = false;
    f.claims_heart = false;
    f.leading = [](const double*, const double* th) {
      Eigen::MatrixXcd a = kI * Eigen::MatrixXcd::Identity(2, 2);
      a(0, 0) = kI * (1.0 + 0.3 * std::sin(th[1]));
      return a;
    };
  } else {
    fail(ErrorKind::config, "unknown preset '" + name + "'");
  }
  return f;
}

ComplexStructureFamily load_tabulated_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot open family file '" + path + "'");

  int n = 0, n_theta = 0, n_x = 0;
  if (!(in >> n >> n_theta >> n_x))
    fail(ErrorKind::config, "family file '" + path + "': bad header");
  Grid grid(n, n_theta, n_x);

  std::int64_t sites = grid.sites();
  auto table = std::make_shared<std::vector<Eigen::MatrixXcd>>(
      sites, Eigen::MatrixXcd::Zero(n, n));
  std::vector<char> seen(sites, 0);
  for (std::int64_t r = 0; r < sites; ++r) {
    std::int64_t idx;
    if (!(in >> idx))
      fail(ErrorKind::config,
           "family file '" + path + "': expected " + std::to_string(sites) +
               " rows, got " + std::to_string(r));
    if (idx < 0 || idx >= sites || seen[idx])
      fail(ErrorKind::config, "family file '" + path +
                                  "': bad or duplicate site index " +
                                  std::to_string(idx));
    seen[idx] = 1;
    Eigen::MatrixXd re(n, n), im(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!(in >> re(i, j)))
          fail(ErrorKind::config, "family file: truncated row");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!(in >> im(i, j)))
          fail(ErrorKind::config, "family file: truncated row");
    (*table)[idx] = re + kI * im;
  }

  ComplexStructureFamily f;
  f.n = n;
  f.kind = FamilyKind::linear;
  f.name = "tabulated:" + path;
  f.native_grid = grid;
  f.leading = [table, grid](const double* x, const double* th) {
    Multi m{};
    for (int a = 0; a < grid.axes(); ++a) {
      double c = (a < grid.n) ? th[a] : x[a - grid.n];
      double u = c / grid.spacing(a);
      long r = std::lround(u);
      if (std::abs(u - r) > 1e-9)
        fail(ErrorKind::config,
             "tabulated family sampled off its native grid");
      m[a] = static_cast<int>(((r % grid.points(a)) + grid.points(a)) %
                              grid.points(a));
    }
    return (*table)[grid.encode(m)];
  };
  return f;
}

void write_tabulated_family(const std::string& path,
                            const ComplexStructureFamily& fam,
                            const Grid& grid) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::config, "cannot write family file '" + path + "'");
  out << grid.n << " " << grid.n_theta << " " << grid.n_x << "\n";
  out.precision(17);
  for (std::int64_t s = 0; s < grid.sites(); ++s) {
    Multi m = grid.decode(s);
    double th[kMaxHalfDim], x[kMaxHalfDim];
    for (int i = 0; i < grid.n; ++i) {
      th[i] = grid.coord(m, i);
      x[i] = grid.coord(m, grid.n + i);
    }
    Eigen::MatrixXcd a = fam.leading_at(x, th);
    out << s;
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) out << " " << a(i, j).real();
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) out << " " << a(i, j).imag();
    out << "\n";
  }
}

}  // namespace gqlab
