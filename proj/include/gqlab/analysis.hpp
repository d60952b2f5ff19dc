#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gqlab/bundle.hpp"
#include "gqlab/eigensolver.hpp"
#include "gqlab/family.hpp"
#include "gqlab/lattice.hpp"
#include "gqlab/limit.hpp"
#include "gqlab/metric.hpp"

namespace gqlab {

struct SweepRow {
  double s = 0.0;
  int j = 0;          // 1-based eigenvalue index
  double lambda = 0.0;
  double target = 0.0;  // k * N(j)
  double abs_err = 0.0;
};

struct SweepResult {
  std::string family;
  int k = 1;
  std::vector<double> s_values;          // strictly decreasing
  std::vector<SpectrumResult> spectra;   // one per s
  std::vector<SweepRow> rows;
  std::vector<bool> converging;          // per j: err(last) <= err(first)
  bool semiflat_warning = false;
  OperatorKind operator_kind = OperatorKind::dbar;
};

// Per-s assembly of the dbar Laplacian (integrable families) or half the
// sharp operator (almost complex families; same matrix, different label) and
// solve of the lowest m eigenvalues, tabulated against the limit targets.
SweepResult sweep(const ComplexStructureFamily& fam,
                  const PrequantumBundle& bundle, const Grid& grid,
                  const std::vector<double>& s_list, int m,
                  const EigsOptions& eig_opts);

// Number of eigenvalues in (a, b]. Errors out when a window edge sits within
// edge_tol of a computed eigenvalue.
int counting_window(const SpectrumResult& spectrum, double a, double b,
                    double edge_tol);

struct CountComparison {
  int computed = 0;
  std::uint64_t expected = 0;
  bool match = false;
};

// Companion check: the window count against the limit-spectrum count over
// the same window (multiplicities included).
CountComparison compare_counts(const SpectrumResult& spectrum,
                               const LimitSpectrum& limit, double a, double b,
                               double edge_tol);

// Base distance field: shortest-path distance (in the g_s base metric) from
// every x-grid cell to the nearest Bohr-Sommerfeld point, Dijkstra over grid
// edges with weights sqrt(g_xx) dx, the xx coefficient minimized over theta.
std::vector<double> base_distance_field(const MetricField& metric,
                                        const BSPointSet& bs);

struct LocalizationReport {
  int eigvec_index = 0;
  double s = 0.0;
  double C = 0.0;
  double fraction = 0.0;  // mass of |f|^2 within distance C of B_k
};

LocalizationReport localization_mass(const SpectrumResult& spectrum,
                                     int eigvec_index,
                                     const MetricField& metric,
                                     const BSPointSet& bs, double C);

// Smallest radius on the dyadic grid {2^p} with mass fraction >= 1 - epsilon.
LocalizationReport smallest_localization_radius(const SpectrumResult& spectrum,
                                                int eigvec_index,
                                                const MetricField& metric,
                                                const BSPointSet& bs,
                                                double epsilon);

struct RegionBox {
  std::vector<double> lo, hi;  // per base axis, subset of [0,1)
};

struct RayleighFloorReport {
  double lambda_min = 0.0;   // lowest Dirichlet eigenvalue of Bochner + k^2
  double floor = 0.0;        // k^2 + inf_region lambda(k,b)/N_b
  double tolerance = 0.05;
  bool verdict = false;      // lambda_min >= floor * (1 - tolerance)
  std::int64_t region_sites = 0;
};

RayleighFloorReport rayleigh_floor_probe(const MetricField& metric,
                                         const PrequantumBundle& bundle,
                                         const RegionBox& region,
                                         const EigsOptions& eig_opts,
                                         double tolerance = 0.05);

struct GapReport {
  std::vector<double> spectrum;
  int cluster_size = 0;        // size of the near-zero cluster
  double low_edge = 0.0;       // largest eigenvalue of the low cluster
  double next_eigenvalue = 0.0;
  double gap = 0.0;
  double fitted_C = 0.0;       // max|low cluster| / delta
  int k = 1;
  double kappa = 0.0, delta = 0.0;
  std::uint64_t rr_expected = 1;  // #B_k
  bool pattern_verdict = false;   // two-interval structure holds
  bool rr_verdict = false;        // cluster_size == #B_k
};

// Spectral-gap pattern check for the sharp operator: the spectrum must split
// into a near-zero cluster and everything above 2k + 2 kappa - C delta.
GapReport gap_report(const SpectrumResult& spectrum, int k, double kappa,
                     double delta, int n, std::uint64_t bs_count);

// Dirichlet restriction of an operator to the sites whose base cell lies in
// the region (all theta retained).
SparseHermitianOperator restrict_to_region(const SparseHermitianOperator& op,
                                           const RegionBox& region);

}  // namespace gqlab
