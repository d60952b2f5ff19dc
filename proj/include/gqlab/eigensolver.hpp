#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gqlab/sparse.hpp"

namespace gqlab {

struct EigsOptions {
  int m = 6;
  double tol = 1e-8;  // residual certificate ||Mv - lambda v||
  std::uint64_t seed = 42;
  int max_basis = 0;  // 0 = auto
  int max_restarts = 500;
  enum class Method { automatic, lanczos, dense } method = Method::automatic;
  bool want_vectors = true;
  std::int64_t dense_threshold = 2048;
};

struct SpectrumResult {
  std::vector<double> values;     // sorted ascending
  std::vector<double> residuals;  // per pair, from an explicit matvec
  Eigen::MatrixXcd vectors;       // dim x m, orthonormal columns
  std::uint64_t seed = 0;
  int iterations = 0;  // operator applications
  std::string method;
};

// Lowest m eigenpairs of a Hermitian operator. Lanczos with full
// reorthogonalization and thick restarts; dense solve when the dimension is
// at or below opts.dense_threshold. Deterministic for a fixed seed.
SpectrumResult lowest_eigenpairs(const SparseHermitianOperator& op,
                                 const EigsOptions& opts);

struct Cluster {
  double value = 0.0;  // mean of members
  int multiplicity = 0;
  std::vector<int> members;
};

struct ClusterReport {
  std::vector<Cluster> clusters;
  double threshold = 0.0;
};

// Greedy gap clustering of a sorted spectrum: a new cluster starts whenever
// the gap to the previous eigenvalue exceeds the threshold.
ClusterReport cluster(const SpectrumResult& result, double gap_threshold);

// Default threshold max(0.05 k, 5 x max residual).
double default_cluster_threshold(int k, const SpectrumResult& result);

}  // namespace gqlab
