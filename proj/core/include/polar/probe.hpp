#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polar/acts.hpp"
#include "polar/rng.hpp"

namespace polar {

// Rank-k linear map B (k x d) plus one prototype column per directional
// relation type (k x t).
struct PolarProbe {
  Eigen::MatrixXd map;
  Eigen::MatrixXd prototypes;
  std::vector<std::string> relation_types;  // names of the prototype columns

  int rank() const { return static_cast<int>(map.rows()); }
  int dim() const { return static_cast<int>(map.cols()); }
  int num_prototypes() const { return static_cast<int>(prototypes.cols()); }

  // B ~ N(0, 1/d), prototypes ~ N(0, I) normalised to unit length.
  static PolarProbe random(int k, int d, std::vector<std::string> relation_types, Rng& rng);
  // B = [I_k 0].
  static PolarProbe truncated_identity(int k, int d, std::vector<std::string> relation_types, Rng& rng);
};

inline constexpr double kCosineGuard = 1e-8;

struct ProbeOutputs {
  int n = 0;
  int k = 0;
  int t = 0;
  Eigen::MatrixXd projected;          // n x k, row i = B h_i
  std::vector<double> deltas;         // n*n*k, delta_ij = B h_i - B h_j
  Eigen::MatrixXd distances;          // n x n
  std::vector<double> cosines;        // n*n*t

  const double* delta(int i, int j) const { return deltas.data() + (static_cast<std::size_t>(i) * n + j) * k; }
  double cosine(int i, int j, int r) const { return cosines[(static_cast<std::size_t>(i) * n + j) * t + r]; }
  std::vector<double> upper_distances() const;
};

// Activations widened to double, n x d.
Eigen::MatrixXd to_matrix(const ActivationRecord& record);

// Cosine denominators are max(|delta| |p|, kCosineGuard). Throws
// DimensionError when the record width differs from the probe width.
ProbeOutputs forward(const PolarProbe& probe, const Eigen::MatrixXd& activations);
ProbeOutputs forward(const PolarProbe& probe, const ActivationRecord& record);

}  // namespace polar
