#pragma once

#include <span>

#include <Eigen/Dense>

#include "polar/probe.hpp"

namespace polar {

struct Alignment {
  double score = 0.0;  // in [0, 1]
  int rank_a = 0;
  int rank_b = 0;
  bool deficient = false;
};

// Mean squared cosine of the principal angles between the model-space images
// B^+ P of two probes' prototypes: |Q_a^T Q_b|_F^2 / min(rank_a, rank_b).
Alignment subspace_alignment(const PolarProbe& a, const PolarProbe& b);

// Principal-angle score between the column spans of two d-row matrices.
Alignment span_alignment(const Eigen::MatrixXd& va, const Eigen::MatrixXd& vb);

Eigen::MatrixXd alignment_matrix(std::span<const PolarProbe> probes);

}  // namespace polar
