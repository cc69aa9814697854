#pragma once

#include <span>
#include <vector>

namespace polar {

struct SoftRankOptions {
  double epsilon = 0.1;
  int max_iters = 100;
  // Stop once the column-marginal L1 error drops below this; 0 runs all
  // iterations.
  double tolerance = 1e-6;
  // Per-iteration decay of epsilon from the cost scale down to `epsilon`;
  // 1 runs every iteration at `epsilon`. The tolerance check starts once the
  // target is reached.
  double anneal = 0.7;
};

// Entropic optimal-transport ranks: standardized scores are transported onto
// the anchors 1..m under squared-difference cost with uniform marginals; the
// rank of x_i is m * sum_j P_ij * j. Converges to average ranks as epsilon -> 0.
struct SoftRanks {
  std::vector<double> ranks;
  int iterations = 0;
  bool degenerate = false;  // x has zero variance
};

SoftRanks soft_ranks(std::span<const double> x, const SoftRankOptions& options);

struct SoftSpearman {
  double value = 0.0;
  // Zero-variance soft ranks or constant y; value is 0 and gradient is 0.
  bool degenerate = false;
  int iterations = 0;
  std::vector<double> grad;  // d value / d x, filled when requested
};

// Pearson correlation between the soft ranks of x and the exact average ranks
// of y (held constant). The gradient differentiates through the unrolled
// Sinkhorn iterations.
SoftSpearman soft_spearman(std::span<const double> x, std::span<const double> y, const SoftRankOptions& options,
                           bool want_grad = false);

}  // namespace polar
