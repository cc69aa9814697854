#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polar/graph.hpp"
#include "polar/losses.hpp"
#include "polar/probe.hpp"

namespace polar {

struct QaErrors {
  double type = 0.0;       // 1 - cosine at the gold type
  double existence = 0.0;  // |predicted - gold| distance of the queried pair
};

QaErrors qa_probe_errors(const ProbeOutputs& outputs, const GraphTargets& targets, const Edge& queried_edge,
                         int prototype_column);

struct QaObservation {
  std::string group;  // graph id; errors are z-scored within a group
  double error = 0.0;
  double logit = 0.0;
};

// z-scores per group; groups with zero spread map to 0.
std::vector<double> zscore_within_groups(std::span<const QaObservation> observations);

struct QaCorrelation {
  std::optional<double> rho;  // nullopt when either side is constant
  double p_value = 1.0;       // two-sided permutation p
  int n = 0;
  int permutations = 0;
};

inline constexpr int kMinQaObservations = 30;
inline constexpr int kQaPermutations = 10'000;

// Spearman between within-group normalised errors and logits with a
// permutation p-value. Throws ValidationError below kMinQaObservations.
QaCorrelation qa_correlation(std::span<const QaObservation> observations, int permutations = kQaPermutations,
                             std::uint64_t seed = 0);

}  // namespace polar
