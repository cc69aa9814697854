#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "polar/eval.hpp"
#include "polar/probe.hpp"
#include "polar/soft_rank.hpp"

namespace polar {

struct TrainConfig {
  double lambda = 5.0;
  double learning_rate = 1e-5;
  int epochs = 100;
  int rank = 512;
  int batch_graphs = 8;
  SoftRankOptions soft{0.1, 100, 1e-6};
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  bool train_map = true;  // false keeps B fixed (identity-probe control)
  bool validate = true;
  TypeIndexSet type_set = TypeIndexSet::kEdgePairs;
};

// Throws ValidationError naming the offending field.
void check_config(const TrainConfig& config);

struct EpochStats {
  int epoch = 0;
  double train_structural = 0.0;
  double train_angular = 0.0;
  double train_total = 0.0;
  double val_structural = 0.0;
  double val_angular = 0.0;
  double val_existence_rho = 0.0;
  double val_type_rho = 0.0;
};

struct TrainResult {
  PolarProbe probe;
  std::vector<EpochStats> history;
  int steps = 0;
};

// Adam on B and the prototypes. Each epoch visits every training graph once in
// a shuffled order; a batch holds `batch_graphs` graphs, each contributing one
// randomly chosen description. Epoch losses are full-pass means over every
// description. Throws TrainingError on a non-finite loss.
TrainResult train(PolarProbe probe, std::span<const Example> train_set, std::span<const Example> validation_set,
                  const TrainConfig& config);

std::string history_csv(std::span<const EpochStats> history);

}  // namespace polar
