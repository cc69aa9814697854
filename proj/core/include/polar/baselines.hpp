#pragma once

#include <vector>

#include "polar/acts.hpp"
#include "polar/dataset.hpp"
#include "polar/eval.hpp"
#include "polar/schema.hpp"
#include "polar/train.hpp"

namespace polar {

struct BaselineReports {
  EvalReport random_activations;  // Gaussian activations, full training
  EvalReport identity_probe;      // B = [I_k 0] fixed, prototypes trained
  EvalReport shuffled_labels;     // activations paired with other graphs
};

// Runs the three chance/ablation controls on the train and test splits.
BaselineReports run_baselines(const Dataset& dataset, const ActsFile& acts, const DomainSchema& schema,
                              const TrainConfig& config);

// Derangement of sample-to-graph pairing used by the shuffled-label control:
// every example keeps its activations but takes the gold targets of a
// different graph.
std::vector<Example> shuffle_labels(std::span<const Example> examples, Rng& rng);

}  // namespace polar
