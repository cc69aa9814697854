#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polar/graph.hpp"
#include "polar/probe.hpp"
#include "polar/schema.hpp"
#include "polar/soft_rank.hpp"

namespace polar {

// Gold quantities of one graph, expressed in the probe's prototype columns.
struct GraphTargets {
  DistanceMatrix distances;
  IncidenceTensor incidence;  // n x n x num_prototypes
  // Distinct (src, dst) pairs carrying at least one directional edge.
  std::vector<std::pair<int, int>> edge_pairs;

  int size() const { return distances.size(); }
};

// Maps graph relation types onto prototype columns by name; non-directional
// types (per schema) get no column. Throws DimensionError if a directional
// type has no prototype.
GraphTargets make_targets(const RelationalGraph& graph, const DomainSchema& schema,
                          const std::vector<std::string>& prototype_names);

struct LossValue {
  double value = 0.0;
  int counted = 0;  // graphs that contributed
  int flagged = 0;  // degenerate (structural) or skipped (angular) graphs
};

struct LossItem {
  const ProbeOutputs* outputs = nullptr;
  const GraphTargets* targets = nullptr;
};

// Mean over graphs of 1 - soft Spearman between predicted and gold upper
// triangles. Degenerate graphs contribute 1. Throws StructuralError for n < 3.
LossValue structural_loss(std::span<const LossItem> batch, const SoftRankOptions& options);

// Mean over graphs of the squared cosine error on (edge pair, prototype)
// cells divided by |E| |T|. Graphs without directional edges are skipped.
LossValue angular_loss(std::span<const LossItem> batch);

struct ObjectiveItem {
  const Eigen::MatrixXd* activations = nullptr;  // n x d
  const GraphTargets* targets = nullptr;
};

struct Objective {
  double total = 0.0;
  LossValue structural;
  LossValue angular;
  Eigen::MatrixXd grad_map;         // k x d
  Eigen::MatrixXd grad_prototypes;  // k x t
};

// L_s + lambda L_a over the batch with analytic gradients.
Objective evaluate_objective(const PolarProbe& probe, std::span<const ObjectiveItem> batch, double lambda,
                             const SoftRankOptions& options, bool want_grad);

}  // namespace polar
