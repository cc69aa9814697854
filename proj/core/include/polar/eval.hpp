#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polar/acts.hpp"
#include "polar/dataset.hpp"
#include "polar/losses.hpp"
#include "polar/probe.hpp"
#include "polar/stats.hpp"

namespace polar {

// Cells entering the relation-type correlation.
enum class TypeIndexSet {
  kEdgePairs,  // gold directional edge pairs in both orientations
  kAllPairs,   // every ordered pair i != j
};

std::string_view to_string(TypeIndexSet set);

// Probe outputs are computed from f32 activations, so values that agree in
// exact arithmetic differ by round-off; ranks treat such values as ties.
// 1e-5 ~ sqrt(4096) * f32 epsilon.
inline constexpr double kRankTieTolerance = 1e-5;
TypeIndexSet parse_type_index_set(std::string_view name);

// Spearman between predicted and gold upper triangles.
std::optional<double> existence_rho(const ProbeOutputs& outputs, const DistanceMatrix& gold);

// Exact Spearman between predicted cosines and gold incidence over the cells
// selected by `set` and every prototype column.
std::optional<double> type_rho(const ProbeOutputs& outputs, const GraphTargets& targets, TypeIndexSet set);

// One graph with its gold targets and the activations of its descriptions.
struct Example {
  std::string graph_id;
  const RelationalGraph* graph = nullptr;
  GraphTargets targets;
  std::vector<std::string> sample_ids;
  std::vector<Eigen::MatrixXd> activations;
};

struct ExampleSet {
  std::vector<Example> examples;
  std::vector<std::string> missing;  // sample ids without activations
};

// Pairs each sample of `split` with its activation record. Graphs without any
// activations are dropped; their sample ids are listed in `missing`.
ExampleSet make_examples(const Dataset& dataset, Split split, const ActsFile& acts, const DomainSchema& schema,
                         const std::vector<std::string>& prototype_names);

struct GraphScore {
  std::string graph_id;
  int descriptions = 0;
  std::optional<double> existence;  // mean over descriptions with a defined rho
  std::optional<double> type;
  std::optional<double> type_all_pairs;
};

struct EvalReport {
  std::map<std::string, std::string> conditions;  // split, ood, layer, domain, rank, ...
  std::vector<GraphScore> graphs;
  MeanSe existence;
  MeanSe type;
  MeanSe type_all_pairs;
  int missing = 0;
  int undefined_existence = 0;  // descriptions with an undefined rho
  int undefined_type = 0;
  TypeIndexSet type_set = TypeIndexSet::kEdgePairs;
};

EvalReport eval_probe(const PolarProbe& probe, std::span<const Example> examples,
                      TypeIndexSet type_set = TypeIndexSet::kEdgePairs);

// Existence/type rho of one example averaged over its descriptions; used for
// validation during training.
GraphScore score_example(const PolarProbe& probe, const Example& example, TypeIndexSet type_set);

std::string report_to_jsonl(const EvalReport& report);
std::string report_csv_header();
std::string report_to_csv_rows(const EvalReport& report);

}  // namespace polar
