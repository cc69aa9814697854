#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polar/graph.hpp"
#include "polar/render.hpp"
#include "polar/schema.hpp"

namespace polar {

enum class Split { kTrain, kValidation, kTest };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

struct OodFlags {
  bool entities = false;
  bool relations = false;
  bool no_prompt = false;

  bool any() const { return entities || relations || no_prompt; }
  friend bool operator==(const OodFlags&, const OodFlags&) = default;
};

struct SplitSize {
  int graphs = 0;
  int descriptions = 0;
};

struct DatasetSpec {
  DomainKind domain = DomainKind::kOrdinality;
  int n_entities = 5;
  int n_lines = 2;  // metro only
  SplitSize train{30, 20};
  SplitSize validation{50, 20};
  SplitSize test{50, 30};
  std::uint64_t seed = 0;
  // Applied to the test split only; train and validation stay in distribution.
  OodFlags ood;

  static DatasetSpec defaults(DomainKind domain);
  const SplitSize& size(Split split) const;
};

struct DatasetSample {
  std::string sample_id;
  std::string graph_id;
  Split split = Split::kTrain;
  int graph_index = 0;        // index into Dataset::graphs
  int description_index = 0;  // within the graph
  std::string description;
  std::vector<std::string> probed_tokens;
  OodFlags ood;
};

struct DatasetGraph {
  std::string graph_id;
  Split split = Split::kTrain;
  RelationalGraph graph;
};

struct Dataset {
  DomainKind domain = DomainKind::kOrdinality;
  std::vector<DatasetGraph> graphs;
  std::vector<DatasetSample> samples;

  std::vector<int> graph_indices(Split split) const;
  // Sample indices grouped by graph index (same order as graphs).
  std::vector<std::vector<int>> samples_by_graph() const;
};

// Deterministic under spec.seed; graphs are pairwise distinct as labeled
// structures across all splits.
Dataset build_dataset(const DatasetSpec& spec, const DomainSchema& schema, const Vocabulary* vocabulary = nullptr);

std::string sample_to_jsonl(const Dataset& dataset, const DatasetSample& sample);
void write_dataset_jsonl(const Dataset& dataset, std::ostream& out);
Dataset read_dataset_jsonl(std::istream& in);

}  // namespace polar
