#include "polar/dataset.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "polar/errors.hpp"
#include "polar/generators.hpp"
#include "polar/validate.hpp"

namespace polar {

namespace {

constexpr Split kSplits[] = {Split::kTrain, Split::kValidation, Split::kTest};
constexpr std::uint64_t kDescriptionStream = 0x6465736372ULL;  // "descr"

using ojson = nlohmann::ordered_json;

}  // namespace

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "unknown";
}

Split parse_split(std::string_view name) {
  for (Split s : kSplits)
    if (to_string(s) == name) return s;
  throw ValidationError(fmt::format("unknown split '{}'", name));
}

DatasetSpec DatasetSpec::defaults(DomainKind domain) {
  DatasetSpec spec;
  spec.domain = domain;
  spec.n_entities = (domain == DomainKind::kFamily || domain == DomainKind::kMetro) ? 6 : 5;
  return spec;
}

const SplitSize& DatasetSpec::size(Split split) const {
  switch (split) {
    case Split::kTrain:
      return train;
    case Split::kValidation:
      return validation;
    default:
      return test;
  }
}

std::vector<int> Dataset::graph_indices(Split split) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(graphs.size()); ++i)
    if (graphs[i].split == split) out.push_back(i);
  return out;
}

std::vector<std::vector<int>> Dataset::samples_by_graph() const {
  std::vector<std::vector<int>> out(graphs.size());
  for (int s = 0; s < static_cast<int>(samples.size()); ++s) out[samples[s].graph_index].push_back(s);
  return out;
}

Dataset build_dataset(const DatasetSpec& spec, const DomainSchema& schema, const Vocabulary* vocabulary) {
  check_schema(schema);
  if (spec.domain != schema.domain)
    throw ValidationError(fmt::format("dataset domain {} does not match schema domain {}", to_string(spec.domain),
                                      to_string(schema.domain)));
  if (spec.n_entities > DomainSchema::kPoolSize)
    throw ValidationError(fmt::format("entity pool exhausted: n_entities={} exceeds the pool of {}", spec.n_entities,
                                      DomainSchema::kPoolSize));
  for (Split s : kSplits) {
    if (spec.size(s).graphs < 0 || spec.size(s).descriptions < 1)
      throw ValidationError(fmt::format("{} split needs >= 0 graphs and >= 1 description", to_string(s)));
  }

  Dataset ds;
  ds.domain = spec.domain;
  std::set<std::vector<std::string>> seen;

  for (Split split : kSplits) {
    const bool ood_split = split == Split::kTest;
    const OodFlags flags = ood_split ? spec.ood : OodFlags{};
    const auto& pool = flags.entities ? schema.entity_pool_ood : schema.entity_pool;
    const SplitSize& size = spec.size(split);

    for (int gi = 0; gi < size.graphs; ++gi) {
      const auto split_tag = static_cast<std::uint64_t>(split);
      RelationalGraph graph;
      bool fresh = false;
      for (int attempt = 0; attempt < kSamplerBudget && !fresh; ++attempt) {
        Rng rng = make_rng(spec.seed, {split_tag, static_cast<std::uint64_t>(gi), static_cast<std::uint64_t>(attempt)});
        graph = sample_graph(schema, spec.n_entities, spec.n_lines, pool, rng, spec.seed);
        auto key = labeled_edge_key(graph);
        auto names = graph.entities;
        std::sort(names.begin(), names.end());
        key.insert(key.end(), names.begin(), names.end());
        fresh = seen.insert(std::move(key)).second;
      }
      if (!fresh)
        throw GenerationError(fmt::format("could not draw a distinct {} graph for {}[{}] (seed={})",
                                          to_string(spec.domain), to_string(split), gi, spec.seed));
      if (const auto report = validate_graph(graph, schema); !report.ok())
        throw GenerationError(fmt::format("generator produced an invalid graph (seed={}): {}", spec.seed,
                                          report.summary()));

      DatasetGraph dg;
      dg.graph_id = fmt::format("{}-{}-{:04}", to_string(spec.domain), to_string(split), gi);
      dg.split = split;
      dg.graph = std::move(graph);
      const int graph_index = static_cast<int>(ds.graphs.size());

      RenderOptions options;
      options.no_prompt = flags.no_prompt;
      options.ood_relations = flags.relations;
      options.vocabulary = vocabulary;
      for (int di = 0; di < size.descriptions; ++di) {
        Rng rng = make_rng(spec.seed, {kDescriptionStream, split_tag, static_cast<std::uint64_t>(gi),
                                       static_cast<std::uint64_t>(di)});
        DescribedSample described = render_description(dg.graph, schema, rng, options);
        DatasetSample sample;
        sample.graph_id = dg.graph_id;
        sample.sample_id = fmt::format("{}/{:02}", dg.graph_id, di);
        sample.split = split;
        sample.graph_index = graph_index;
        sample.description_index = di;
        sample.description = std::move(described.full_text);
        sample.probed_tokens = std::move(described.probed_tokens);
        sample.ood = flags;
        ds.samples.push_back(std::move(sample));
      }
      ds.graphs.push_back(std::move(dg));
    }
  }
  return ds;
}

std::string sample_to_jsonl(const Dataset& dataset, const DatasetSample& sample) {
  const DatasetGraph& dg = dataset.graphs.at(sample.graph_index);
  ojson j;
  j["graph_id"] = sample.graph_id;
  j["sample_id"] = sample.sample_id;
  j["split"] = to_string(sample.split);
  j["domain"] = to_string(dataset.domain);
  j["graph"] = ojson::parse(graph_to_json(dg.graph));
  j["description"] = sample.description;
  j["probed_tokens"] = sample.probed_tokens;
  ojson ood;
  ood["entities"] = sample.ood.entities;
  ood["relations"] = sample.ood.relations;
  ood["no_prompt"] = sample.ood.no_prompt;
  j["ood"] = std::move(ood);
  return j.dump();
}

void write_dataset_jsonl(const Dataset& dataset, std::ostream& out) {
  for (const auto& s : dataset.samples) out << sample_to_jsonl(dataset, s) << '\n';
}

Dataset read_dataset_jsonl(std::istream& in) {
  Dataset ds;
  std::map<std::string, int> graph_index;
  std::vector<int> description_count;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      DatasetSample s;
      s.graph_id = j.at("graph_id").get<std::string>();
      s.split = parse_split(j.at("split").get<std::string>());
      s.sample_id = j.value("sample_id", s.graph_id);
      const DomainKind domain = parse_domain(j.at("domain").get<std::string>());
      if (ds.samples.empty()) ds.domain = domain;
      if (domain != ds.domain) throw FormatError("mixed domains in one dataset file");

      auto [it, inserted] = graph_index.emplace(s.graph_id, static_cast<int>(ds.graphs.size()));
      if (inserted) {
        ds.graphs.push_back({s.graph_id, s.split, graph_from_json(j.at("graph").dump())});
        description_count.push_back(0);
      }
      s.graph_index = it->second;
      s.description_index = description_count[it->second]++;
      s.description = j.at("description").get<std::string>();
      s.probed_tokens = j.at("probed_tokens").get<std::vector<std::string>>();
      const auto& ood = j.at("ood");
      s.ood = {ood.at("entities").get<bool>(), ood.at("relations").get<bool>(), ood.at("no_prompt").get<bool>()};
      ds.samples.push_back(std::move(s));
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError(fmt::format("dataset line {}: {}", line_no, ex.what()));
    }
  }
  return ds;
}

}  // namespace polar
