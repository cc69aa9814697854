#include "polar/eval.hpp"

#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "polar/errors.hpp"

namespace polar {

std::string_view to_string(TypeIndexSet set) { return set == TypeIndexSet::kEdgePairs ? "edge_pairs" : "all_pairs"; }

TypeIndexSet parse_type_index_set(std::string_view name) {
  if (name == "edge_pairs" || name == "edges") return TypeIndexSet::kEdgePairs;
  if (name == "all_pairs") return TypeIndexSet::kAllPairs;
  throw ValidationError(fmt::format("unknown type index set '{}' (edge_pairs | all_pairs)", name));
}

std::optional<double> existence_rho(const ProbeOutputs& outputs, const DistanceMatrix& gold) {
  const auto pred = outputs.upper_distances();
  const auto g = gold.upper_triangle();
  return spearman(pred, g, kRankTieTolerance);
}

std::optional<double> type_rho(const ProbeOutputs& outputs, const GraphTargets& targets, TypeIndexSet set) {
  std::vector<double> pred, gold;
  auto push = [&](int i, int j) {
    for (int r = 0; r < outputs.t; ++r) {
      pred.push_back(outputs.cosine(i, j, r));
      gold.push_back(targets.incidence(i, j, r));
    }
  };
  if (set == TypeIndexSet::kEdgePairs) {
    for (const auto& [i, j] : targets.edge_pairs) {
      push(i, j);
      push(j, i);
    }
  } else {
    for (int i = 0; i < outputs.n; ++i)
      for (int j = 0; j < outputs.n; ++j)
        if (i != j) push(i, j);
  }
  if (pred.size() < 2) return std::nullopt;
  return spearman(pred, gold, kRankTieTolerance);
}

ExampleSet make_examples(const Dataset& dataset, Split split, const ActsFile& acts, const DomainSchema& schema,
                         const std::vector<std::string>& prototype_names) {
  ExampleSet out;
  const auto index = acts.index();
  const auto by_graph = dataset.samples_by_graph();
  for (int gi : dataset.graph_indices(split)) {
    const DatasetGraph& dg = dataset.graphs[gi];
    Example ex;
    ex.graph_id = dg.graph_id;
    ex.graph = &dg.graph;
    for (int si : by_graph[gi]) {
      const auto& sample = dataset.samples[si];
      auto it = index.find(sample.sample_id);
      if (it == index.end()) {
        out.missing.push_back(sample.sample_id);
        continue;
      }
      const ActivationRecord& rec = acts.records[it->second];
      if (rec.rows != dg.graph.num_entities())
        throw DimensionError(fmt::format("sample '{}' has {} activation rows for {} entities", sample.sample_id,
                                         rec.rows, dg.graph.num_entities()));
      ex.sample_ids.push_back(sample.sample_id);
      ex.activations.push_back(to_matrix(rec));
    }
    if (ex.activations.empty()) continue;
    ex.targets = make_targets(dg.graph, schema, prototype_names);
    out.examples.push_back(std::move(ex));
  }
  return out;
}

GraphScore score_example(const PolarProbe& probe, const Example& example, TypeIndexSet type_set) {
  GraphScore s;
  s.graph_id = example.graph_id;
  s.descriptions = static_cast<int>(example.activations.size());
  double e_sum = 0, t_sum = 0, a_sum = 0;
  int e_n = 0, t_n = 0, a_n = 0;
  for (const auto& h : example.activations) {
    const ProbeOutputs out = forward(probe, h);
    if (auto e = existence_rho(out, example.targets.distances)) {
      e_sum += *e;
      ++e_n;
    }
    if (auto t = type_rho(out, example.targets, type_set)) {
      t_sum += *t;
      ++t_n;
    }
    if (auto a = type_rho(out, example.targets, TypeIndexSet::kAllPairs)) {
      a_sum += *a;
      ++a_n;
    }
  }
  if (e_n > 0) s.existence = e_sum / e_n;
  if (t_n > 0) s.type = t_sum / t_n;
  if (a_n > 0) s.type_all_pairs = a_sum / a_n;
  return s;
}

EvalReport eval_probe(const PolarProbe& probe, std::span<const Example> examples, TypeIndexSet type_set) {
  EvalReport report;
  report.type_set = type_set;
  std::vector<double> e, t, a;
  for (const Example& ex : examples) {
    GraphScore s;
    s.graph_id = ex.graph_id;
    s.descriptions = static_cast<int>(ex.activations.size());
    double e_sum = 0, t_sum = 0, a_sum = 0;
    int e_n = 0, t_n = 0, a_n = 0;
    for (const auto& h : ex.activations) {
      const ProbeOutputs out = forward(probe, h);
      if (auto v = existence_rho(out, ex.targets.distances)) {
        e_sum += *v;
        ++e_n;
      } else {
        ++report.undefined_existence;
      }
      if (auto v = type_rho(out, ex.targets, type_set)) {
        t_sum += *v;
        ++t_n;
      } else {
        ++report.undefined_type;
      }
      if (auto v = type_rho(out, ex.targets, TypeIndexSet::kAllPairs)) {
        a_sum += *v;
        ++a_n;
      }
    }
    if (e_n > 0) {
      s.existence = e_sum / e_n;
      e.push_back(*s.existence);
    }
    if (t_n > 0) {
      s.type = t_sum / t_n;
      t.push_back(*s.type);
    }
    if (a_n > 0) {
      s.type_all_pairs = a_sum / a_n;
      a.push_back(*s.type_all_pairs);
    }
    report.graphs.push_back(std::move(s));
  }
  report.existence = mean_and_se(e);
  report.type = mean_and_se(t);
  report.type_all_pairs = mean_and_se(a);
  return report;
}

namespace {

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string csv_value(const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v) : std::string{}; }

std::string conditions_label(const EvalReport& r, const char* key) {
  auto it = r.conditions.find(key);
  return it == r.conditions.end() ? std::string{} : it->second;
}

}  // namespace

std::string report_to_jsonl(const EvalReport& report) {
  std::ostringstream out;
  nlohmann::ordered_json conditions(report.conditions);
  for (const auto& g : report.graphs) {
    nlohmann::ordered_json j;
    j["record"] = "graph";
    j["conditions"] = conditions;
    j["graph_id"] = g.graph_id;
    j["descriptions"] = g.descriptions;
    j["existence_rho"] = optional_json(g.existence);
    j["type_rho"] = optional_json(g.type);
    j["type_rho_all_pairs"] = optional_json(g.type_all_pairs);
    out << j.dump() << '\n';
  }
  nlohmann::ordered_json s;
  s["record"] = "summary";
  s["conditions"] = conditions;
  s["type_index_set"] = to_string(report.type_set);
  s["graphs"] = report.graphs.size();
  s["existence_rho"] = {{"mean", report.existence.mean}, {"se", report.existence.se}, {"n", report.existence.count}};
  s["type_rho"] = {{"mean", report.type.mean}, {"se", report.type.se}, {"n", report.type.count}};
  s["type_rho_all_pairs"] = {
      {"mean", report.type_all_pairs.mean}, {"se", report.type_all_pairs.se}, {"n", report.type_all_pairs.count}};
  s["missing_samples"] = report.missing;
  s["undefined_existence"] = report.undefined_existence;
  s["undefined_type"] = report.undefined_type;
  out << s.dump() << '\n';
  return out.str();
}

std::string report_csv_header() {
  return "condition,split,domain,layer,rank,ood,graph_id,descriptions,existence_rho,type_rho,type_rho_all_pairs\n";
}

std::string report_to_csv_rows(const EvalReport& report) {
  std::string out;
  for (const auto& g : report.graphs) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", conditions_label(report, "condition"),
                       conditions_label(report, "split"), conditions_label(report, "domain"),
                       conditions_label(report, "layer"), conditions_label(report, "rank"),
                       conditions_label(report, "ood"), g.graph_id, g.descriptions, csv_value(g.existence),
                       csv_value(g.type), csv_value(g.type_all_pairs));
  }
  return out;
}

}  // namespace polar
