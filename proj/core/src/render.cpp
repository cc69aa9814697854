#include "polar/render.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "polar/errors.hpp"

namespace polar {

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open vocabulary file '{}'", path));
  std::unordered_set<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) tokens.insert(line);
  }
  return Vocabulary(std::move(tokens));
}

bool Vocabulary::is_single_token(const std::string& entity) const { return tokens_.contains(" " + entity); }

namespace {

const RelationSpec& spec_for(const RelationalGraph& graph, const DomainSchema& schema, int rel) {
  return schema.relation(graph.relation_types.at(rel));
}

std::string prompt_text(const RelationalGraph& graph, const DomainSchema& schema) {
  return fill_template(schema.prompt_template,
                       {{"entities", join_list(graph.entities)}, {"lines", join_list(graph.relation_types)}});
}

}  // namespace

std::string render_sentence(const RelationalGraph& graph, const DomainSchema& schema, const Edge& edge, bool flipped,
                            bool ood_relations) {
  const RelationSpec& spec = spec_for(graph, schema, edge.rel);
  const SurfaceForms& forms = ood_relations ? spec.ood_forms : spec.id_forms;
  const std::string& subject = graph.entities[flipped ? edge.dst : edge.src];
  const std::string& object = graph.entities[flipped ? edge.src : edge.dst];
  return fill_template(schema.sentence_template, {{"src", subject},
                                                  {"dst", object},
                                                  {"rel", forms.pick(flipped, schema.gender_of(subject))},
                                                  {"type", spec.name}});
}

DescribedSample render_description(const RelationalGraph& graph, const DomainSchema& schema, Rng& rng,
                                   const RenderOptions& options) {
  if (options.vocabulary != nullptr) {
    for (const auto& e : graph.entities) {
      if (!options.vocabulary->is_single_token(e))
        throw RenderError(fmt::format("entity '{}' is not a single token in the supplied vocabulary", e));
    }
  }

  DescribedSample out;
  const int m = static_cast<int>(graph.edges.size());
  out.flips.resize(m);
  for (int e = 0; e < m; ++e) out.flips[e] = coin(rng);
  out.relation_order.resize(m);
  std::iota(out.relation_order.begin(), out.relation_order.end(), 0);
  std::shuffle(out.relation_order.begin(), out.relation_order.end(), rng);

  std::string body;
  for (int e : out.relation_order) {
    if (!body.empty()) body += ' ';
    body += render_sentence(graph, schema, graph.edges[e], out.flips[e], options.ood_relations);
  }
  body += '\n';
  body += fill_template(schema.post_prompt_template, {{"entities", join_list(graph.entities)}});

  out.full_text = options.no_prompt ? body : prompt_text(graph, schema) + "\n" + body;
  out.probed_tokens = graph.entities;
  return out;
}

std::vector<int> qa_candidates(const RelationalGraph& graph, const Edge& queried_edge, QaTarget target) {
  const int anchor = target == QaTarget::kSource ? queried_edge.dst : queried_edge.src;
  std::vector<int> out;
  for (const Edge& e : graph.edges) {
    if (e.rel != queried_edge.rel) continue;
    if (target == QaTarget::kSource && e.dst == anchor) out.push_back(e.src);
    if (target == QaTarget::kDestination && e.src == anchor) out.push_back(e.dst);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QaSample render_qa(const RelationalGraph& graph, const Edge& queried_edge, QaTarget target,
                   const DomainSchema& schema, const DescribedSample& description, bool ood_relations) {
  if (std::find(graph.edges.begin(), graph.edges.end(), queried_edge) == graph.edges.end())
    throw RenderError("queried edge is not part of the graph");

  const RelationSpec& spec = spec_for(graph, schema, queried_edge.rel);
  // Non-directional relations can be answered from either side.
  std::vector<int> candidates = qa_candidates(graph, queried_edge, target);
  if (!spec.directional) {
    const auto reverse = qa_candidates(graph, queried_edge,
                                       target == QaTarget::kSource ? QaTarget::kDestination : QaTarget::kSource);
    candidates.insert(candidates.end(), reverse.begin(), reverse.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  }
  if (candidates.size() != 1) {
    throw RenderError(fmt::format("ambiguous query: {} entities answer the {} question about '{}'",
                                  candidates.size(), spec.name,
                                  graph.entities[target == QaTarget::kSource ? queried_edge.dst : queried_edge.src]));
  }

  const bool ask_source = target == QaTarget::kSource;
  const int answer = ask_source ? queried_edge.src : queried_edge.dst;
  const int anchor = ask_source ? queried_edge.dst : queried_edge.src;
  const SurfaceForms& forms = ood_relations ? spec.ood_forms : spec.id_forms;

  QaSample out;
  out.graph_id = description.graph_id;
  out.queried_edge = queried_edge;
  out.target = target;
  out.correct_token = graph.entities[answer];
  out.question = fill_template(schema.qa_template, {{"rel", forms.pick(!ask_source, schema.gender_of(out.correct_token))},
                                                    {"anchor", graph.entities[anchor]},
                                                    {"type", spec.name}});
  out.full_text = description.full_text + "\n" + out.question;
  return out;
}

}  // namespace polar
