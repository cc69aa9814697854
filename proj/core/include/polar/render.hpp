#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "polar/graph.hpp"
#include "polar/rng.hpp"
#include "polar/schema.hpp"

namespace polar {

// Token surfaces of a model vocabulary. An entity is single-token iff " name"
// (the form it takes in the post-prompt listing) is present.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::unordered_set<std::string> tokens) : tokens_(std::move(tokens)) {}

  // Newline-separated token strings; leading spaces are significant.
  static Vocabulary load(const std::string& path);

  bool is_single_token(const std::string& entity) const;
  std::size_t size() const { return tokens_.size(); }

 private:
  std::unordered_set<std::string> tokens_;
};

struct RenderOptions {
  bool no_prompt = false;
  bool ood_relations = false;
  const Vocabulary* vocabulary = nullptr;  // skip the single-token check when null
};

struct DescribedSample {
  std::string graph_id;
  std::string full_text;
  std::vector<std::string> probed_tokens;
  std::vector<int> relation_order;  // edge indices in sentence order
  std::vector<bool> flips;          // per edge index: inverse surface form used
};

// Prompt, shuffled relation sentences (each independently flipped with
// probability 1/2), then the fixed-order post-prompt. The RNG draws do not
// depend on `no_prompt`.
DescribedSample render_description(const RelationalGraph& graph, const DomainSchema& schema, Rng& rng,
                                   const RenderOptions& options = {});

// Sentence for one edge; exposed for the QA renderer and the tests.
std::string render_sentence(const RelationalGraph& graph, const DomainSchema& schema, const Edge& edge, bool flipped,
                            bool ood_relations = false);

enum class QaTarget { kSource, kDestination };

struct QaSample {
  std::string graph_id;
  std::string full_text;
  Edge queried_edge;
  QaTarget target = QaTarget::kSource;
  std::string question;
  std::string correct_token;
};

// Entities that answer "which X is <rel> <anchor>?" for the queried edge's
// relation type, anchored at the non-target endpoint.
std::vector<int> qa_candidates(const RelationalGraph& graph, const Edge& queried_edge, QaTarget target);

// Appends a question asking for the source (or destination) of the queried
// edge. Throws RenderError with "ambiguous" when more than one entity answers.
QaSample render_qa(const RelationalGraph& graph, const Edge& queried_edge, QaTarget target,
                   const DomainSchema& schema, const DescribedSample& description, bool ood_relations = false);

}  // namespace polar
