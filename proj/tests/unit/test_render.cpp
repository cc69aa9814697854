#include <doctest.h>

#include "oracles.hpp"
#include "polar/errors.hpp"
#include "polar/generators.hpp"
#include "polar/render.hpp"

using namespace polar;

namespace {

const DomainKind kAll[] = {DomainKind::kOrdinality, DomainKind::kSpatial, DomainKind::kThematic, DomainKind::kFamily,
                           DomainKind::kMetro};

int domain_size(DomainKind k) { return k == DomainKind::kFamily || k == DomainKind::kMetro ? 6 : 5; }

}  // namespace

TEST_CASE("descriptions parse back to exactly the graph's edges") {
  for (DomainKind k : kAll) {
    const DomainSchema s = builtin_schema(k);
    Rng rng = make_rng(21, {static_cast<std::uint64_t>(k)});
    for (int trial = 0; trial < 100; ++trial) {
      const auto g = sample_graph(s, domain_size(k), 2, s.entity_pool, rng);
      for (bool ood : {false, true}) {
        RenderOptions opt;
        opt.ood_relations = ood;
        const auto d = render_description(g, s, rng, opt);
        const auto parsed = oracle::parse_description(d.full_text, g, s, ood);
        REQUIRE_MESSAGE(parsed, d.full_text);
        REQUIRE(*parsed == oracle::canonical_edges(g, s));
      }
    }
  }
}

TEST_CASE("layout: prompt, sentences, fixed-order post-prompt") {
  const DomainSchema s = builtin_schema(DomainKind::kOrdinality);
  Rng rng = make_rng(4);
  const auto g = sample_ordinality_graph(5, s, s.entity_pool, rng);
  Rng a = make_rng(8), b = make_rng(8);
  const auto with = render_description(g, s, a);
  RenderOptions bare;
  bare.no_prompt = true;
  const auto without = render_description(g, s, b, bare);

  const std::string post = "Who are " + join_list(g.entities) + "?";
  CHECK(with.full_text.ends_with("\n" + post));
  CHECK(with.full_text.starts_with("**Mathematical Variables**"));
  CHECK(with.full_text.ends_with(without.full_text));
  CHECK(without.full_text.find("**") == std::string::npos);
  CHECK(with.probed_tokens == g.entities);
  CHECK(with.relation_order == without.relation_order);
  CHECK(with.flips == without.flips);
}

TEST_CASE("each relation is flipped with probability one half") {
  const DomainSchema s = builtin_schema(DomainKind::kSpatial);
  Rng rng = make_rng(6);
  int flips = 0, total = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto g = sample_spatial_graph(5, s, s.entity_pool, rng);
    const auto d = render_description(g, s, rng);
    for (bool f : d.flips) flips += f;
    total += static_cast<int>(d.flips.size());
  }
  const double p = static_cast<double>(flips) / total;
  // 5 standard errors of a Bernoulli(1/2) mean.
  CHECK(std::abs(p - 0.5) < 5 * 0.5 / std::sqrt(total));
}

TEST_CASE("sentence forms follow the flip and the subject's gender") {
  const DomainSchema s = builtin_schema(DomainKind::kFamily);
  RelationalGraph g;
  g.domain = DomainKind::kFamily;
  g.entities = {"Isabel", "James", "Alice"};
  g.relation_types = {"mom of", "dad of", "sibling of"};
  g.edges = {{0, 1, 0}, {0, 2, 0}, {1, 2, 2}};
  CHECK(render_sentence(g, s, g.edges[0], false) == "Isabel is the mom of James.");
  CHECK(render_sentence(g, s, g.edges[0], true) == "James is the son of Isabel.");
  CHECK(render_sentence(g, s, g.edges[1], true) == "Alice is the daughter of Isabel.");
  CHECK(render_sentence(g, s, g.edges[2], false) == "James is the brother of Alice.");
  CHECK(render_sentence(g, s, g.edges[2], true) == "Alice is the sister of James.");
  CHECK(render_sentence(g, s, g.edges[0], false, true) == "Isabel is the mother of James.");
}

TEST_CASE("vocabulary check rejects multi-token entities") {
  const DomainSchema s = builtin_schema(DomainKind::kOrdinality);
  Rng rng = make_rng(2);
  const auto g = sample_ordinality_graph(5, s, s.entity_pool, rng);
  std::unordered_set<std::string> tokens;
  for (const auto& e : g.entities) tokens.insert(" " + e);
  const Vocabulary full(tokens);
  RenderOptions opt;
  opt.vocabulary = &full;
  CHECK_NOTHROW(render_description(g, s, rng, opt));
  tokens.erase(" " + g.entities[2]);
  const Vocabulary partial(tokens);
  opt.vocabulary = &partial;
  CHECK_THROWS_AS(render_description(g, s, rng, opt), RenderError);
}

TEST_CASE("500 ordinality QA items are unambiguous by enumeration") {
  const DomainSchema s = builtin_schema(DomainKind::kOrdinality);
  Rng rng = make_rng(0);
  int items = 0;
  while (items < 500) {
    const auto g = sample_ordinality_graph(5, s, s.entity_pool, rng);
    const auto d = render_description(g, s, rng);
    const Edge& e = g.edges[uniform_index(rng, static_cast<int>(g.edges.size()))];
    const QaTarget target = coin(rng) ? QaTarget::kSource : QaTarget::kDestination;
    const QaSample qa = render_qa(g, e, target, s, d);
    // Brute force: entities x such that (x, anchor) or (anchor, x) carries
    // the queried relation in the asked direction.
    const int anchor = target == QaTarget::kSource ? e.dst : e.src;
    int answers = 0;
    std::string answer;
    for (int x = 0; x < g.num_entities(); ++x) {
      const Edge probe = target == QaTarget::kSource ? Edge{x, anchor, e.rel} : Edge{anchor, x, e.rel};
      if (std::find(g.edges.begin(), g.edges.end(), probe) != g.edges.end()) {
        ++answers;
        answer = g.entities[x];
      }
    }
    REQUIRE(answers == 1);
    REQUIRE(qa.correct_token == answer);
    REQUIRE(qa.full_text.starts_with(d.full_text));
    REQUIRE(qa.question.find(g.entities[anchor]) != std::string::npos);
    ++items;
  }
}

TEST_CASE("ambiguous family questions are refused") {
  const DomainSchema s = builtin_schema(DomainKind::kFamily);
  RelationalGraph g;
  g.domain = DomainKind::kFamily;
  g.entities = {"Isabel", "James", "Alice"};
  g.relation_types = {"mom of", "dad of", "sibling of"};
  g.edges = {{0, 1, 0}, {0, 2, 0}, {1, 2, 2}};
  Rng rng = make_rng(1);
  const auto d = render_description(g, s, rng);
  // "Who is the son/daughter of Isabel?" has two answers.
  CHECK_THROWS_WITH_AS(render_qa(g, g.edges[0], QaTarget::kDestination, s, d), doctest::Contains("ambiguous"),
                       RenderError);
  const auto qa = render_qa(g, g.edges[0], QaTarget::kSource, s, d);
  CHECK(qa.correct_token == "Isabel");
  CHECK(qa.question == "Who is the mom of James?");
}
