#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "oracles.hpp"
#include "polar/errors.hpp"
#include "polar/generators.hpp"
#include "polar/validate.hpp"

using namespace polar;

namespace {

// Stops of line r in travel order (edges point from the later stop back to
// the earlier one).
std::vector<int> line_order(const RelationalGraph& g, int r) {
  std::map<int, int> next;  // earlier -> later
  std::set<int> later;
  for (const auto& e : g.edges)
    if (e.rel == r) {
      next[e.dst] = e.src;
      later.insert(e.src);
    }
  int start = -1;
  for (const auto& [a, b] : next)
    if (!later.count(a)) start = a;
  std::vector<int> out;
  for (int s = start; s >= 0;) {
    out.push_back(s);
    auto it = next.find(s);
    s = it == next.end() ? -1 : it->second;
  }
  return out;
}

}  // namespace

TEST_CASE("Algorithm 1 graphs are exactly the positive unit offsets of their cells") {
  const DomainSchema spatial = builtin_schema(DomainKind::kSpatial);
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 4;
    const GridSample s = sample_grid_graph(n, 2, spatial, spatial.entity_pool, rng);
    REQUIRE(s.graph.num_entities() == n);
    std::set<std::vector<int>> cells(s.positions.begin(), s.positions.end());
    REQUIRE(static_cast<int>(cells.size()) == n);
    std::set<std::array<int, 3>> expected;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < 2; ++a) {
          std::vector<int> step = s.positions[i];
          step[a] += 1;
          if (step == s.positions[j]) expected.insert({i, j, a});
        }
    std::set<std::array<int, 3>> actual;
    for (const auto& e : s.graph.edges) actual.insert({e.src, e.dst, e.rel});
    REQUIRE(actual == expected);
    REQUIRE(oracle::is_grid_graph(s.graph, 2));
  }
}

TEST_CASE("ordinality graphs are chains") {
  const DomainSchema s = builtin_schema(DomainKind::kOrdinality);
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = sample_ordinality_graph(5, s, s.entity_pool, rng);
    REQUIRE(g.edges.size() == 4);
    REQUIRE(oracle::is_grid_graph(g, 1));
    REQUIRE(validate_graph(g, s).ok());
  }
}

TEST_CASE("family trees are valid, acyclic and use both parent genders") {
  const DomainSchema s = builtin_schema(DomainKind::kFamily);
  Rng rng = make_rng(9);
  int siblings = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = sample_family_tree(6, s, s.entity_pool, rng, trial);
    const auto rep = validate_graph(g, s);
    REQUIRE_MESSAGE(rep.ok(), rep.summary());
    REQUIRE_FALSE(oracle::has_cycle(g, {0, 1}));
    const auto dist = oracle::floyd_warshall(g);
    REQUIRE(std::find(dist[0].begin(), dist[0].end(), -1) == dist[0].end());
    for (const auto& e : g.edges)
      if (g.relation_types[e.rel] == "sibling of") ++siblings;
  }
  CHECK(siblings > 0);
}

TEST_CASE("metro lines share exactly one interior hub per pair") {
  const DomainSchema s = builtin_schema(DomainKind::kMetro);
  Rng rng = make_rng(11);
  for (int lines : {1, 2, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto g = sample_metro_map(lines, 8, s, s.entity_pool, rng, trial);
      REQUIRE(validate_graph(g, s).ok());
      REQUIRE(g.num_types() == lines);
      std::vector<std::vector<int>> order;
      for (int r = 0; r < lines; ++r) order.push_back(line_order(g, r));
      std::set<int> covered;
      for (const auto& o : order) covered.insert(o.begin(), o.end());
      REQUIRE(static_cast<int>(covered.size()) == 8);
      for (int a = 0; a < lines; ++a)
        for (int b = a + 1; b < lines; ++b) {
          int shared = 0;
          for (std::size_t i = 0; i < order[a].size(); ++i) {
            auto it = std::find(order[b].begin(), order[b].end(), order[a][i]);
            if (it == order[b].end()) continue;
            ++shared;
            const auto j = static_cast<std::size_t>(it - order[b].begin());
            REQUIRE(i > 0);
            REQUIRE(i + 1 < order[a].size());
            REQUIRE(j > 0);
            REQUIRE(j + 1 < order[b].size());
          }
          REQUIRE(shared == 1);
        }
    }
  }
}

TEST_CASE("sampling is deterministic under the seed") {
  for (DomainKind k : {DomainKind::kOrdinality, DomainKind::kSpatial, DomainKind::kThematic, DomainKind::kFamily,
                       DomainKind::kMetro}) {
    const DomainSchema s = builtin_schema(k);
    Rng a = make_rng(42), b = make_rng(42);
    const int n = k == DomainKind::kMetro || k == DomainKind::kFamily ? 6 : 5;
    CHECK(sample_graph(s, n, 2, s.entity_pool, a) == sample_graph(s, n, 2, s.entity_pool, b));
  }
}

TEST_CASE("impossible requests fail with a diagnostic") {
  const DomainSchema s = builtin_schema(DomainKind::kMetro);
  Rng rng = make_rng(1);
  CHECK_THROWS_AS(sample_metro_map(4, 8, s, s.entity_pool, rng), ValidationError);
  CHECK_THROWS_AS(sample_metro_map(2, 14, s, s.entity_pool, rng), ValidationError);
  // Two lines each needing an interior hub cannot fit in three stops.
  CHECK_THROWS_AS(sample_metro_map(2, 3, s, s.entity_pool, rng, 77), GenerationError);
}
