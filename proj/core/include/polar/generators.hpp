#pragma once

#include <vector>

#include "polar/graph.hpp"
#include "polar/rng.hpp"
#include "polar/schema.hpp"

namespace polar {

inline constexpr int kSamplerBudget = 10'000;

struct GridSample {
  RelationalGraph graph;
  // positions[i] is the Z^d cell of entity i.
  std::vector<std::vector<int>> positions;
};

// Random signed unit-step growth on Z^d followed by one typed edge per ordered
// pair at a positive unit offset. Entity names are drawn from `pool`, relation
// types are the first `dim` directional relations of `schema` in a random
// axis assignment.
GridSample sample_grid_graph(int n, int dim, const DomainSchema& schema, const std::vector<std::string>& pool,
                             Rng& rng);

RelationalGraph sample_ordinality_graph(int n, const DomainSchema& schema, const std::vector<std::string>& pool,
                                        Rng& rng);
RelationalGraph sample_spatial_graph(int n, const DomainSchema& schema, const std::vector<std::string>& pool,
                                     Rng& rng);
RelationalGraph sample_thematic_graph(int n, const DomainSchema& schema, const std::vector<std::string>& pool,
                                      Rng& rng);

// Parent forest of one or two generations below a founding parent set, with
// sibling edges among co-children and among sampled founder sibling sets.
// Throws GenerationError (with `seed_hint`) once the retry budget is spent.
RelationalGraph sample_family_tree(int n, const DomainSchema& schema, const std::vector<std::string>& pool, Rng& rng,
                                   std::uint64_t seed_hint = 0);

// `n_lines` simple-path lines over `n_stops` distinct stops; every pair of
// lines shares exactly one stop that is interior to both.
RelationalGraph sample_metro_map(int n_lines, int n_stops, const DomainSchema& schema,
                                 const std::vector<std::string>& pool, Rng& rng, std::uint64_t seed_hint = 0);

// Domain dispatch with the default layout per domain (metro uses `n_lines`).
RelationalGraph sample_graph(const DomainSchema& schema, int n, int n_lines, const std::vector<std::string>& pool,
                             Rng& rng, std::uint64_t seed_hint = 0);

}  // namespace polar
