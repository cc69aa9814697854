#include "polar/generators.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "polar/errors.hpp"

namespace polar {

namespace {

std::vector<std::string> draw_names(const std::vector<std::string>& pool, int n, Rng& rng) {
  if (n > static_cast<int>(pool.size()))
    throw ValidationError(fmt::format("entity pool exhausted: {} entities requested from a pool of {}", n,
                                      pool.size()));
  std::vector<std::string> names = pool;
  std::shuffle(names.begin(), names.end(), rng);
  names.resize(n);
  return names;
}

std::vector<std::string> relation_names(const DomainSchema& schema, int count) {
  std::vector<std::string> out;
  for (const auto& r : schema.relations) {
    if (static_cast<int>(out.size()) == count) break;
    out.push_back(r.name);
  }
  if (static_cast<int>(out.size()) < count)
    throw ValidationError(fmt::format("schema {} defines fewer than {} relation types", to_string(schema.domain),
                                      count));
  return out;
}

}  // namespace

GridSample sample_grid_graph(int n, int dim, const DomainSchema& schema, const std::vector<std::string>& pool,
                             Rng& rng) {
  if (n < 2 || n > DomainSchema::kPoolSize) throw ValidationError(fmt::format("grid graph needs 2 <= n <= 13, got {}", n));
  if (dim != 1 && dim != 2) throw ValidationError(fmt::format("grid dimension must be 1 or 2, got {}", dim));

  std::vector<std::vector<int>> cells{std::vector<int>(dim, 0)};
  std::set<std::vector<int>> occupied(cells.begin(), cells.end());
  int attempts = 0;
  while (static_cast<int>(cells.size()) < n) {
    if (++attempts > kSamplerBudget * n)
      throw GenerationError(fmt::format("grid growth exceeded its budget (n={}, d={})", n, dim));
    auto x = cells[uniform_index(rng, static_cast<int>(cells.size()))];
    const int axis = uniform_index(rng, dim);
    const int sign = coin(rng) ? 1 : -1;
    x[axis] += sign;
    if (occupied.insert(x).second) cells.push_back(std::move(x));
  }

  GridSample out;
  RelationalGraph& g = out.graph;
  g.domain = schema.domain;
  g.entities = draw_names(pool, n, rng);
  g.relation_types = relation_names(schema, dim);

  // f: cells -> entities, g: axes -> relation types.
  std::vector<int> entity_of_cell(n);
  std::iota(entity_of_cell.begin(), entity_of_cell.end(), 0);
  std::shuffle(entity_of_cell.begin(), entity_of_cell.end(), rng);
  std::vector<int> type_of_axis(dim);
  std::iota(type_of_axis.begin(), type_of_axis.end(), 0);
  std::shuffle(type_of_axis.begin(), type_of_axis.end(), rng);

  out.positions.assign(n, {});
  for (int c = 0; c < n; ++c) out.positions[entity_of_cell[c]] = cells[c];

  // Store positions in type-axis order so that relation type r steps along
  // coordinate r.
  for (auto& p : out.positions) {
    std::vector<int> q(dim);
    for (int a = 0; a < dim; ++a) q[type_of_axis[a]] = p[a];
    p = std::move(q);
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int axis = -1;
      int moved = 0;
      for (int a = 0; a < dim; ++a) {
        const int delta = out.positions[j][a] - out.positions[i][a];
        if (delta != 0) {
          ++moved;
          axis = delta == 1 ? a : -2;
        }
      }
      if (moved == 1 && axis >= 0) g.edges.push_back({i, j, axis});
    }
  }
  return out;
}

RelationalGraph sample_ordinality_graph(int n, const DomainSchema& schema, const std::vector<std::string>& pool,
                                        Rng& rng) {
  return sample_grid_graph(n, 1, schema, pool, rng).graph;
}

RelationalGraph sample_spatial_graph(int n, const DomainSchema& schema, const std::vector<std::string>& pool,
                                     Rng& rng) {
  return sample_grid_graph(n, 2, schema, pool, rng).graph;
}

RelationalGraph sample_thematic_graph(int n, const DomainSchema& schema, const std::vector<std::string>& pool,
                                      Rng& rng) {
  return sample_grid_graph(n, 2, schema, pool, rng).graph;
}

namespace {

struct Person {
  Gender gender;
  int generation;
};

struct SiblingGroup {
  std::vector<int> parents;  // 0..2 persons of distinct genders
  std::vector<int> members;
};

Gender random_gender(Rng& rng) { return coin(rng) ? Gender::kMale : Gender::kFemale; }
Gender other(Gender g) { return g == Gender::kMale ? Gender::kFemale : Gender::kMale; }

// One attempt at the family recipe; returns false if the name pools cannot
// cover the sampled genders.
bool try_family(int n, const DomainSchema& schema, const std::vector<std::string>& pool, Rng& rng,
                RelationalGraph& out) {
  std::vector<Person> people;
  std::vector<SiblingGroup> groups;
  std::vector<int> parent_of_group(0);
  std::vector<bool> is_parent;

  auto add_person = [&](Gender g, int generation) {
    people.push_back({g, generation});
    is_parent.push_back(false);
    return static_cast<int>(people.size()) - 1;
  };

  // Founding parent set.
  SiblingGroup root;
  const int first = add_person(random_gender(rng), 0);
  root.parents.push_back(first);
  if (coin(rng)) root.parents.push_back(add_person(other(people[first].gender), 0));
  for (int p : root.parents) is_parent[p] = true;
  root.members.push_back(add_person(random_gender(rng), 1));
  groups.push_back(root);

  while (static_cast<int>(people.size()) < n) {
    const int remaining = n - static_cast<int>(people.size());
    const int choice = uniform_index(rng, 3);
    if (choice == 0) {
      // Another child of an existing parent set.
      auto& grp = groups[uniform_index(rng, static_cast<int>(groups.size()))];
      if (grp.parents.empty()) continue;
      const int generation = people[grp.parents[0]].generation + 1;
      grp.members.push_back(add_person(random_gender(rng), generation));
    } else if (choice == 1) {
      // A first-generation child starts a family, optionally with a partner
      // from outside the graph so far.
      std::vector<int> candidates;
      for (int p = 0; p < static_cast<int>(people.size()); ++p)
        if (people[p].generation == 1 && !is_parent[p]) candidates.push_back(p);
      if (candidates.empty()) continue;
      const int p = candidates[uniform_index(rng, static_cast<int>(candidates.size()))];
      SiblingGroup grp;
      grp.parents.push_back(p);
      is_parent[p] = true;
      if (remaining >= 2 && coin(rng)) {
        const int partner = add_person(other(people[p].gender), 1);
        is_parent[partner] = true;
        grp.parents.push_back(partner);
      }
      grp.members.push_back(add_person(random_gender(rng), 2));
      groups.push_back(grp);
    } else {
      // A sibling of a founder; founders have no parents in the graph.
      const int founder = root.parents[uniform_index(rng, static_cast<int>(root.parents.size()))];
      auto it = std::find_if(groups.begin(), groups.end(), [&](const SiblingGroup& g) {
        return g.parents.empty() && std::find(g.members.begin(), g.members.end(), founder) != g.members.end();
      });
      if (it == groups.end()) {
        groups.push_back(SiblingGroup{{}, {founder}});
        it = std::prev(groups.end());
      }
      it->members.push_back(add_person(random_gender(rng), 0));
    }
  }

  // Names respecting the sampled genders.
  std::vector<std::string> males, females;
  for (const auto& name : pool) {
    const Gender* g = schema.gender_of(name);
    if (g == nullptr) continue;
    (*g == Gender::kMale ? males : females).push_back(name);
  }
  std::shuffle(males.begin(), males.end(), rng);
  std::shuffle(females.begin(), females.end(), rng);
  std::vector<std::string> names(people.size());
  std::size_t next_m = 0, next_f = 0;
  for (std::size_t i = 0; i < people.size(); ++i) {
    if (people[i].gender == Gender::kMale) {
      if (next_m >= males.size()) return false;
      names[i] = males[next_m++];
    } else {
      if (next_f >= females.size()) return false;
      names[i] = females[next_f++];
    }
  }

  // Canonical entity order is a random permutation of the people.
  std::vector<int> order(people.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> slot(people.size());
  for (std::size_t s = 0; s < order.size(); ++s) slot[order[s]] = static_cast<int>(s);

  const int mom = schema.relation_index("mom of");
  const int dad = schema.relation_index("dad of");
  const int sib = schema.relation_index("sibling of");

  out = RelationalGraph{};
  out.domain = DomainKind::kFamily;
  for (int p : order) out.entities.push_back(names[p]);
  for (const auto& r : schema.relations) out.relation_types.push_back(r.name);
  for (const auto& grp : groups) {
    for (int child : grp.members) {
      for (int parent : grp.parents)
        out.edges.push_back({slot[parent], slot[child], people[parent].gender == Gender::kFemale ? mom : dad});
    }
    for (std::size_t a = 0; a < grp.members.size(); ++a)
      for (std::size_t b = a + 1; b < grp.members.size(); ++b)
        out.edges.push_back({slot[grp.members[a]], slot[grp.members[b]], sib});
  }
  return true;
}

}  // namespace

RelationalGraph sample_family_tree(int n, const DomainSchema& schema, const std::vector<std::string>& pool, Rng& rng,
                                   std::uint64_t seed_hint) {
  if (n < 3 || n > DomainSchema::kPoolSize)
    throw ValidationError(fmt::format("family tree needs 3 <= n <= 13, got {}", n));
  RelationalGraph g;
  for (int attempt = 0; attempt < kSamplerBudget; ++attempt) {
    if (try_family(n, schema, pool, rng, g)) return g;
  }
  throw GenerationError(fmt::format("family tree sampling failed after {} attempts (n={}, seed={})", kSamplerBudget,
                                    n, seed_hint));
}

namespace {

bool try_metro(int n_lines, int n_stops, Rng& rng, std::vector<std::vector<int>>& lines) {
  // Line lengths; line 0 needs 2+ stops, later lines need 2 interior slots
  // for hubs plus endpoints.
  std::vector<int> lengths(n_lines);
  for (auto& len : lengths) len = 2 + uniform_index(rng, n_stops - 1);  // [2, n_stops]

  lines.clear();
  int next_stop = 0;
  for (int li = 0; li < n_lines; ++li) {
    std::vector<int> hubs;
    for (int prev = 0; prev < li; ++prev) {
      const auto& pl = lines[prev];
      if (pl.size() < 3) return false;
      const int h = pl[1 + uniform_index(rng, static_cast<int>(pl.size()) - 2)];
      if (std::find(hubs.begin(), hubs.end(), h) == hubs.end()) hubs.push_back(h);
    }
    const int fresh = lengths[li] - static_cast<int>(hubs.size());
    if (fresh < (hubs.empty() ? 0 : 2)) return false;  // hubs must be interior
    std::vector<int> stops;
    for (int s = 0; s < fresh; ++s) stops.push_back(next_stop++);
    // Hubs go into interior slots.
    std::shuffle(stops.begin(), stops.end(), rng);
    for (int h : hubs) {
      const int at = 1 + uniform_index(rng, static_cast<int>(stops.size()) - 1);
      stops.insert(stops.begin() + at, h);
    }
    lines.push_back(std::move(stops));
  }
  if (next_stop != n_stops) return false;

  // Each pair of lines shares exactly one stop, interior to both.
  for (int a = 0; a < n_lines; ++a) {
    for (int b = a + 1; b < n_lines; ++b) {
      int shared = 0;
      for (std::size_t i = 0; i < lines[a].size(); ++i) {
        auto it = std::find(lines[b].begin(), lines[b].end(), lines[a][i]);
        if (it == lines[b].end()) continue;
        ++shared;
        const auto j = static_cast<std::size_t>(it - lines[b].begin());
        if (i == 0 || i + 1 == lines[a].size() || j == 0 || j + 1 == lines[b].size()) return false;
      }
      if (shared != 1) return false;
    }
  }
  return true;
}

}  // namespace

RelationalGraph sample_metro_map(int n_lines, int n_stops, const DomainSchema& schema,
                                 const std::vector<std::string>& pool, Rng& rng, std::uint64_t seed_hint) {
  if (n_lines < 1 || n_lines > 3) throw ValidationError(fmt::format("metro needs 1-3 lines, got {}", n_lines));
  if (n_stops < 2 || n_stops > DomainSchema::kPoolSize)
    throw ValidationError(fmt::format("metro needs 2 <= stops <= 13, got {}", n_stops));

  std::vector<std::vector<int>> lines;
  bool ok = false;
  for (int attempt = 0; attempt < kSamplerBudget && !ok; ++attempt) ok = try_metro(n_lines, n_stops, rng, lines);
  if (!ok)
    throw GenerationError(fmt::format("metro sampling failed after {} attempts (lines={}, stops={}, seed={})",
                                      kSamplerBudget, n_lines, n_stops, seed_hint));

  RelationalGraph g;
  g.domain = DomainKind::kMetro;
  const auto names = draw_names(pool, n_stops, rng);
  std::vector<int> slot(n_stops);
  std::iota(slot.begin(), slot.end(), 0);
  std::shuffle(slot.begin(), slot.end(), rng);
  g.entities.resize(n_stops);
  for (int s = 0; s < n_stops; ++s) g.entities[slot[s]] = names[s];
  g.relation_types = relation_names(schema, n_lines);
  for (int li = 0; li < n_lines; ++li) {
    const auto& stops = lines[li];
    // (later stop, earlier stop, line): "<later> is one stop after <earlier>".
    for (std::size_t s = 0; s + 1 < stops.size(); ++s) g.edges.push_back({slot[stops[s + 1]], slot[stops[s]], li});
  }
  return g;
}

RelationalGraph sample_graph(const DomainSchema& schema, int n, int n_lines, const std::vector<std::string>& pool,
                             Rng& rng, std::uint64_t seed_hint) {
  switch (schema.domain) {
    case DomainKind::kOrdinality:
      return sample_ordinality_graph(n, schema, pool, rng);
    case DomainKind::kSpatial:
      return sample_spatial_graph(n, schema, pool, rng);
    case DomainKind::kThematic:
      return sample_thematic_graph(n, schema, pool, rng);
    case DomainKind::kFamily:
      return sample_family_tree(n, schema, pool, rng, seed_hint);
    case DomainKind::kMetro:
      return sample_metro_map(n_lines, n, schema, pool, rng, seed_hint);
  }
  throw ValidationError("unknown domain");
}

}  // namespace polar
