#include "polar/validate.hpp"

#include <map>
#include <set>

#include <fmt/format.h>

namespace polar {

bool ValidationReport::has(const std::string& code) const {
  for (const auto& v : violations)
    if (v.code == code) return true;
  return false;
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.code + ": " + v.detail;
  }
  return out;
}

namespace {

void check_basic(const RelationalGraph& g, std::vector<Violation>& out) {
  const int n = g.num_entities();
  const int t = g.num_types();
  std::set<std::string> names;
  for (const auto& e : g.entities)
    if (!names.insert(e).second) out.push_back({"duplicate entity", e});
  std::set<Edge> seen;
  for (const Edge& e : g.edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n || e.rel < 0 || e.rel >= t) {
      out.push_back({"index out of range", fmt::format("({}, {}, {})", e.src, e.dst, e.rel)});
      continue;
    }
    if (e.src == e.dst) out.push_back({"self loop", g.entities[e.src]});
    if (!seen.insert(e).second)
      out.push_back({"duplicate edge",
                     fmt::format("({}, {}, {})", g.entities[e.src], g.entities[e.dst], g.relation_types[e.rel])});
  }
}

void check_family(const RelationalGraph& g, const DomainSchema& schema, std::vector<Violation>& out) {
  const int n = g.num_entities();
  std::vector<std::vector<int>> parents(n);
  std::vector<std::vector<int>> children(n);
  std::vector<std::pair<int, int>> siblings;

  for (const Edge& e : g.edges) {
    const RelationSpec* spec = nullptr;
    for (const auto& r : schema.relations)
      if (r.name == g.relation_types[e.rel]) spec = &r;
    if (spec == nullptr) {
      out.push_back({"unknown relation", g.relation_types[e.rel]});
      continue;
    }
    if (spec->directional) {
      parents[e.dst].push_back(e.src);
      children[e.src].push_back(e.dst);
      if (spec->src_gender) {
        const Gender* gender = schema.gender_of(g.entities[e.src]);
        if (gender == nullptr || *gender != *spec->src_gender)
          out.push_back({"gender mismatch", fmt::format("{} cannot be the {} {}", g.entities[e.src], spec->name,
                                                        g.entities[e.dst])});
      }
    } else {
      siblings.emplace_back(e.src, e.dst);
    }
  }

  for (int c = 0; c < n; ++c) {
    auto& ps = parents[c];
    if (ps.size() > 2) out.push_back({"too many parents", g.entities[c]});
    if (ps.size() == 2) {
      const Gender* a = schema.gender_of(g.entities[ps[0]]);
      const Gender* b = schema.gender_of(g.entities[ps[1]]);
      if (a != nullptr && b != nullptr && *a == *b)
        out.push_back({"same-gender parents", g.entities[c]});
    }
  }

  // Cycle through parent links: iterative DFS with colors.
  std::vector<int> color(n, 0);
  bool cycle = false;
  for (int root = 0; root < n && !cycle; ++root) {
    if (color[root] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty() && !cycle) {
      auto& [u, next] = stack.back();
      if (next < children[u].size()) {
        const int v = children[u][next++];
        if (color[v] == 1) {
          cycle = true;
        } else if (color[v] == 0) {
          color[v] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        color[u] = 2;
        stack.pop_back();
      }
    }
  }
  if (cycle) out.push_back({"parent cycle", "parentage links form a cycle"});

  for (const auto& [a, b] : siblings) {
    auto pa = parents[a];
    auto pb = parents[b];
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    if (!pa.empty() && !pb.empty() && pa != pb)
      out.push_back({"inconsistent parentage",
                     fmt::format("siblings {} and {} have different parents", g.entities[a], g.entities[b])});
    if (std::find(parents[a].begin(), parents[a].end(), b) != parents[a].end() ||
        std::find(parents[b].begin(), parents[b].end(), a) != parents[b].end())
      out.push_back({"inconsistent parentage",
                     fmt::format("{} and {} are both siblings and parent/child", g.entities[a], g.entities[b])});
  }
}

void check_metro(const RelationalGraph& g, std::vector<Violation>& out) {
  const int n = g.num_entities();
  for (int r = 0; r < g.num_types(); ++r) {
    std::vector<int> in(n, 0), outd(n, 0);
    std::set<int> nodes;
    int edges = 0;
    RelationalGraph slice;
    slice.entities = g.entities;
    slice.relation_types = g.relation_types;
    for (const Edge& e : g.edges) {
      if (e.rel != r) continue;
      ++in[e.dst];
      ++outd[e.src];
      nodes.insert(e.src);
      nodes.insert(e.dst);
      ++edges;
      slice.edges.push_back(e);
    }
    if (edges == 0) continue;
    bool path = edges + 1 == static_cast<int>(nodes.size());
    for (int v : nodes) path = path && in[v] <= 1 && outd[v] <= 1;
    if (path) {
      // Connected within the line's own stops.
      std::vector<int> remap(n, -1);
      RelationalGraph sub;
      sub.relation_types = g.relation_types;
      for (int v : nodes) {
        remap[v] = sub.num_entities();
        sub.entities.push_back(g.entities[v]);
      }
      for (const Edge& e : slice.edges) sub.edges.push_back({remap[e.src], remap[e.dst], e.rel});
      path = is_connected(sub);
    }
    if (!path) out.push_back({"line not a path", g.relation_types[r]});
  }
}

void check_grid(const RelationalGraph& g, std::vector<Violation>& out) {
  const int dim = grid_dimension(g.domain);
  std::vector<int> axis(g.num_types());
  for (int r = 0; r < g.num_types(); ++r) axis[r] = r;
  if (g.num_types() > dim) {
    out.push_back({"no grid embedding", fmt::format("{} relation types for a {}-d grid", g.num_types(), dim)});
    return;
  }
  const auto pos = grid_embedding(g, axis, dim);
  if (!pos) {
    out.push_back({"no grid embedding", "edge constraints are contradictory or entities collide"});
    return;
  }
  // Every unit-adjacent pair of cells must carry its edge.
  std::set<Edge> present(g.edges.begin(), g.edges.end());
  const int n = g.num_entities();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int a = 0; a < dim; ++a) {
        auto expected = (*pos)[i];
        expected[a] += 1;
        if ((*pos)[j] == expected && a < g.num_types() && !present.contains(Edge{i, j, a}))
          out.push_back({"missing adjacency edge", fmt::format("{} -> {}", g.entities[i], g.entities[j])});
      }
    }
  }
}

}  // namespace

ValidationReport validate_graph(const RelationalGraph& graph, const DomainSchema& schema) {
  ValidationReport report;
  auto& v = report.violations;
  check_basic(graph, v);
  if (!v.empty()) return report;
  if (!is_connected(graph)) v.push_back({"disconnected", "undirected skeleton is not connected"});

  switch (graph.domain) {
    case DomainKind::kFamily:
      check_family(graph, schema, v);
      break;
    case DomainKind::kMetro:
      check_metro(graph, v);
      break;
    default:
      if (v.empty()) check_grid(graph, v);
      break;
  }
  return report;
}

}  // namespace polar
