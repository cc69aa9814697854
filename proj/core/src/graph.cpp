#include "polar/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "polar/errors.hpp"

namespace polar {

namespace {

using Adjacency = std::vector<std::vector<int>>;

Adjacency undirected_adjacency(const RelationalGraph& g) {
  Adjacency adj(g.entities.size());
  for (const Edge& e : g.edges) {
    adj[e.src].push_back(e.dst);
    adj[e.dst].push_back(e.src);
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

std::vector<int> bfs_hops(const Adjacency& adj, int source) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

constexpr std::pair<DomainKind, std::string_view> kDomainNames[] = {
    {DomainKind::kOrdinality, "ordinality"}, {DomainKind::kSpatial, "spatial"}, {DomainKind::kThematic, "thematic"},
    {DomainKind::kFamily, "family"},         {DomainKind::kMetro, "metro"},
};

}  // namespace

std::string_view to_string(DomainKind kind) {
  for (const auto& [k, name] : kDomainNames)
    if (k == kind) return name;
  return "unknown";
}

DomainKind parse_domain(std::string_view name) {
  for (const auto& [k, n] : kDomainNames)
    if (n == name) return k;
  throw ValidationError(fmt::format("unknown domain '{}'", name));
}

bool is_grid_domain(DomainKind kind) {
  return kind == DomainKind::kOrdinality || kind == DomainKind::kSpatial || kind == DomainKind::kThematic;
}

int grid_dimension(DomainKind kind) {
  switch (kind) {
    case DomainKind::kOrdinality:
      return 1;
    case DomainKind::kSpatial:
    case DomainKind::kThematic:
      return 2;
    default:
      return 0;
  }
}

std::vector<double> DistanceMatrix::upper_triangle() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_) * (n_ - 1) / 2);
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) out.push_back((*this)(i, j));
  return out;
}

bool is_connected(const RelationalGraph& graph) {
  if (graph.entities.empty()) return true;
  const auto dist = bfs_hops(undirected_adjacency(graph), 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

DistanceMatrix shortest_path_distances(const RelationalGraph& graph) {
  const int n = graph.num_entities();
  const Adjacency adj = undirected_adjacency(graph);
  DistanceMatrix out(n);
  for (int i = 0; i < n; ++i) {
    const auto dist = bfs_hops(adj, i);
    for (int j = 0; j < n; ++j) {
      if (dist[j] < 0) {
        throw StructuralError(fmt::format("graph is disconnected: no path between '{}' and '{}'", graph.entities[i],
                                          graph.entities[j]));
      }
      out(i, j) = dist[j];
    }
  }
  return out;
}

IncidenceTensor incidence_tensor(const RelationalGraph& graph, const std::set<int>& directional_types) {
  IncidenceTensor m(graph.num_entities(), graph.num_types());
  for (const Edge& e : graph.edges) {
    if (!directional_types.contains(e.rel)) continue;
    m.at(e.src, e.dst, e.rel) += 1;
    m.at(e.dst, e.src, e.rel) -= 1;
  }
  return m;
}

std::optional<std::vector<std::vector<int>>> grid_embedding(const RelationalGraph& graph,
                                                            const std::vector<int>& axis_of_type, int dim) {
  const int n = graph.num_entities();
  if (n == 0) return std::vector<std::vector<int>>{};

  // Signed unit offsets along the undirected skeleton.
  struct Step {
    int to;
    int axis;
    int sign;
  };
  std::vector<std::vector<Step>> steps(n);
  for (const Edge& e : graph.edges) {
    if (e.rel < 0 || e.rel >= static_cast<int>(axis_of_type.size())) return std::nullopt;
    const int axis = axis_of_type[e.rel];
    if (axis < 0 || axis >= dim) return std::nullopt;
    steps[e.src].push_back({e.dst, axis, +1});
    steps[e.dst].push_back({e.src, axis, -1});
  }

  std::vector<std::vector<int>> pos(n);
  std::vector<bool> placed(n, false);
  pos[0].assign(dim, 0);
  placed[0] = true;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const Step& s : steps[u]) {
      auto expected = pos[u];
      expected[s.axis] += s.sign;
      if (!placed[s.to]) {
        pos[s.to] = std::move(expected);
        placed[s.to] = true;
        queue.push_back(s.to);
      } else if (pos[s.to] != expected) {
        return std::nullopt;
      }
    }
  }
  if (std::find(placed.begin(), placed.end(), false) != placed.end()) return std::nullopt;

  std::map<std::vector<int>, int> occupied;
  for (int i = 0; i < n; ++i)
    if (!occupied.emplace(pos[i], i).second) return std::nullopt;
  return pos;
}

std::vector<std::string> labeled_edge_key(const RelationalGraph& graph) {
  std::vector<std::string> key;
  key.reserve(graph.edges.size());
  for (const Edge& e : graph.edges) {
    key.push_back(fmt::format("{}\x1f{}\x1f{}", graph.entities[e.src], graph.entities[e.dst],
                              graph.relation_types[e.rel]));
  }
  std::sort(key.begin(), key.end());
  return key;
}

std::string graph_to_json(const RelationalGraph& graph) {
  nlohmann::ordered_json j;
  j["domain"] = to_string(graph.domain);
  j["entities"] = graph.entities;
  j["relation_types"] = graph.relation_types;
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : graph.edges) edges.push_back({e.src, e.dst, e.rel});
  j["edges"] = std::move(edges);
  return j.dump();
}

RelationalGraph graph_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    RelationalGraph g;
    g.domain = parse_domain(j.at("domain").get<std::string>());
    g.entities = j.at("entities").get<std::vector<std::string>>();
    g.relation_types = j.at("relation_types").get<std::vector<std::string>>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw FormatError("graph edge must be [src, dst, rel]");
      g.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
    }
    return g;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(fmt::format("invalid graph JSON: {}", ex.what()));
  }
}

}  // namespace polar
