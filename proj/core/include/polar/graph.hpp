#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace polar {

enum class DomainKind { kOrdinality, kSpatial, kThematic, kFamily, kMetro };

std::string_view to_string(DomainKind kind);
DomainKind parse_domain(std::string_view name);

// Grid domains admit an exact Euclidean embedding on Z^d.
bool is_grid_domain(DomainKind kind);
int grid_dimension(DomainKind kind);

struct Edge {
  int src = 0;
  int dst = 0;
  int rel = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Entities plus typed directed edges. Entity order is canonical: it fixes the
// row order of activation matrices and the post-prompt listing.
struct RelationalGraph {
  DomainKind domain = DomainKind::kOrdinality;
  std::vector<std::string> entities;
  std::vector<Edge> edges;
  std::vector<std::string> relation_types;

  int num_entities() const { return static_cast<int>(entities.size()); }
  int num_types() const { return static_cast<int>(relation_types.size()); }

  friend bool operator==(const RelationalGraph&, const RelationalGraph&) = default;
};

// Pairwise hop counts on the undirected skeleton, row-major n x n.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n) : n_(n), values_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const { return n_; }
  int operator()(int i, int j) const { return values_[index(i, j)]; }
  int& operator()(int i, int j) { return values_[index(i, j)]; }

  // Entries (i, j) with i < j in row-major order.
  std::vector<double> upper_triangle() const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_ = 0;
  std::vector<int> values_;
};

// Antisymmetric n x n x t tensor with entries in {-1, 0, +1}.
class IncidenceTensor {
 public:
  IncidenceTensor() = default;
  IncidenceTensor(int n, int t) : n_(n), t_(t), values_(static_cast<std::size_t>(n) * n * t, 0) {}

  int size() const { return n_; }
  int num_types() const { return t_; }
  int operator()(int i, int j, int r) const { return values_[index(i, j, r)]; }
  std::int8_t& at(int i, int j, int r) { return values_[index(i, j, r)]; }

  friend bool operator==(const IncidenceTensor&, const IncidenceTensor&) = default;

 private:
  std::size_t index(int i, int j, int r) const {
    return (static_cast<std::size_t>(i) * n_ + j) * t_ + r;
  }

  int n_ = 0;
  int t_ = 0;
  std::vector<std::int8_t> values_;
};

// Throws StructuralError naming an unreachable pair if the skeleton is
// disconnected.
DistanceMatrix shortest_path_distances(const RelationalGraph& graph);

// Slices of types outside `directional_types` are left at zero.
IncidenceTensor incidence_tensor(const RelationalGraph& graph, const std::set<int>& directional_types);

bool is_connected(const RelationalGraph& graph);

// Positions on Z^d consistent with every edge, where relation type r is the
// unit step along axis `axis_of_type[r]`. Returns nullopt if the constraints
// are contradictory or two entities collide. Requires a connected graph.
std::optional<std::vector<std::vector<int>>> grid_embedding(const RelationalGraph& graph,
                                                            const std::vector<int>& axis_of_type, int dim);

// Key for exact labeled-structure comparison: sorted (src name, dst name, type name).
std::vector<std::string> labeled_edge_key(const RelationalGraph& graph);

// {"domain", "entities", "relation_types", "edges"} as a compact JSON string.
std::string graph_to_json(const RelationalGraph& graph);
RelationalGraph graph_from_json(std::string_view json);

}  // namespace polar
