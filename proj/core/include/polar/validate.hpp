#pragma once

#include <string>
#include <vector>

#include "polar/graph.hpp"
#include "polar/schema.hpp"

namespace polar {

struct Violation {
  std::string code;  // e.g. "parent cycle", "no grid embedding", "disconnected"
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const;
  std::string summary() const;
};

// Checks graph invariants plus the domain constraints:
//   all      - indices in range, src != dst, no duplicate triples, unique
//              names, undirected connectivity
//   family   - acyclic parentage, <= 2 parents of distinct genders, relation
//              names consistent with the subject's gender, co-siblings share
//              parents
//   metro    - every line's slice is a simple directed path
//   grid     - an injective grid embedding exists and every adjacent pair of
//              occupied cells carries an edge
ValidationReport validate_graph(const RelationalGraph& graph, const DomainSchema& schema);

}  // namespace polar
