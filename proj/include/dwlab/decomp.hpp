#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dwlab/game.hpp"

namespace dwlab {

/// DAG decomposition (D, B). Nodes are 0..size-1; the DAG is stored as child
/// lists because it may have more nodes than the graph it decomposes.
struct DagDecomposition {
  std::vector<std::vector<int>> children;
  std::vector<VertexSet> bags;

  int size() const { return static_cast<int>(bags.size()); }
  int add_node(const VertexSet& bag);
  void add_edge(int from, int to);
  std::vector<int> roots() const;

  nlohmann::json to_json() const;
  static DagDecomposition from_json(const nlohmann::json& j, const Digraph& g);
};

int width(const DagDecomposition& dec);
int size(const DagDecomposition& dec);

struct DecompositionCheck {
  bool ok = true;
  std::string axiom;    // "acyclic", "D1", "D2", "D3" or "D4"
  std::string witness;  // human-readable offending node/edge/vertex
  explicit operator bool() const { return ok; }
};

/// Checks acyclicity and the four axioms. Mismatched ids throw InputError.
DecompositionCheck validate(const Digraph& g, const DagDecomposition& dec);

/// D2 by brute force over all triples a <= b <= c. Test oracle for small DAGs.
bool d2_holds_by_triples(const DagDecomposition& dec);

/// B_{>=d} for every node d.
std::vector<VertexSet> below_unions(const DagDecomposition& dec);

/// Cop strategy that only ever occupies bags: from (B_d, R) the cops move to
/// the bag of a child whose subtree union meets R. With several roots the
/// first move is empty so that the robber commits to a root first.
StrategyTable strategy_from_decomposition(const Digraph& g, const DagDecomposition& dec);

/// Decomposition read off the plays of a winning monotone strategy. Nodes are
/// the consistent cop positions plus the placeholder; the bag of (C, R) holds
/// the cops of the next placement that touch the territory or still guard it.
DagDecomposition decomposition_from_strategy(const Digraph& g, const CopStrategy& strat, int k);

}  // namespace dwlab
