#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dwlab/decomp.hpp"
#include "dwlab/digraph.hpp"

namespace dwlab {

/// Elimination order as a permutation of V(G), earliest first.
using EliminationOrder = std::vector<VertexId>;

/// Later vertices hit by an edge out of the region v reaches through itself
/// and earlier vertices.
VertexSet support(const Digraph& g, const EliminationOrder& order, VertexId v);

/// Support of v when exactly the vertices of `earlier` precede it.
VertexSet support_after(const Digraph& g, const VertexSet& earlier, VertexId v);

int order_width(const Digraph& g, const EliminationOrder& order);

struct KellyResult {
  int width = 0;  // 1 + min over orders of the order width
  EliminationOrder order;
};

/// Exact Kelly-width by dynamic programming over eliminated-vertex sets.
KellyResult kelly_width(const Digraph& g, int max_vertices = 24);

/// The same by trying all permutations (|V| <= 9).
KellyResult kelly_width_by_permutations(const Digraph& g);

/// Tree with bags; tree nodes are 0..size-1.
struct DDecomposition {
  std::vector<std::pair<int, int>> tree;
  std::vector<VertexSet> bags;

  int size() const { return static_cast<int>(bags.size()); }
  nlohmann::json to_json() const;
  static DDecomposition from_json(const nlohmann::json& j, const Digraph& g);
};

int width(const DDecomposition& dec);

/// Checks the tree shape, connected occurrence sets and, for each tree edge
/// {s,t}, that every component of G - (X_s ∩ X_t) lies within one side.
DecompositionCheck validate_d_decomposition(const Digraph& g, const DDecomposition& dec);

/// For graphs whose bidirected arcs form a spanning tree: one node per
/// vertex with bag {v, parent(v)}, rooted at vertex 0. Other arcs are ignored.
DDecomposition tree_edge_decomposition(const Digraph& g);

}  // namespace dwlab
