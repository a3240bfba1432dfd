#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dwlab/digraph.hpp"

namespace testing {

using dwlab::Digraph;
using dwlab::VertexId;
using dwlab::VertexSet;

// Vertices named a, b, c, ... with the given arcs.
inline Digraph named(int n, const std::vector<std::pair<int, int>>& arcs) {
  Digraph g;
  for (int i = 0; i < n; ++i) g.add_vertex(std::string(1, static_cast<char>('a' + i)));
  for (auto [u, v] : arcs) g.add_edge(u, v);
  return g;
}

inline Digraph clique(int n) {
  Digraph g = named(n, {});
  std::vector<VertexId> all;
  for (int i = 0; i < n; ++i) all.push_back(i);
  g.add_clique(all);
  return g;
}

inline Digraph path(int n) {
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i + 1 < n; ++i) arcs.emplace_back(i, i + 1);
  return named(n, arcs);
}

// Each arc present independently with probability p.
inline Digraph random_graph(std::mt19937& rng, int n, double p) {
  std::bernoulli_distribution coin(p);
  Digraph g = named(n, {});
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && coin(rng)) g.add_edge(u, v);
  return g;
}

// The digraph on n vertices whose arcs are the set bits of mask over the
// ordered pairs (u, v), u != v, in row-major order.
inline Digraph from_mask(int n, unsigned long mask) {
  Digraph g = named(n, {});
  int bit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (mask >> bit & 1ul) g.add_edge(u, v);
      ++bit;
    }
  return g;
}

inline bool weakly_connected(const Digraph& g) {
  if (g.size() == 0) return true;
  VertexSet seen{0}, frontier{0};
  while (frontier.any()) {
    VertexSet next;
    frontier.for_each([&](VertexId v) { next |= g.succ(v) | g.pred(v); });
    frontier = next - seen;
    seen |= next;
  }
  return seen == g.all();
}

}  // namespace testing
