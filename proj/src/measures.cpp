#include "dwlab/measures.hpp"

#include <algorithm>
#include <deque>

#include "dwlab/errors.hpp"
#include "dwlab/serialize.hpp"

namespace dwlab {

using nlohmann::json;

VertexSet support_after(const Digraph& g, const VertexSet& earlier, VertexId v) {
  VertexSet allowed = earlier;
  allowed.insert(v);
  VertexSet region = reach(g, VertexSet{v}, g.all() - allowed);
  VertexSet out;
  region.for_each([&](VertexId u) { out |= g.succ(u); });
  return out - allowed;
}

VertexSet support(const Digraph& g, const EliminationOrder& order, VertexId v) {
  VertexSet earlier;
  for (VertexId u : order) {
    if (u == v) return support_after(g, earlier, v);
    earlier.insert(u);
  }
  throw InputError("vertex " + std::to_string(v) + " is not in the elimination order");
}

namespace {

void check_order(const Digraph& g, const EliminationOrder& order) {
  VertexSet seen;
  for (VertexId v : order) {
    g.check_vertex(v);
    if (seen.contains(v)) throw InputError("elimination order repeats vertex " + g.name(v));
    seen.insert(v);
  }
  if (seen != g.all()) throw InputError("elimination order is not a permutation of V(G)");
}

}  // namespace

int order_width(const Digraph& g, const EliminationOrder& order) {
  check_order(g, order);
  int w = 0;
  VertexSet earlier;
  for (VertexId v : order) {
    w = std::max(w, support_after(g, earlier, v).size());
    earlier.insert(v);
  }
  return w;
}

KellyResult kelly_width(const Digraph& g, int max_vertices) {
  int n = g.size();
  if (n > max_vertices || n > 30) throw BudgetError("Kelly-width DP is limited to " + std::to_string(max_vertices) + " vertices");
  if (n == 0) return {1, {}};
  std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  // best[S]: least achievable max support for the vertices outside S, given S eliminated first.
  std::vector<std::uint8_t> best(std::size_t{1} << n, 0);
  std::vector<std::uint8_t> pick(std::size_t{1} << n, 0);
  auto to_set = [&](std::uint32_t mask) {
    VertexSet s;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) s.insert(i);
    return s;
  };
  for (std::uint32_t mask = full; mask-- > 0;) {
    VertexSet earlier = to_set(mask);
    int value = 255;
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1u) continue;
      int cost = std::max<int>(support_after(g, earlier, v).size(), best[mask | (1u << v)]);
      if (cost < value) {
        value = cost;
        pick[mask] = static_cast<std::uint8_t>(v);
      }
    }
    best[mask] = static_cast<std::uint8_t>(value);
  }
  KellyResult r;
  r.width = 1 + best[0];
  for (std::uint32_t mask = 0; mask != full; mask |= 1u << pick[mask]) r.order.push_back(pick[mask]);
  return r;
}

KellyResult kelly_width_by_permutations(const Digraph& g) {
  if (g.size() > 9) throw BudgetError("permutation oracle is limited to 9 vertices");
  EliminationOrder order(g.size());
  for (int v = 0; v < g.size(); ++v) order[v] = v;
  KellyResult r{1 << 20, {}};
  do {
    int w = 1 + order_width(g, order);
    if (w < r.width) r = {w, order};
  } while (std::next_permutation(order.begin(), order.end()));
  if (g.size() == 0) r.width = 1;
  return r;
}

// ---------------------------------------------------------------------------

json DDecomposition::to_json() const {
  json t = json::array(), b = json::array();
  for (auto [s, u] : tree) t.push_back(json::array({s, u}));
  for (const auto& bag : bags) b.push_back(set_to_json(bag));
  return json{{"tree", t}, {"bags", b}};
}

DDecomposition DDecomposition::from_json(const json& j, const Digraph& g) {
  if (!j.is_object() || !j.contains("tree") || !j.contains("bags"))
    throw ParseError("D-decomposition JSON needs \"tree\" and \"bags\"", 0);
  DDecomposition d;
  for (const json& b : j["bags"]) d.bags.push_back(set_from_json(b, g));
  for (const json& e : j["tree"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw ParseError("tree edge must be a pair of node ids", 0);
    d.tree.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return d;
}

int width(const DDecomposition& dec) {
  int w = 0;
  for (const auto& b : dec.bags) w = std::max(w, b.size());
  return w;
}

DecompositionCheck validate_d_decomposition(const Digraph& g, const DDecomposition& dec) {
  int m = dec.size();
  std::vector<std::vector<int>> adj(m);
  for (auto [s, t] : dec.tree) {
    if (s < 0 || t < 0 || s >= m || t >= m) throw InputError("tree edge references unknown node");
    adj[s].push_back(t);
    adj[t].push_back(s);
  }
  for (const auto& b : dec.bags)
    if (!b.subset_of(g.all())) throw InputError("bag is not a subset of V(G)");
  auto bad = [](std::string cond, std::string witness) {
    return DecompositionCheck{false, std::move(cond), std::move(witness)};
  };
  if (m == 0) return g.size() == 0 ? DecompositionCheck{} : bad("tree", "no nodes");
  if (static_cast<int>(dec.tree.size()) != m - 1) return bad("tree", "edge count is not |nodes| - 1");

  // Nodes reachable from `start` without crossing the edge {cut_a, cut_b}, restricted to `allowed`.
  auto side = [&](int start, int cut_a, int cut_b, const std::vector<char>* allowed) {
    std::vector<char> seen(m, 0);
    std::deque<int> q{start};
    seen[start] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : adj[x]) {
        if ((x == cut_a && y == cut_b) || (x == cut_b && y == cut_a)) continue;
        if (seen[y] || (allowed && !(*allowed)[y])) continue;
        seen[y] = 1;
        q.push_back(y);
      }
    }
    return seen;
  };
  auto all_nodes = side(0, -1, -1, nullptr);
  if (std::count(all_nodes.begin(), all_nodes.end(), 1) != m) return bad("tree", "the tree is not connected");

  for (VertexId v = 0; v < g.size(); ++v) {
    std::vector<char> occ(m, 0);
    int first = -1, count = 0;
    for (int t = 0; t < m; ++t)
      if (dec.bags[t].contains(v)) {
        occ[t] = 1;
        ++count;
        if (first < 0) first = t;
      }
    if (first < 0) return bad("occurrence", "vertex " + g.name(v) + " is in no bag");
    auto reached = side(first, -1, -1, &occ);
    if (std::count(reached.begin(), reached.end(), 1) != count)
      return bad("occurrence", "bags containing " + g.name(v) + " are not connected");
  }

  for (auto [s, t] : dec.tree) {
    auto s_side = side(s, s, t, nullptr);
    VertexSet us, ut;
    for (int x = 0; x < m; ++x) (s_side[x] ? us : ut) |= dec.bags[x];
    for (const VertexSet& comp : components(g, dec.bags[s] & dec.bags[t]))
      if (!comp.subset_of(us) && !comp.subset_of(ut))
        return bad("scc", "component " + to_string(g, comp) + " crosses tree edge {" + std::to_string(s) + "," +
                              std::to_string(t) + "}");
  }
  return {};
}

DDecomposition tree_edge_decomposition(const Digraph& g) {
  DDecomposition d;
  int n = g.size();
  if (n == 0) return d;
  std::vector<int> parent(n, -2);
  parent[0] = -1;
  std::deque<int> q{0};
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    (g.succ(v) & g.pred(v)).for_each([&](VertexId u) {
      if (parent[u] != -2) return;
      parent[u] = v;
      q.push_back(u);
    });
  }
  for (int v = 0; v < n; ++v) {
    if (parent[v] == -2) throw InputError("bidirected arcs do not span the graph");
    VertexSet bag{v};
    if (parent[v] >= 0) {
      bag.insert(parent[v]);
      d.tree.emplace_back(parent[v], v);
    }
    d.bags.push_back(bag);
  }
  return d;
}

}  // namespace dwlab
