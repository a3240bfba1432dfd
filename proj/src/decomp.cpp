#include "dwlab/decomp.hpp"

#include <algorithm>
#include <deque>

#include "dwlab/errors.hpp"
#include "dwlab/serialize.hpp"
#include "dwlab/simulate.hpp"

namespace dwlab {

using nlohmann::json;

int DagDecomposition::add_node(const VertexSet& bag) {
  bags.push_back(bag);
  children.emplace_back();
  return size() - 1;
}

void DagDecomposition::add_edge(int from, int to) {
  if (from < 0 || to < 0 || from >= size() || to >= size())
    throw InputError("decomposition edge references unknown node");
  auto& c = children[from];
  if (std::find(c.begin(), c.end(), to) == c.end()) c.push_back(to);
}

std::vector<int> DagDecomposition::roots() const {
  std::vector<bool> has_parent(bags.size(), false);
  for (const auto& cs : children)
    for (int c : cs) has_parent[c] = true;
  std::vector<int> out;
  for (int d = 0; d < size(); ++d)
    if (!has_parent[d]) out.push_back(d);
  return out;
}

json DagDecomposition::to_json() const {
  json vs = json::array(), es = json::array(), bs = json::array();
  for (int d = 0; d < size(); ++d) {
    vs.push_back(json{{"id", d}, {"name", "d" + std::to_string(d)}});
    bs.push_back(set_to_json(bags[d]));
    for (int c : children[d]) es.push_back(json::array({d, c}));
  }
  return json{{"vertices", vs}, {"edges", es}, {"bags", bs}};
}

DagDecomposition DagDecomposition::from_json(const json& j, const Digraph& g) {
  if (!j.is_object() || !j.contains("bags") || !j.contains("edges"))
    throw ParseError("decomposition JSON needs \"bags\" and \"edges\"", 0);
  const json& bs = j["bags"];
  if (!bs.is_array()) throw ParseError("\"bags\" must be an array", 0);
  if (j.contains("vertices") && (!j["vertices"].is_array() || j["vertices"].size() != bs.size()))
    throw InputError("decomposition has " + std::to_string(bs.size()) + " bags but a different node count");
  DagDecomposition dec;
  for (const json& b : bs) dec.add_node(set_from_json(b, g));
  for (const json& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw ParseError("decomposition edge must be a pair of node ids", 0);
    dec.add_edge(e[0].get<int>(), e[1].get<int>());
  }
  return dec;
}

int width(const DagDecomposition& dec) {
  int w = 0;
  for (const auto& b : dec.bags) w = std::max(w, b.size());
  return w;
}

int size(const DagDecomposition& dec) { return dec.size(); }

namespace {

// Kahn order; empty when there is a cycle.
std::vector<int> topological_order(const DagDecomposition& dec) {
  std::vector<int> indeg(dec.bags.size(), 0);
  for (const auto& cs : dec.children)
    for (int c : cs) ++indeg[c];
  std::deque<int> ready;
  for (int d = 0; d < dec.size(); ++d)
    if (indeg[d] == 0) ready.push_back(d);
  std::vector<int> order;
  while (!ready.empty()) {
    int d = ready.front();
    ready.pop_front();
    order.push_back(d);
    for (int c : dec.children[d])
      if (--indeg[c] == 0) ready.push_back(c);
  }
  if (static_cast<int>(order.size()) != dec.size()) order.clear();
  return order;
}

std::vector<std::vector<int>> parents_of(const DagDecomposition& dec) {
  std::vector<std::vector<int>> parents(dec.bags.size());
  for (int d = 0; d < dec.size(); ++d)
    for (int c : dec.children[d]) parents[c].push_back(d);
  return parents;
}

// Nodes reachable from `start` (inclusive) along `adj`.
std::vector<char> closure(const std::vector<std::vector<int>>& adj, const std::vector<int>& start) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> stack;
  for (int s : start)
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    int d = stack.back();
    stack.pop_back();
    for (int c : adj[d])
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
  }
  return seen;
}

std::string node_name(int d) { return "d" + std::to_string(d); }

DecompositionCheck violation(std::string axiom, std::string witness) {
  return DecompositionCheck{false, std::move(axiom), std::move(witness)};
}

}  // namespace

std::vector<VertexSet> below_unions(const DagDecomposition& dec) {
  std::vector<int> order = topological_order(dec);
  if (order.empty() && dec.size() > 0) throw InputError("decomposition DAG has a cycle");
  std::vector<VertexSet> below(dec.bags.size());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int d = *it;
    below[d] = dec.bags[d];
    for (int c : dec.children[d]) below[d] |= below[c];
  }
  return below;
}

DecompositionCheck validate(const Digraph& g, const DagDecomposition& dec) {
  if (dec.children.size() != dec.bags.size()) throw InputError("decomposition node ids do not match bag ids");
  for (int d = 0; d < dec.size(); ++d) {
    if (!dec.bags[d].subset_of(g.all())) throw InputError("bag of " + node_name(d) + " is not a subset of V(G)");
    for (int c : dec.children[d])
      if (c < 0 || c >= dec.size()) throw InputError("edge from " + node_name(d) + " to unknown node");
  }
  if (dec.size() == 0) {
    if (g.size() == 0) return {};
    return violation("D1", "empty decomposition");
  }
  std::vector<int> order = topological_order(dec);
  if (order.empty()) return violation("acyclic", "the decomposition DAG has a cycle");

  VertexSet covered;
  for (const auto& b : dec.bags) covered |= b;
  if (covered != g.all()) {
    VertexId v = (g.all() - covered).first();
    return violation("D1", "vertex " + g.name(v) + " is in no bag");
  }

  // D2 as convexity of each vertex's occurrence set under reachability.
  auto parents = parents_of(dec);
  for (VertexId v = 0; v < g.size(); ++v) {
    std::vector<int> occ;
    for (int d = 0; d < dec.size(); ++d)
      if (dec.bags[d].contains(v)) occ.push_back(d);
    auto down = closure(dec.children, occ);
    auto up = closure(parents, occ);
    for (int d = 0; d < dec.size(); ++d)
      if (down[d] && up[d] && !dec.bags[d].contains(v))
        return violation("D2", "vertex " + g.name(v) + " occurs above and below " + node_name(d) + " but not in it");
  }

  std::vector<VertexSet> below = below_unions(dec);
  for (int r : dec.roots())
    if (reach(g, below[r]) != below[r])
      return violation("D3", "B_{>=" + node_name(r) + "} is not closed under reachability");

  for (int a = 0; a < dec.size(); ++a)
    for (int b : dec.children[a]) {
      VertexSet part = below[b] - dec.bags[a];
      if (reach(g, part, dec.bags[a] & dec.bags[b]) != part)
        return violation("D4", "edge " + node_name(a) + "->" + node_name(b) + ": B_{>=" + node_name(b) + "} \\ B_" +
                                   node_name(a) + " is not closed in G - (B_a & B_b)");
    }
  return {};
}

bool d2_holds_by_triples(const DagDecomposition& dec) {
  int n = dec.size();
  std::vector<std::vector<char>> le(n);
  for (int a = 0; a < n; ++a) le[a] = closure(dec.children, {a});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!le[a][b]) continue;
      for (int c = 0; c < n; ++c)
        if (le[b][c] && !(dec.bags[a] & dec.bags[c]).subset_of(dec.bags[b])) return false;
    }
  return true;
}

StrategyTable strategy_from_decomposition(const Digraph& g, const DagDecomposition& dec) {
  if (auto check = validate(g, dec); !check)
    throw InputError("invalid decomposition (" + check.axiom + "): " + check.witness);
  std::vector<VertexSet> below = below_unions(dec);
  std::vector<int> roots = dec.roots();
  StrategyTable table(StrategyTable::Owner::Cops);

  // Node -1 is the virtual root with bag ∅ above all roots.
  auto kids = [&](int d) -> const std::vector<int>& { return d < 0 ? roots : dec.children[d]; };
  auto bag = [&](int d) { return d < 0 ? VertexSet{} : dec.bags[d]; };

  struct Item {
    CopPosition pos;
    int node;
  };
  std::deque<Item> queue;
  CopPosition start;
  if (roots.size() == 1) {
    table.set(start, dec.bags[roots[0]]);
    for (const auto& r : legal_robber_moves(g, RobberPosition{{}, dec.bags[roots[0]], {}}))
      queue.push_back({r, roots[0]});
  } else {
    table.set(start, VertexSet{});
    for (const auto& r : legal_robber_moves(g, RobberPosition{{}, {}, {}})) queue.push_back({r, -1});
  }
  while (!queue.empty()) {
    Item it = queue.front();
    queue.pop_front();
    if (table.next(g, it.pos)) continue;
    int chosen = -2;
    for (int c : kids(it.node))
      if (below[c].intersects(it.pos.robber)) {
        chosen = c;
        break;
      }
    if (chosen == -2) throw std::logic_error("decomposition strategy lost the robber");
    VertexSet next = bag(chosen);
    table.set(it.pos, next);
    for (const auto& r : legal_robber_moves(g, RobberPosition{it.pos.cops, next, it.pos.robber}))
      queue.push_back({r, chosen});
  }
  return table;
}

DagDecomposition decomposition_from_strategy(const Digraph& g, const CopStrategy& strat, int k) {
  ExhaustiveResult res = simulate_exhaustive(g, strat, k);
  if (!res.cops_win)
    throw InputError("strategy " + strat.name() + " does not win monotonically with " + std::to_string(k) + " cops");
  std::vector<CopPosition> nodes{CopPosition{}};
  for (const auto& [p, r] : res.rounds_left) nodes.push_back(p);
  std::sort(nodes.begin() + 1, nodes.end(), [](const CopPosition& a, const CopPosition& b) {
    return std::make_pair(a.cops.to_vector(), a.robber.to_vector()) <
           std::make_pair(b.cops.to_vector(), b.robber.to_vector());
  });
  std::unordered_map<CopPosition, int, CopPositionHash> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], static_cast<int>(i));

  DagDecomposition dec;
  std::vector<VertexSet> moves;
  for (const CopPosition& p : nodes) {
    VertexSet next = *strat.next(g, p);
    moves.push_back(next);
    dec.add_node(next & (territory(g, p) | guarding_cops(g, p)));
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const CopPosition& p = nodes[i];
    for (const auto& r : legal_robber_moves(g, RobberPosition{p.cops, moves[i], p.robber}))
      dec.add_edge(static_cast<int>(i), index.at(r));
  }
  return dec;
}

}  // namespace dwlab
