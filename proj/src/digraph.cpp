#include "dwlab/digraph.hpp"

#include <array>
#include <sstream>

#include "dwlab/errors.hpp"

namespace dwlab {

namespace {
constexpr std::array<std::pair<Part, std::string_view>, 9> kPartNames{{
    {Part::M, "M"},
    {Part::D, "D"},
    {Part::A, "A"},
    {Part::B, "B"},
    {Part::C, "C"},
    {Part::c, "c"},
    {Part::Base, "base"},
    {Part::FHub, "F-hub"},
    {Part::FClause, "F-clause"},
}};
}  // namespace

std::string_view part_name(Part p) {
  for (auto& [part, name] : kPartNames)
    if (part == p) return name;
  return "?";
}

std::optional<Part> part_from_name(std::string_view s) {
  for (auto& [part, name] : kPartNames)
    if (name == s) return part;
  return std::nullopt;
}

Digraph::Digraph(int n) {
  for (int i = 0; i < n; ++i) add_vertex();
}

VertexId Digraph::add_vertex(std::string name, std::optional<RoleTag> role) {
  if (size() >= kMaxVertices)
    throw InputError("graph exceeds " + std::to_string(kMaxVertices) + " vertices");
  VertexId v = size();
  succ_.emplace_back();
  pred_.emplace_back();
  if (name.empty()) name = std::to_string(v);
  names_.push_back(std::move(name));
  roles_.push_back(role);
  return v;
}

bool Digraph::add_edge(VertexId u, VertexId v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw InputError("self-loop on vertex " + std::to_string(u));
  if (succ_[u].contains(v)) return false;
  succ_[u].insert(v);
  pred_[v].insert(u);
  return true;
}

void Digraph::add_clique(const std::vector<VertexId>& vs) {
  for (VertexId u : vs)
    for (VertexId v : vs)
      if (u != v) add_edge(u, v);
}

void Digraph::add_all(const std::vector<VertexId>& from, const std::vector<VertexId>& to) {
  for (VertexId u : from)
    for (VertexId v : to) add_edge(u, v);
}

int Digraph::edge_count() const {
  int m = 0;
  for (auto& s : succ_) m += s.size();
  return m;
}

std::optional<VertexId> Digraph::find(std::string_view name) const {
  for (int v = 0; v < size(); ++v)
    if (names_[v] == name) return v;
  return std::nullopt;
}

std::vector<std::pair<VertexId, VertexId>> Digraph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (int u = 0; u < size(); ++u) succ_[u].for_each([&](VertexId v) { out.emplace_back(u, v); });
  return out;
}

void Digraph::check_vertex(VertexId v) const {
  if (v < 0 || v >= size()) throw InputError("unknown vertex id " + std::to_string(v));
}

void Digraph::check_subset(const VertexSet& s) const {
  VertexSet extra = s - all();
  if (extra.any()) throw InputError("unknown vertex id " + std::to_string(extra.first()));
}

VertexSet reach(const Digraph& g, const VertexSet& from, const VertexSet& removed) {
  g.check_subset(from | removed);
  VertexSet seen = from - removed;
  VertexSet frontier = seen;
  while (frontier.any()) {
    VertexSet next;
    frontier.for_each([&](VertexId v) { next |= g.succ(v); });
    next -= removed;
    next -= seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

VertexSet coreach(const Digraph& g, const VertexSet& to, const VertexSet& removed) {
  g.check_subset(to | removed);
  VertexSet seen = to - removed;
  VertexSet frontier = seen;
  while (frontier.any()) {
    VertexSet next;
    frontier.for_each([&](VertexId v) { next |= g.pred(v); });
    next -= removed;
    next -= seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

VertexSet component_of(const Digraph& g, VertexId v, const VertexSet& allowed) {
  VertexSet removed = g.all() - allowed;
  VertexSet src{v};
  return reach(g, src, removed) & coreach(g, src, removed);
}

std::vector<VertexSet> components_within(const Digraph& g, const VertexSet& allowed) {
  std::vector<VertexSet> out;
  VertexSet rest = allowed & g.all();
  while (rest.any()) {
    VertexId v = rest.first();
    VertexSet comp = component_of(g, v, rest);
    out.push_back(comp);
    rest -= comp;
  }
  return out;
}

std::vector<VertexSet> components(const Digraph& g, const VertexSet& removed) {
  g.check_subset(removed);
  return components_within(g, g.all() - removed);
}

bool is_acyclic(const Digraph& g) {
  for (const auto& c : components(g))
    if (c.size() > 1) return false;
  return true;
}

std::string to_string(const Digraph& g, const VertexSet& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  s.for_each([&](VertexId v) {
    if (!first) os << ',';
    first = false;
    if (v < g.size())
      os << g.name(v);
    else
      os << '#' << v;
  });
  os << '}';
  return os.str();
}

}  // namespace dwlab
