#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dwlab/vertex_set.hpp"

namespace dwlab {

/// Which part of a gadget level a vertex belongs to.
enum class Part {
  M,
  D,
  A,
  B,
  C,        // C_i, index = i
  c,        // subdivision vertex c_i of an existential level, index = i
  Base,     // the single-vertex bottom gadget
  FHub,     // hub vertex v of the clause gadget
  FClause,  // literal vertex v_i^C, index = clause, literal = i
};

std::string_view part_name(Part p);
std::optional<Part> part_from_name(std::string_view s);

struct RoleTag {
  int level = 0;
  Part part = Part::M;
  int index = 0;
  int literal = 0;

  friend bool operator==(const RoleTag&, const RoleTag&) = default;
};

/// Finite simple digraph over dense vertex ids 0..n-1.
///
/// Names and role tags are sidecar metadata. Undirected edges are stored as
/// two antiparallel arcs.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n);

  VertexId add_vertex(std::string name = {}, std::optional<RoleTag> role = std::nullopt);

  /// Adds the arc (u, v). Self-loops throw; a repeated arc is a no-op.
  /// Returns whether the arc was new.
  bool add_edge(VertexId u, VertexId v);
  void add_undirected(VertexId u, VertexId v) {
    add_edge(u, v);
    add_edge(v, u);
  }
  void add_clique(const std::vector<VertexId>& vs);
  void add_all(const std::vector<VertexId>& from, const std::vector<VertexId>& to);

  int size() const { return static_cast<int>(succ_.size()); }
  int edge_count() const;
  VertexSet all() const { return VertexSet::range(size()); }

  bool has_edge(VertexId u, VertexId v) const { return succ_[u].contains(v); }
  const VertexSet& succ(VertexId v) const { return succ_[v]; }
  const VertexSet& pred(VertexId v) const { return pred_[v]; }

  const std::string& name(VertexId v) const { return names_[v]; }
  const std::optional<RoleTag>& role(VertexId v) const { return roles_[v]; }
  void set_role(VertexId v, RoleTag r) { roles_[v] = r; }
  void set_name(VertexId v, std::string n) { names_[v] = std::move(n); }

  std::optional<VertexId> find(std::string_view name) const;
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  void check_vertex(VertexId v) const;
  void check_subset(const VertexSet& s) const;

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  std::vector<VertexSet> succ_;
  std::vector<VertexSet> pred_;
  std::vector<std::string> names_;
  std::vector<std::optional<RoleTag>> roles_;
};

/// Vertices reachable in g - removed from (from \ removed), sources included.
VertexSet reach(const Digraph& g, const VertexSet& from, const VertexSet& removed = {});

/// Vertices that reach (to \ removed) in g - removed.
VertexSet coreach(const Digraph& g, const VertexSet& to, const VertexSet& removed = {});

/// Strongly connected components of g - removed, ordered by smallest member.
std::vector<VertexSet> components(const Digraph& g, const VertexSet& removed = {});

/// Strongly connected components of the induced subgraph g[allowed].
std::vector<VertexSet> components_within(const Digraph& g, const VertexSet& allowed);

/// Component of g[allowed] that contains v.
VertexSet component_of(const Digraph& g, VertexId v, const VertexSet& allowed);

bool is_acyclic(const Digraph& g);

std::string to_string(const Digraph& g, const VertexSet& s);

}  // namespace dwlab
