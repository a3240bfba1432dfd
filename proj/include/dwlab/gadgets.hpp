#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dwlab/game.hpp"

namespace dwlab {

/// Floor of log2(n) for n >= 1.
int floor_log2(int n);

/// Per-level size function s(l) or t(l).
struct SizeProfile {
  enum class Kind { Const, FloorLog, DivLog };
  Kind kind = Kind::Const;
  int value = 2;  // only for Const

  static SizeProfile constant(int c) { return {Kind::Const, c}; }
  static SizeProfile floor_log() { return {Kind::FloorLog, 0}; }
  static SizeProfile div_log() { return {Kind::DivLog, 0}; }
  /// "const:<c>", "log" or "div_log".
  static SizeProfile parse(const std::string& s);

  int operator()(int level) const;
  std::string name() const;
};

/// The vertex sets of one level. For S_φ levels, `c` holds the subdivision
/// vertices of an existential level and `variable` the quantified variable.
struct GadgetLevel {
  int level = 0;
  std::vector<VertexId> M, D, A, B;
  std::vector<std::vector<VertexId>> C;
  std::vector<VertexId> c;
  bool existential = false;
  int variable = 0;  // 1-based, S_φ only

  std::vector<VertexId> N() const;
};

/// Graph with its level structure, outermost level first.
struct GadgetGraph {
  Digraph graph;
  std::vector<GadgetLevel> levels;
  /// Bottom gadget: the single base vertex of G_n(s,t) or the vertices of F_ψ.
  std::vector<VertexId> bottom;
  /// Bottom level index (the n <= 4 reached by the recursion); 0 for S_φ.
  int base_level = 0;

  /// Vertices strictly below levels[i] (the recursive gadget it contains).
  VertexSet below(std::size_t i) const;
  /// Index into `levels` of the outermost level meeting `s`, or nullopt if
  /// `s` lies in the bottom gadget.
  std::optional<std::size_t> outermost_level(const VertexSet& s) const;

  /// Table rows (level, |M|, |D|, |C_i|, |B|).
  nlohmann::json summary() const;
  std::string summary_text() const;
};

/// Level sequence n_0 = n, n_{i+1} = n_i - s(n_i) - 1 while n_i >= 5; the last
/// entry is the base index (<= 4).
std::vector<int> gnst_levels(int n, const SizeProfile& s);

/// |G_n(s,t)| from the size recurrence.
int gnst_size(int n, const SizeProfile& s, const SizeProfile& t);

/// G_n(s,t). Throws InputError naming the level when 2 <= s(l) < l/log l or
/// t(l) >= 2 fails at some level l >= 5.
GadgetGraph gen_gnst(int n, const SizeProfile& s, const SizeProfile& t);

/// Cop strategy that occupies N, answers C_i with b_i, sweeps C_i with the M
/// cops, or moves D onto A and descends one level.
std::shared_ptr<CopStrategy> canonical_cop_strategy(const GadgetGraph& gg, int k);

/// Stays in N(n) until it is full, then enters C_0(n); otherwise the reply
/// with the largest territory.
std::shared_ptr<RobberStrategy> canonical_robber_strategy(const GadgetGraph& gg);

/// Robber that forces the cop play: it enters N(l) while it is open, then
/// C_{choice[l]}(l), then the lower block. `choices` has one entry per level
/// plus one for the bottom gadget, where it picks among the remaining
/// components by index.
std::shared_ptr<RobberStrategy> forcing_robber_strategy(const GadgetGraph& gg, std::vector<int> choices);

/// Consistent positions in which every level holds its A set and one b.
std::vector<CopPosition> deep_positions(const GadgetGraph& gg, const std::vector<CopPosition>& positions);

/// Plays the canonical cops against the forcing robber for every choice
/// vector in {0..t-1}^levels x {0,1} and collects the deep positions reached.
struct Branching {
  int plays = 0;
  bool all_cop_wins = true;
  std::vector<CopPosition> deep;
};
Branching forced_branching(const GadgetGraph& gg);

/// Variant using n + s(n) cops: occupy N and A together, cover the clique the
/// robber enters, and never place b cops.
std::shared_ptr<CopStrategy> poly_cop_strategy(const GadgetGraph& gg, int k);

/// Complete binary tree of height h with bidirected tree edges and arcs from
/// every vertex to all its ancestors.
Digraph gen_upclosure_tree(int h);

/// G_n^m: a root with m bidirected children, each the root of a copy of
/// G_{n-1}^m, with cross arcs from child i to the leaves under children j < i.
Digraph gen_sibling_tree(int n, int m);
inline Digraph gen_sibling_tree(int n) { return gen_sibling_tree(n, n); }

}  // namespace dwlab
