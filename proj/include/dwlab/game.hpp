#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "dwlab/digraph.hpp"

namespace dwlab {

/// Cop position (C, R). The pre-game placeholder is (∅, ∅); there the robber
/// has not picked a vertex yet and may go anywhere.
struct CopPosition {
  VertexSet cops;
  VertexSet robber;

  bool is_initial() const { return robber.empty(); }
  friend bool operator==(const CopPosition&, const CopPosition&) = default;
};

/// Robber position (C, C', R): the cops announced C' while the robber sits in R.
struct RobberPosition {
  VertexSet cops_old;
  VertexSet cops_new;
  VertexSet robber;

  bool is_initial() const { return robber.empty(); }
  friend bool operator==(const RobberPosition&, const RobberPosition&) = default;
};

struct CopPositionHash {
  std::size_t operator()(const CopPosition& p) const { return p.cops.hash() * 31 + p.robber.hash(); }
};

enum class Mode { Monotone, Raw };
enum class Winner { Cops, Robber };

std::string_view winner_name(Winner w);

/// Vertices the robber can still visit: Reach_{G-C}(R), or V(G) for the placeholder.
VertexSet territory(const Digraph& g, const CopPosition& pos);

/// Cops that are not free: those with an in-neighbour inside the territory.
/// Lifting any of them makes an already blocked vertex reachable again.
VertexSet guarding_cops(const Digraph& g, const CopPosition& pos);

/// Position with all free cops lifted. The robber component is unchanged.
CopPosition normalize(const Digraph& g, const CopPosition& pos);

/// Reach_{G-(C∩C')}(R) ⊆ Reach_{G-C}(R).
bool is_monotone_cop_move(const Digraph& g, const CopPosition& pos, const VertexSet& cops_new);

/// The same test phrased through free cops: every lifted cop is free.
bool is_monotone_cop_move_by_free_cops(const Digraph& g, const CopPosition& pos, const VertexSet& cops_new);

/// Reach_{G-(C∩C')}(R), with V(G) for the placeholder.
VertexSet robber_region(const Digraph& g, const RobberPosition& pos);

/// Components R' of G - C' with R' ⊆ Reach_{G-(C∩C')}(R). Empty means capture.
std::vector<CopPosition> legal_robber_moves(const Digraph& g, const RobberPosition& pos);

// ---------------------------------------------------------------------------
// Strategies

class CopStrategy {
 public:
  virtual ~CopStrategy() = default;
  /// Next cop placement C' at `pos`, or nullopt when the strategy is undefined there.
  virtual std::optional<VertexSet> next(const Digraph& g, const CopPosition& pos) const = 0;
  virtual std::string name() const { return "cops"; }
};

class RobberStrategy {
 public:
  virtual ~RobberStrategy() = default;
  /// Pick one of `options` (all non-empty). nullopt means undefined.
  virtual std::optional<CopPosition> choose(const Digraph& g, const RobberPosition& pos,
                                            const std::vector<CopPosition>& options) const = 0;
  virtual std::string name() const { return "robber"; }
};

/// Explicit memoryless strategy. Cop tables map cop positions to placements;
/// robber tables map robber positions to the chosen component.
class StrategyTable final : public CopStrategy, public RobberStrategy {
 public:
  enum class Owner { Cops, Robber };

  explicit StrategyTable(Owner owner = Owner::Cops) : owner_(owner) {}

  Owner owner() const { return owner_; }
  std::size_t size() const { return owner_ == Owner::Cops ? cop_moves_.size() : robber_moves_.size(); }

  void set(const CopPosition& pos, const VertexSet& move) { cop_moves_[pos] = move; }
  void set(const RobberPosition& pos, const VertexSet& choice);

  /// Exact lookup first, then the position with free cops lifted.
  std::optional<VertexSet> next(const Digraph& g, const CopPosition& pos) const override;
  std::optional<CopPosition> choose(const Digraph& g, const RobberPosition& pos,
                                    const std::vector<CopPosition>& options) const override;
  std::string name() const override { return "table"; }

  /// Entries in a deterministic order (by cops, then robber, lexicographically).
  std::vector<std::pair<CopPosition, VertexSet>> cop_entries() const;

  nlohmann::json to_json() const;
  static StrategyTable from_json(const nlohmann::json& j, const Digraph& g);

 private:
  struct RobberKey {
    VertexSet a, b, r;
    friend bool operator==(const RobberKey&, const RobberKey&) = default;
  };
  struct RobberKeyHash {
    std::size_t operator()(const RobberKey& k) const { return (k.a.hash() * 31 + k.b.hash()) * 31 + k.r.hash(); }
  };

  Owner owner_;
  std::unordered_map<CopPosition, VertexSet, CopPositionHash> cop_moves_;
  std::unordered_map<RobberKey, VertexSet, RobberKeyHash> robber_moves_;
};

/// Cop strategy backed by a callable; used for the scripted strategies.
class ScriptedCops final : public CopStrategy {
 public:
  using Fn = std::function<std::optional<VertexSet>(const Digraph&, const CopPosition&)>;
  ScriptedCops(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::optional<VertexSet> next(const Digraph& g, const CopPosition& pos) const override { return fn_(g, pos); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

class ScriptedRobber final : public RobberStrategy {
 public:
  using Fn = std::function<std::optional<CopPosition>(const Digraph&, const RobberPosition&,
                                                      const std::vector<CopPosition>&)>;
  ScriptedRobber(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::optional<CopPosition> choose(const Digraph& g, const RobberPosition& pos,
                                    const std::vector<CopPosition>& options) const override {
    return fn_(g, pos, options);
  }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

// ---------------------------------------------------------------------------
// Solving

struct SolveOptions {
  Mode mode = Mode::Monotone;
  /// Only place new cops inside the robber territory and only lift free cops.
  bool pruned = true;
  std::uint64_t max_positions = 50'000'000;
};

class MonotoneSearch;

struct SolveResult {
  Winner winner = Winner::Robber;
  std::uint64_t positions = 0;
  /// Winning cop strategy (owner Cops) when the cops win.
  std::shared_ptr<const StrategyTable> cop_strategy;
  /// Winning robber strategy when the robber wins.
  std::shared_ptr<const RobberStrategy> robber_strategy;
};

/// Exact winner of the k-cop game from the placeholder position.
///
/// Monotone mode with pruning runs a memoised backward induction: every pruned
/// cop move strictly shrinks the territory, so the position graph is acyclic.
/// Raw mode and unpruned generation build the explicit position graph and run
/// an attractor; they are meant for small graphs.
SolveResult solve(const Digraph& g, int k, const SolveOptions& opts = {});

/// Least k <= k_max with a cop win in monotone mode, or nullopt.
struct WidthResult {
  std::optional<int> width;
  std::shared_ptr<const StrategyTable> strategy;
};
WidthResult dag_width(const Digraph& g, int k_max, const SolveOptions& opts = {});

/// Memoised search over normalised positions; exposed so that robber
/// strategies can keep querying it after solve() returns.
class MonotoneSearch {
 public:
  MonotoneSearch(const Digraph& g, int k, std::uint64_t max_positions);

  /// Whether the cops win from `pos` (any position, normalised internally).
  bool cops_win(const CopPosition& pos);
  /// First winning placement in (territory size, lexicographic) order.
  std::optional<VertexSet> winning_move(const CopPosition& pos);
  /// Robber reply to `cops_new` that keeps the robber winning, if one exists.
  std::optional<CopPosition> refuting_reply(const CopPosition& pos, const VertexSet& cops_new);

  std::uint64_t positions() const { return memo_.size(); }
  const Digraph& graph() const { return g_; }
  int cops() const { return k_; }

  /// Calls f(X) for each pruned placement X ⊆ territory, larger X first and
  /// lexicographic within a size, until f returns true.
  template <typename F>
  static bool for_each_placement(const VertexSet& territory, int max_size, F&& f);

 private:
  struct Key {
    VertexSet cops;
    VertexId rep;  // smallest robber vertex, -1 for the placeholder
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return k.cops.hash() ^ (static_cast<std::size_t>(k.rep + 1) * 0x9e3779b97f4a7c15ULL); }
  };

  bool win(const VertexSet& cops_norm, const VertexSet& robber, const VertexSet& terr);
  // Like for_each_placement, but only the first members (by id) of each twin
  // class that agree on robber membership; swapping twins is an automorphism
  // fixing the position, so the skipped placements have the same value.
  template <typename F>
  bool for_each_canonical_placement(const VertexSet& terr, const VertexSet& robber, int max_size, F&& f) const;
  bool move_wins(const VertexSet& cops_norm, const VertexSet& terr, const VertexSet& placed);

  const Digraph& g_;
  int k_;
  std::uint64_t max_positions_;
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::vector<int> twin_class_;
};

template <typename F>
bool MonotoneSearch::for_each_canonical_placement(const VertexSet& terr, const VertexSet& robber, int max_size,
                                                  F&& f) const {
  std::vector<VertexId> pool = terr.to_vector();
  int n = static_cast<int>(pool.size());
  // prev[i]: index of the previous pool member in the same group, or -1.
  std::vector<int> prev(pool.size(), -1);
  for (int i = 0; i < n; ++i)
    for (int j = i - 1; j >= 0; --j)
      if (twin_class_[pool[j]] == twin_class_[pool[i]] && robber.contains(pool[j]) == robber.contains(pool[i])) {
        prev[i] = j;
        break;
      }
  max_size = std::min(max_size, n);
  std::vector<char> chosen(pool.size(), 0);
  VertexSet x;
  bool stop = false;
  auto rec = [&](auto&& self, int from, int left) -> void {
    if (left == 0) {
      stop = f(x);
      return;
    }
    for (int i = from; i + left <= n && !stop; ++i) {
      if (prev[i] >= 0 && !chosen[prev[i]]) continue;
      chosen[i] = 1;
      x.insert(pool[i]);
      self(self, i + 1, left - 1);
      x.erase(pool[i]);
      chosen[i] = 0;
    }
  };
  for (int size = max_size; size >= 1 && !stop; --size) rec(rec, 0, size);
  return stop;
}

template <typename F>
bool MonotoneSearch::for_each_placement(const VertexSet& territory, int max_size, F&& f) {
  std::vector<VertexId> pool = territory.to_vector();
  int n = static_cast<int>(pool.size());
  max_size = std::min(max_size, n);
  std::vector<int> idx;
  for (int size = max_size; size >= 1; --size) {
    idx.resize(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
      VertexSet x;
      for (int i : idx) x.insert(pool[i]);
      if (f(x)) return true;
      int i = size - 1;
      while (i >= 0 && idx[i] == n - size + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Explicit position graph (small graphs)

struct ExplicitOptions {
  Mode mode = Mode::Monotone;
  bool pruned = false;
  std::uint64_t max_positions = 2'000'000;
};

/// Attractor over the explicitly explored game graph. rank[p] is the number of
/// cop moves the cops need to force a win from p (only set for winning p).
struct ExplicitSolution {
  Winner winner = Winner::Robber;
  std::vector<CopPosition> positions;
  std::unordered_map<CopPosition, int, CopPositionHash> rank;
  std::unordered_map<CopPosition, VertexSet, CopPositionHash> move;
  int initial_rank = -1;
};

ExplicitSolution solve_explicit(const Digraph& g, int k, const ExplicitOptions& opts = {});

// JSON helpers for positions.
nlohmann::json position_to_json(const CopPosition& p);
CopPosition position_from_json(const nlohmann::json& j, const Digraph& g);

}  // namespace dwlab
