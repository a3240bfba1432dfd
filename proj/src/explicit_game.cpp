#include <deque>

#include "dwlab/errors.hpp"
#include "dwlab/game.hpp"

namespace dwlab {

namespace {

struct Move {
  VertexSet cops_new;
  bool violation = false;  // raw mode: the robber wins as soon as this is played
  std::vector<int> replies;
};

// All subsets of `pool` with at most `max_size` elements, by increasing mask.
std::vector<VertexSet> subsets(const VertexSet& pool, int max_size) {
  std::vector<VertexId> items = pool.to_vector();
  if (items.size() > 24) throw BudgetError("explicit solver supports at most 24 candidate vertices");
  std::vector<VertexSet> out;
  std::uint32_t limit = 1u << items.size();
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (__builtin_popcount(mask) > max_size) continue;
    VertexSet s;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (mask & (1u << i)) s.insert(items[i]);
    out.push_back(s);
  }
  return out;
}

std::vector<VertexSet> cop_moves(const Digraph& g, int k, const CopPosition& pos, bool pruned) {
  if (!pruned || pos.is_initial()) return subsets(g.all(), k);
  VertexSet guard = guarding_cops(g, pos);
  VertexSet free = pos.cops - guard;
  VertexSet terr = territory(g, pos);
  std::vector<VertexSet> out;
  for (const VertexSet& keep : subsets(free, k - guard.size()))
    for (const VertexSet& x : subsets(terr, k - guard.size() - keep.size())) out.push_back(guard | keep | x);
  return out;
}

}  // namespace

ExplicitSolution solve_explicit(const Digraph& g, int k, const ExplicitOptions& opts) {
  if (k < 1) throw InputError("cop count must be at least 1");
  std::vector<CopPosition> positions;
  std::vector<std::vector<Move>> moves;
  std::unordered_map<CopPosition, int, CopPositionHash> index;

  auto intern = [&](const CopPosition& p) {
    auto [it, fresh] = index.emplace(p, static_cast<int>(positions.size()));
    if (fresh) {
      if (positions.size() >= opts.max_positions)
        throw BudgetError("position budget of " + std::to_string(opts.max_positions) + " exceeded");
      positions.push_back(p);
    }
    return it->second;
  };

  intern(CopPosition{});
  for (std::size_t i = 0; i < positions.size(); ++i) {
    CopPosition pos = positions[i];
    std::vector<Move> ms;
    for (const VertexSet& c : cop_moves(g, k, pos, opts.pruned)) {
      Move m{c, false, {}};
      if (!is_monotone_cop_move(g, pos, c)) {
        if (opts.mode == Mode::Monotone) continue;
        m.violation = true;
        ms.push_back(std::move(m));
        continue;
      }
      for (const CopPosition& r : legal_robber_moves(g, RobberPosition{pos.cops, c, pos.robber}))
        m.replies.push_back(intern(r));
      ms.push_back(std::move(m));
    }
    moves.push_back(std::move(ms));
  }

  // Attractor: in round r, mark positions with a move whose replies were all won before round r.
  std::vector<int> rank(positions.size(), -1);
  std::vector<int> chosen(positions.size(), -1);
  for (int round = 1;; ++round) {
    std::vector<std::pair<int, int>> fresh;
    for (std::size_t p = 0; p < positions.size(); ++p) {
      if (rank[p] >= 0) continue;
      for (std::size_t m = 0; m < moves[p].size(); ++m) {
        const Move& mv = moves[p][m];
        if (mv.violation) continue;
        bool all = true;
        for (int q : mv.replies)
          if (rank[q] < 0) {
            all = false;
            break;
          }
        if (all) {
          fresh.emplace_back(static_cast<int>(p), static_cast<int>(m));
          break;
        }
      }
    }
    if (fresh.empty()) break;
    for (auto [p, m] : fresh) {
      rank[p] = round;
      chosen[p] = m;
    }
  }

  ExplicitSolution sol;
  sol.positions = positions;
  for (std::size_t p = 0; p < positions.size(); ++p) {
    if (rank[p] < 0) continue;
    sol.rank[positions[p]] = rank[p];
    sol.move[positions[p]] = moves[p][chosen[p]].cops_new;
  }
  sol.initial_rank = rank[0];
  sol.winner = rank[0] >= 0 ? Winner::Cops : Winner::Robber;
  return sol;
}

}  // namespace dwlab
