#include "dwlab/game.hpp"

#include <algorithm>
#include <deque>

#include "dwlab/errors.hpp"
#include "dwlab/serialize.hpp"

namespace dwlab {

using nlohmann::json;

std::string_view winner_name(Winner w) { return w == Winner::Cops ? "cops" : "robber"; }

VertexSet territory(const Digraph& g, const CopPosition& pos) {
  if (pos.is_initial()) return g.all();
  return reach(g, pos.robber, pos.cops);
}

VertexSet guarding_cops(const Digraph& g, const CopPosition& pos) {
  if (pos.is_initial()) return {};
  VertexSet terr = territory(g, pos);
  VertexSet out;
  pos.cops.for_each([&](VertexId v) {
    if (g.pred(v).intersects(terr)) out.insert(v);
  });
  return out;
}

CopPosition normalize(const Digraph& g, const CopPosition& pos) {
  return CopPosition{guarding_cops(g, pos), pos.robber};
}

bool is_monotone_cop_move(const Digraph& g, const CopPosition& pos, const VertexSet& cops_new) {
  if (pos.is_initial()) return true;
  VertexSet before = reach(g, pos.robber, pos.cops);
  VertexSet after = reach(g, pos.robber, pos.cops & cops_new);
  return after.subset_of(before);
}

bool is_monotone_cop_move_by_free_cops(const Digraph& g, const CopPosition& pos, const VertexSet& cops_new) {
  if (pos.is_initial()) return true;
  bool ok = true;
  (pos.cops - cops_new).for_each([&](VertexId v) {
    VertexSet others = pos.cops;
    others.erase(v);
    if (reach(g, pos.robber, others).contains(v)) ok = false;
  });
  return ok;
}

VertexSet robber_region(const Digraph& g, const RobberPosition& pos) {
  if (pos.is_initial()) return g.all();
  return reach(g, pos.robber, pos.cops_old & pos.cops_new);
}

std::vector<CopPosition> legal_robber_moves(const Digraph& g, const RobberPosition& pos) {
  g.check_subset(pos.cops_new);
  VertexSet region = robber_region(g, pos);
  std::vector<CopPosition> out;
  for (const VertexSet& comp : components_within(g, region - pos.cops_new))
    out.push_back(CopPosition{pos.cops_new, comp});
  return out;
}

// ---------------------------------------------------------------------------

void StrategyTable::set(const RobberPosition& pos, const VertexSet& choice) {
  robber_moves_[RobberKey{pos.cops_old, pos.cops_new, pos.robber}] = choice;
}

std::optional<VertexSet> StrategyTable::next(const Digraph& g, const CopPosition& pos) const {
  if (auto it = cop_moves_.find(pos); it != cop_moves_.end()) return it->second;
  if (auto it = cop_moves_.find(normalize(g, pos)); it != cop_moves_.end()) return it->second;
  return std::nullopt;
}

std::optional<CopPosition> StrategyTable::choose(const Digraph&, const RobberPosition& pos,
                                                 const std::vector<CopPosition>& options) const {
  auto it = robber_moves_.find(RobberKey{pos.cops_old, pos.cops_new, pos.robber});
  if (it == robber_moves_.end()) return std::nullopt;
  for (const auto& o : options)
    if (o.robber == it->second) return o;
  return std::nullopt;
}

std::vector<std::pair<CopPosition, VertexSet>> StrategyTable::cop_entries() const {
  std::vector<std::pair<CopPosition, VertexSet>> out(cop_moves_.begin(), cop_moves_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    auto ka = std::make_pair(a.first.cops.to_vector(), a.first.robber.to_vector());
    auto kb = std::make_pair(b.first.cops.to_vector(), b.first.robber.to_vector());
    return ka < kb;
  });
  return out;
}

json position_to_json(const CopPosition& p) {
  return json{{"cops", set_to_json(p.cops)}, {"robber", set_to_json(p.robber)}};
}

CopPosition position_from_json(const json& j, const Digraph& g) {
  if (!j.is_object() || !j.contains("cops") || !j.contains("robber"))
    throw ParseError("position needs \"cops\" and \"robber\"", 0);
  return CopPosition{set_from_json(j["cops"], g), set_from_json(j["robber"], g)};
}

json StrategyTable::to_json() const {
  json out = json::array();
  if (owner_ == Owner::Cops) {
    for (const auto& [pos, move] : cop_entries())
      out.push_back(json{{"position", position_to_json(pos)}, {"move", set_to_json(move)}});
    return out;
  }
  std::vector<std::pair<RobberKey, VertexSet>> entries(robber_moves_.begin(), robber_moves_.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.first.a.to_vector(), a.first.b.to_vector(), a.first.r.to_vector()) <
           std::make_tuple(b.first.a.to_vector(), b.first.b.to_vector(), b.first.r.to_vector());
  });
  for (const auto& [k, choice] : entries)
    out.push_back(json{{"position", {{"cops", set_to_json(k.a)}, {"cops_new", set_to_json(k.b)}, {"robber", set_to_json(k.r)}}},
                       {"move", set_to_json(choice)}});
  return out;
}

StrategyTable StrategyTable::from_json(const json& j, const Digraph& g) {
  if (!j.is_array()) throw ParseError("strategy table must be a JSON array", 0);
  bool robber = !j.empty() && j[0].contains("position") && j[0]["position"].contains("cops_new");
  StrategyTable t(robber ? Owner::Robber : Owner::Cops);
  for (const json& e : j) {
    if (!e.is_object() || !e.contains("position") || !e.contains("move"))
      throw ParseError("strategy entry needs \"position\" and \"move\"", 0);
    VertexSet move = set_from_json(e["move"], g);
    if (robber) {
      const json& p = e["position"];
      t.set(RobberPosition{set_from_json(p.at("cops"), g), set_from_json(p.at("cops_new"), g),
                           set_from_json(p.at("robber"), g)},
            move);
    } else {
      t.set(position_from_json(e["position"], g), move);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

MonotoneSearch::MonotoneSearch(const Digraph& g, int k, std::uint64_t max_positions)
    : g_(g), k_(k), max_positions_(max_positions) {
  if (k < 1) throw InputError("cop count must be at least 1");
  twin_class_.assign(static_cast<std::size_t>(g.size()), -1);
  std::vector<std::vector<VertexId>> classes;
  auto twins = [&](VertexId u, VertexId v) {
    VertexSet su = g.succ(u), sv = g.succ(v), pu = g.pred(u), pv = g.pred(v);
    su.erase(v), sv.erase(u), pu.erase(v), pv.erase(u);
    return su == sv && pu == pv && g.has_edge(u, v) == g.has_edge(v, u);
  };
  for (VertexId v = 0; v < g.size(); ++v) {
    for (std::size_t c = 0; c < classes.size() && twin_class_[v] < 0; ++c)
      if (std::all_of(classes[c].begin(), classes[c].end(), [&](VertexId u) { return twins(u, v); })) {
        classes[c].push_back(v);
        twin_class_[v] = static_cast<int>(c);
      }
    if (twin_class_[v] < 0) {
      twin_class_[v] = static_cast<int>(classes.size());
      classes.push_back({v});
    }
  }
}

bool MonotoneSearch::win(const VertexSet& cops_norm, const VertexSet& robber, const VertexSet& terr) {
  Key key{cops_norm, robber.first()};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  if (memo_.size() >= max_positions_)
    throw BudgetError("position budget of " + std::to_string(max_positions_) + " exceeded");
  int avail = k_ - cops_norm.size();
  bool result = avail > 0 && for_each_canonical_placement(terr, robber, avail, [&](const VertexSet& x) {
                  return move_wins(cops_norm, terr, x);
                });
  memo_.emplace(key, result);
  return result;
}

bool MonotoneSearch::move_wins(const VertexSet& cops_norm, const VertexSet& terr, const VertexSet& placed) {
  VertexSet cops_new = cops_norm | placed;
  auto comps = components_within(g_, terr - placed);
  struct Reply {
    VertexSet robber, terr, guard;
  };
  std::vector<Reply> replies;
  replies.reserve(comps.size());
  for (const VertexSet& comp : comps) {
    VertexSet t = reach(g_, comp, cops_new);
    VertexSet guard;
    cops_new.for_each([&](VertexId v) {
      if (g_.pred(v).intersects(t)) guard.insert(v);
    });
    replies.push_back({comp, t, guard});
  }
  // Large territories first: they are the likeliest refutations.
  std::stable_sort(replies.begin(), replies.end(),
                   [](const Reply& a, const Reply& b) { return a.terr.size() > b.terr.size(); });
  for (const Reply& r : replies)
    if (!win(r.guard, r.robber, r.terr)) return false;
  return true;
}

bool MonotoneSearch::cops_win(const CopPosition& pos) {
  CopPosition n = normalize(g_, pos);
  return win(n.cops, n.robber, territory(g_, pos));
}

std::optional<VertexSet> MonotoneSearch::winning_move(const CopPosition& pos) {
  CopPosition n = normalize(g_, pos);
  VertexSet terr = territory(g_, pos);
  if (!win(n.cops, n.robber, terr)) return std::nullopt;
  std::optional<VertexSet> found;
  for_each_canonical_placement(terr, n.robber, k_ - n.cops.size(), [&](const VertexSet& x) {
    if (!move_wins(n.cops, terr, x)) return false;
    found = n.cops | x;
    return true;
  });
  return found;
}

std::optional<CopPosition> MonotoneSearch::refuting_reply(const CopPosition& pos, const VertexSet& cops_new) {
  for (const CopPosition& reply : legal_robber_moves(g_, RobberPosition{pos.cops, cops_new, pos.robber}))
    if (!cops_win(reply)) return reply;
  return std::nullopt;
}

namespace {

class SearchRobber final : public RobberStrategy {
 public:
  explicit SearchRobber(std::shared_ptr<MonotoneSearch> s) : search_(std::move(s)) {}
  std::optional<CopPosition> choose(const Digraph&, const RobberPosition&,
                                    const std::vector<CopPosition>& options) const override {
    if (options.empty()) return std::nullopt;
    for (const auto& o : options)
      if (!search_->cops_win(o)) return o;
    return options.front();
  }
  std::string name() const override { return "solver"; }

 private:
  std::shared_ptr<MonotoneSearch> search_;
};

class ExplicitRobber final : public RobberStrategy {
 public:
  explicit ExplicitRobber(ExplicitSolution s) : sol_(std::move(s)) {}
  std::optional<CopPosition> choose(const Digraph&, const RobberPosition&,
                                    const std::vector<CopPosition>& options) const override {
    if (options.empty()) return std::nullopt;
    for (const auto& o : options)
      if (!sol_.rank.contains(o)) return o;
    return options.front();
  }
  std::string name() const override { return "solver"; }

 private:
  ExplicitSolution sol_;
};

std::shared_ptr<StrategyTable> extract_table(const Digraph& g, MonotoneSearch& search) {
  auto table = std::make_shared<StrategyTable>(StrategyTable::Owner::Cops);
  std::unordered_map<CopPosition, bool, CopPositionHash> seen;
  std::deque<CopPosition> queue{CopPosition{}};
  seen[CopPosition{}] = true;
  while (!queue.empty()) {
    CopPosition pos = queue.front();
    queue.pop_front();
    auto move = search.winning_move(pos);
    if (!move) throw std::logic_error("winning strategy reached a losing position");
    table->set(normalize(g, pos), *move);
    for (const CopPosition& next : legal_robber_moves(g, RobberPosition{pos.cops, *move, pos.robber}))
      if (seen.emplace(next, true).second) queue.push_back(next);
  }
  return table;
}

}  // namespace

SolveResult solve(const Digraph& g, int k, const SolveOptions& opts) {
  if (k < 1) throw InputError("cop count must be at least 1");
  SolveResult res;
  if (opts.mode == Mode::Monotone && opts.pruned) {
    auto search = std::make_shared<MonotoneSearch>(g, k, opts.max_positions);
    bool win = search->cops_win(CopPosition{});
    res.winner = win ? Winner::Cops : Winner::Robber;
    if (win)
      res.cop_strategy = extract_table(g, *search);
    else
      res.robber_strategy = std::make_shared<SearchRobber>(search);
    res.positions = search->positions();
    return res;
  }
  ExplicitSolution sol = solve_explicit(g, k, ExplicitOptions{opts.mode, opts.pruned, opts.max_positions});
  res.winner = sol.winner;
  res.positions = sol.positions.size();
  if (sol.winner == Winner::Cops) {
    auto table = std::make_shared<StrategyTable>(StrategyTable::Owner::Cops);
    for (const auto& [pos, move] : sol.move) table->set(pos, move);
    res.cop_strategy = table;
  } else {
    res.robber_strategy = std::make_shared<ExplicitRobber>(std::move(sol));
  }
  return res;
}

WidthResult dag_width(const Digraph& g, int k_max, const SolveOptions& opts) {
  if (k_max < 1) throw InputError("k_max must be at least 1");
  WidthResult out;
  for (int k = 1; k <= k_max; ++k) {
    SolveResult r = solve(g, k, opts);
    if (r.winner == Winner::Cops) {
      out.width = k;
      out.strategy = r.cop_strategy;
      return out;
    }
  }
  return out;
}

}  // namespace dwlab
