#include "dwlab/simulate.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "dwlab/errors.hpp"
#include "dwlab/serialize.hpp"

namespace dwlab {

using nlohmann::json;

std::string_view reason_name(RobberWinReason r) {
  switch (r) {
    case RobberWinReason::None: return "none";
    case RobberWinReason::InfinitePlayCycle: return "infinite-play-cycle";
    case RobberWinReason::IllegalMonotonicity: return "illegal-monotonicity";
    case RobberWinReason::CopsStuck: return "cops-stuck";
  }
  return "?";
}

int PlayRecord::rounds() const {
  int n = 0;
  for (const auto& e : entries)
    if (std::holds_alternative<RobberPosition>(e)) ++n;
  return n;
}

json PlayRecord::to_json() const {
  json es = json::array();
  for (const auto& e : entries) {
    if (const auto* c = std::get_if<CopPosition>(&e)) {
      json j = position_to_json(*c);
      j["type"] = "cop";
      es.push_back(j);
    } else {
      const auto& r = std::get<RobberPosition>(e);
      es.push_back(json{{"type", "robber"},
                        {"cops", set_to_json(r.cops_old)},
                        {"cops_new", set_to_json(r.cops_new)},
                        {"robber", set_to_json(r.robber)}});
    }
  }
  json out{{"entries", es}, {"outcome", outcome == Outcome::CopsWin ? "cops-win" : "robber-wins"}};
  if (outcome == Outcome::RobberWins) out["reason"] = std::string(reason_name(reason));
  if (aborted) out["aborted"] = true;
  return out;
}

std::string PlayRecord::transcript(const Digraph& g) const {
  std::ostringstream os;
  int round = 0;
  for (const auto& e : entries) {
    if (const auto* c = std::get_if<CopPosition>(&e)) {
      if (c->is_initial())
        os << "start: no cops, robber not placed\n";
      else
        os << "  robber -> " << to_string(g, c->robber) << '\n';
    } else {
      const auto& r = std::get<RobberPosition>(e);
      os << "round " << ++round << ": cops " << to_string(g, r.cops_old) << " -> " << to_string(g, r.cops_new)
         << '\n';
    }
  }
  if (aborted) os << "aborted\n";
  if (outcome == Outcome::CopsWin)
    os << "cops win\n";
  else
    os << "robber wins (" << reason_name(reason) << ")\n";
  return os.str();
}

namespace {

std::string describe(const Digraph& g, const CopPosition& p) {
  return "(C=" + to_string(g, p.cops) + ", R=" + to_string(g, p.robber) + ")";
}

// No monotone move can shrink the territory: every cop guards it.
bool cops_stuck(const Digraph& g, const CopPosition& pos, int k) {
  return !pos.is_initial() && guarding_cops(g, pos).size() >= k;
}

VertexSet cop_move(const Digraph& g, const CopStrategy& cops, const CopPosition& pos, int k, bool& stuck) {
  stuck = false;
  auto move = cops.next(g, pos);
  if (!move) {
    if (cops_stuck(g, pos, k)) {
      stuck = true;
      return {};
    }
    throw IncompleteStrategyError("incomplete strategy: " + cops.name() + " has no move at " + describe(g, pos));
  }
  g.check_subset(*move);
  if (move->size() > k)
    throw InputError("strategy " + cops.name() + " places " + std::to_string(move->size()) + " > " +
                     std::to_string(k) + " cops at " + describe(g, pos));
  return *move;
}

}  // namespace

PlayRecord simulate(const Digraph& g, const CopStrategy& cops, const RobberStrategy& robber, int k,
                    const SimulationOptions&) {
  PlayRecord rec;
  std::unordered_set<CopPosition, CopPositionHash> seen;
  CopPosition pos;
  rec.entries.push_back(pos);
  for (;;) {
    if (!seen.insert(pos).second) {
      rec.outcome = Outcome::RobberWins;
      rec.reason = RobberWinReason::InfinitePlayCycle;
      return rec;
    }
    bool stuck = false;
    VertexSet next = cop_move(g, cops, pos, k, stuck);
    if (stuck) {
      rec.outcome = Outcome::RobberWins;
      rec.reason = RobberWinReason::CopsStuck;
      return rec;
    }
    RobberPosition rpos{pos.cops, next, pos.robber};
    rec.entries.push_back(rpos);
    if (!is_monotone_cop_move(g, pos, next)) {
      rec.outcome = Outcome::RobberWins;
      rec.reason = RobberWinReason::IllegalMonotonicity;
      return rec;
    }
    auto options = legal_robber_moves(g, rpos);
    if (options.empty()) {
      rec.outcome = Outcome::CopsWin;
      return rec;
    }
    auto choice = robber.choose(g, rpos, options);
    if (!choice)
      throw IncompleteStrategyError("incomplete strategy: " + robber.name() + " has no reply to cops " +
                                    to_string(g, next) + " at " + describe(g, pos));
    if (std::find(options.begin(), options.end(), *choice) == options.end())
      throw InputError("robber strategy " + robber.name() + " chose an illegal component " +
                       to_string(g, choice->robber));
    pos = *choice;
    rec.entries.push_back(pos);
  }
}

namespace {

class Exhaustive {
 public:
  Exhaustive(const Digraph& g, const CopStrategy& cops, int k, std::uint64_t budget)
      : g_(g), cops_(cops), k_(k), budget_(budget) {}

  // Maximal rounds until capture from pos, or -1 with cex_ set.
  int dfs(const CopPosition& pos) {
    if (auto it = rounds_.find(pos); it != rounds_.end()) return it->second;
    path_.push_back(pos);
    if (on_path_.contains(pos)) return fail(RobberWinReason::InfinitePlayCycle);
    bool stuck = false;
    VertexSet next = cop_move(g_, cops_, pos, k_, stuck);
    if (stuck) return fail(RobberWinReason::CopsStuck);
    RobberPosition rpos{pos.cops, next, pos.robber};
    path_.push_back(rpos);
    if (!is_monotone_cop_move(g_, pos, next)) return fail(RobberWinReason::IllegalMonotonicity);
    on_path_.insert(pos);
    int best = 1;
    for (const CopPosition& reply : legal_robber_moves(g_, rpos)) {
      int r = dfs(reply);
      if (r < 0) return -1;
      best = std::max(best, r + 1);
    }
    on_path_.erase(pos);
    path_.pop_back();
    path_.pop_back();
    if (rounds_.size() >= budget_)
      throw BudgetError("position budget of " + std::to_string(budget_) + " exceeded");
    rounds_.emplace(pos, best);
    return best;
  }

  std::unordered_map<CopPosition, int, CopPositionHash>& rounds() { return rounds_; }
  std::optional<PlayRecord>& counterexample() { return cex_; }

 private:
  int fail(RobberWinReason reason) {
    PlayRecord rec;
    rec.entries = path_;
    rec.outcome = Outcome::RobberWins;
    rec.reason = reason;
    cex_ = std::move(rec);
    return -1;
  }

  const Digraph& g_;
  const CopStrategy& cops_;
  int k_;
  std::uint64_t budget_;
  std::unordered_map<CopPosition, int, CopPositionHash> rounds_;
  std::unordered_set<CopPosition, CopPositionHash> on_path_;
  std::vector<PlayRecord::Entry> path_;
  std::optional<PlayRecord> cex_;
};

}  // namespace

ExhaustiveResult simulate_exhaustive(const Digraph& g, const CopStrategy& cops, int k, const SimulationOptions& opts) {
  Exhaustive ex(g, cops, k, opts.max_positions);
  ExhaustiveResult res;
  int r = ex.dfs(CopPosition{});
  if (r < 0) {
    res.counterexample = std::move(ex.counterexample());
    return res;
  }
  res.cops_win = true;
  res.longest_play = r;
  res.rounds_left = std::move(ex.rounds());
  res.rounds_left.erase(CopPosition{});
  return res;
}

std::vector<CopPosition> consistent_positions(const Digraph& g, const CopStrategy& cops, int k) {
  ExhaustiveResult res = simulate_exhaustive(g, cops, k);
  if (!res.cops_win) throw InputError("strategy " + cops.name() + " does not win with " + std::to_string(k) + " cops");
  std::vector<CopPosition> out;
  for (const auto& [p, r] : res.rounds_left) out.push_back(p);
  std::sort(out.begin(), out.end(), [](const CopPosition& a, const CopPosition& b) {
    return std::make_pair(a.cops.to_vector(), a.robber.to_vector()) <
           std::make_pair(b.cops.to_vector(), b.robber.to_vector());
  });
  return out;
}

std::uint64_t count_consistent_positions(const Digraph& g, const CopStrategy& cops, int k) {
  return consistent_positions(g, cops, k).size();
}

// ---------------------------------------------------------------------------

namespace {

class RobberVerifier {
 public:
  RobberVerifier(const Digraph& g, const RobberStrategy& robber, int k, std::uint64_t budget)
      : g_(g), robber_(robber), k_(k), budget_(budget) {}

  bool cops_win(const CopPosition& pos) {
    if (auto it = memo_.find(pos); it != memo_.end()) return it->second.has_value();
    if (memo_.size() >= budget_) throw BudgetError("position budget of " + std::to_string(budget_) + " exceeded");
    VertexSet guard = guarding_cops(g_, pos);
    VertexSet free = pos.cops - guard;
    VertexSet terr = territory(g_, pos);
    int avail = k_ - guard.size();
    std::optional<std::pair<VertexSet, std::optional<CopPosition>>> found;
    // Every subset of the free cops may stay; new cops go inside the territory.
    std::vector<VertexId> fv = free.to_vector();
    for (std::uint32_t mask = 0; !found && mask < (1u << fv.size()); ++mask) {
      VertexSet keep;
      for (std::size_t i = 0; i < fv.size(); ++i)
        if (mask & (1u << i)) keep.insert(fv[i]);
      if (keep.size() >= avail) continue;
      MonotoneSearch::for_each_placement(terr, avail - keep.size(), [&](const VertexSet& x) {
        VertexSet next = guard | keep | x;
        RobberPosition rpos{pos.cops, next, pos.robber};
        auto options = legal_robber_moves(g_, rpos);
        if (options.empty()) {
          found.emplace(next, std::nullopt);
          return true;
        }
        auto choice = robber_.choose(g_, rpos, options);
        if (!choice)
          throw IncompleteStrategyError("incomplete strategy: " + robber_.name() + " has no reply to cops " +
                                        to_string(g_, next));
        if (cops_win(*choice)) {
          found.emplace(next, *choice);
          return true;
        }
        return false;
      });
    }
    bool win = found.has_value();
    memo_[pos] = std::move(found);
    return win;
  }

  PlayRecord capture_play() {
    PlayRecord rec;
    CopPosition pos;
    rec.entries.push_back(pos);
    for (;;) {
      const auto& step = *memo_.at(pos);
      rec.entries.push_back(RobberPosition{pos.cops, step.first, pos.robber});
      if (!step.second) break;
      pos = *step.second;
      rec.entries.push_back(pos);
    }
    rec.outcome = Outcome::CopsWin;
    return rec;
  }

  std::uint64_t positions() const { return memo_.size(); }

 private:
  const Digraph& g_;
  const RobberStrategy& robber_;
  int k_;
  std::uint64_t budget_;
  std::unordered_map<CopPosition, std::optional<std::pair<VertexSet, std::optional<CopPosition>>>, CopPositionHash>
      memo_;
};

}  // namespace

RobberCheck verify_robber_strategy(const Digraph& g, const RobberStrategy& robber, int k, std::uint64_t max_positions) {
  if (k < 1) throw InputError("cop count must be at least 1");
  RobberVerifier v(g, robber, k, max_positions);
  RobberCheck out;
  bool cops = v.cops_win(CopPosition{});
  out.robber_survives = !cops;
  if (cops) out.capture = v.capture_play();
  out.positions = v.positions();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<VertexSet> parse_names(const Digraph& g, const std::string& line, std::string& error) {
  std::istringstream is(line);
  VertexSet s;
  for (std::string tok; is >> tok;) {
    if (tok == "-") continue;
    auto v = g.find(tok);
    if (!v) {
      error = "unknown vertex " + tok;
      return std::nullopt;
    }
    s.insert(*v);
  }
  return s;
}

}  // namespace

PlayRecord interactive_play(const Digraph& g, int k, Side human, const CopStrategy* machine_cops,
                            const RobberStrategy* machine_robber, std::istream& in, std::ostream& out, Mode mode) {
  if (human == Side::Cops && !machine_robber) throw InputError("a machine robber strategy is required");
  if (human == Side::Robber && !machine_cops) throw InputError("a machine cop strategy is required");
  PlayRecord rec;
  CopPosition pos;
  rec.entries.push_back(pos);
  std::unordered_set<CopPosition, CopPositionHash> seen;
  auto finish = [&](Outcome o, RobberWinReason r) {
    rec.outcome = o;
    rec.reason = r;
    out << (o == Outcome::CopsWin ? "cops win\n" : "robber wins (" + std::string(reason_name(r)) + ")\n");
    return rec;
  };
  auto abort_play = [&]() {
    rec.aborted = true;
    rec.outcome = Outcome::RobberWins;
    rec.reason = RobberWinReason::None;
    out << "aborted\n";
    return rec;
  };
  for (int round = 1;; ++round) {
    if (!seen.insert(pos).second) return finish(Outcome::RobberWins, RobberWinReason::InfinitePlayCycle);
    out << "round " << round << ": cops " << to_string(g, pos.cops) << ", robber "
        << (pos.is_initial() ? std::string("not placed") : to_string(g, pos.robber)) << '\n';
    VertexSet next;
    if (human == Side::Cops) {
      for (;;) {
        out << "cops (up to " << k << " vertex names, '-' for none)> " << std::flush;
        std::string line;
        if (!std::getline(in, line)) return abort_play();
        std::string error;
        auto parsed = parse_names(g, line, error);
        if (!parsed) {
          out << "refused: " << error << '\n';
          continue;
        }
        if (parsed->size() > k) {
          out << "refused: more than " << k << " cops\n";
          continue;
        }
        if (mode == Mode::Monotone && !is_monotone_cop_move(g, pos, *parsed)) {
          out << "refused: lifting a guarding cop reopens part of the robber's territory\n";
          continue;
        }
        next = *parsed;
        break;
      }
    } else {
      bool stuck = false;
      next = cop_move(g, *machine_cops, pos, k, stuck);
      if (stuck) return finish(Outcome::RobberWins, RobberWinReason::CopsStuck);
      out << "cops move to " << to_string(g, next) << '\n';
    }
    RobberPosition rpos{pos.cops, next, pos.robber};
    rec.entries.push_back(rpos);
    if (!is_monotone_cop_move(g, pos, next)) return finish(Outcome::RobberWins, RobberWinReason::IllegalMonotonicity);
    auto options = legal_robber_moves(g, rpos);
    if (options.empty()) return finish(Outcome::CopsWin, RobberWinReason::None);
    std::optional<CopPosition> choice;
    if (human == Side::Robber) {
      for (std::size_t i = 0; i < options.size(); ++i)
        out << "  [" << i << "] " << to_string(g, options[i].robber) << '\n';
      while (!choice) {
        out << "robber (index or vertex name)> " << std::flush;
        std::string line;
        if (!std::getline(in, line)) return abort_play();
        std::istringstream is(line);
        std::string tok;
        is >> tok;
        if (auto v = g.find(tok)) {
          for (const auto& o : options)
            if (o.robber.contains(*v)) choice = o;
        } else if (!tok.empty() && std::all_of(tok.begin(), tok.end(), ::isdigit)) {
          std::size_t i = std::stoul(tok);
          if (i < options.size()) choice = options[i];
        }
        if (!choice) out << "refused: not a reachable component\n";
      }
    } else {
      choice = machine_robber->choose(g, rpos, options);
      if (!choice) throw IncompleteStrategyError("incomplete strategy: robber has no reply");
      out << "robber moves to " << to_string(g, choice->robber) << '\n';
    }
    pos = *choice;
    rec.entries.push_back(pos);
  }
}

}  // namespace dwlab
