#include <algorithm>
#include <sstream>

#include "dwlab/errors.hpp"
#include "dwlab/logic.hpp"
#include "dwlab/serialize.hpp"

namespace dwlab {

using nlohmann::json;

namespace {

std::vector<VertexId> add_part(Digraph& g, int level, Part part, int index, int count, const std::string& label) {
  std::vector<VertexId> out;
  for (int j = 0; j < count; ++j)
    out.push_back(g.add_vertex(label + std::to_string(level) + "_" + std::to_string(j),
                               RoleTag{level, part, part == Part::C ? index : j, 0}));
  return out;
}

VertexSet set_of(const std::vector<VertexId>& vs) { return VertexSet::from(vs); }

// Adds F_ψ to g; returns its vertices with the hub first and, per clause, the
// literal vertices.
std::vector<VertexId> add_clause_gadget(Digraph& g, const CnfFormula& psi,
                                        std::vector<std::vector<VertexId>>* cliques) {
  std::vector<VertexId> all{g.add_vertex("F", RoleTag{0, Part::FHub, 0, 0})};
  for (std::size_t c = 0; c < psi.clauses.size(); ++c) {
    std::vector<VertexId> k;
    for (std::size_t i = 0; i < psi.clauses[c].size(); ++i) {
      const Literal& l = psi.clauses[c][i];
      VertexId v = g.add_vertex("K" + std::to_string(c + 1) + "_" + std::to_string(i + 1),
                                RoleTag{0, Part::FClause, static_cast<int>(c), l.positive ? l.var : -l.var});
      g.add_undirected(all[0], v);
      k.push_back(v);
      all.push_back(v);
    }
    g.add_clique(k);
    if (cliques) cliques->push_back(std::move(k));
  }
  return all;
}

}  // namespace

Digraph build_clause_gadget(const CnfFormula& psi) {
  psi.check();
  Digraph g;
  add_clause_gadget(g, psi, nullptr);
  return g;
}

GadgetGraph build_s_phi(const QbfFormula& phi, int innermost_m) {
  phi.check();
  if (innermost_m < 1) throw InputError("innermost |M| must be at least 1");
  GadgetGraph gg;
  Digraph& g = gg.graph;
  int r = phi.r();
  if (r == 0) {
    // Without variables the matrix is true iff it has no (necessarily empty) clause.
    gg.bottom.push_back(g.add_vertex("F", RoleTag{0, Part::FHub, 0, 0}));
    if (!phi.matrix.clauses.empty()) {
      gg.bottom.push_back(g.add_vertex("F'", RoleTag{0, Part::FHub, 1, 0}));
      g.add_undirected(gg.bottom[0], gg.bottom[1]);
    }
    return gg;
  }
  for (std::size_t c = 0; c < phi.matrix.clauses.size(); ++c)
    if (phi.matrix.clauses[c].empty())
      throw InputError("restriction violated: clause " + std::to_string(c + 1) + " is empty");

  std::vector<std::vector<VertexId>> cliques;
  gg.bottom = add_clause_gadget(g, phi.matrix, &cliques);

  std::vector<GadgetLevel> built;
  for (int j = r - 1; j >= 0; --j) {
    auto [q, var] = phi.prefix[static_cast<std::size_t>(j)];
    int m = innermost_m + 3 * (r - 1 - j);
    std::vector<VertexId> sub = g.all().to_vector();
    GadgetLevel L;
    L.level = var;
    L.variable = var;
    L.existential = q == Quantifier::Exists;
    L.M = add_part(g, var, Part::M, 0, m, "M");
    L.D = add_part(g, var, Part::D, 0, 2, "D");
    L.A = add_part(g, var, Part::A, 0, 2, "A");
    for (int i = 0; i < 2; ++i)
      L.B.push_back(g.add_vertex("b" + std::to_string(var) + "_" + std::to_string(i), RoleTag{var, Part::B, i, 0}));
    for (int i = 0; i < 2; ++i) L.C.push_back(add_part(g, var, Part::C, i, m, "C" + std::to_string(i) + "_"));
    if (L.existential)
      for (int i = 0; i < 2; ++i)
        L.c.push_back(g.add_vertex("c" + std::to_string(var) + "_" + std::to_string(i), RoleTag{var, Part::c, i, 0}));

    std::vector<VertexId> N = L.N();
    g.add_clique(N);
    g.add_clique(L.A);
    for (int i = 0; i < 2; ++i) {
      g.add_clique(L.C[i]);
      if (L.existential) {
        g.add_all(N, {L.c[i]});
        g.add_all({L.c[i]}, L.C[i]);
      } else {
        g.add_all(N, L.C[i]);
      }
      g.add_all(L.C[i], L.D);
      g.add_all(L.C[i], {L.B[i]});
    }
    g.add_all(L.B, L.A);
    g.add_all(L.A, L.B);
    g.add_all(L.A, L.M);
    g.add_all(N, sub);
    g.add_all(L.A, sub);
    g.add_all(sub, L.A);

    // Clause edges: a literal on this variable points to b_1 if positive and
    // to b_0 if negative; a clause without the variable points to both.
    for (std::size_t c = 0; c < cliques.size(); ++c) {
      const Clause& clause = phi.matrix.clauses[c];
      bool occurs = std::any_of(clause.begin(), clause.end(), [&](const Literal& l) { return l.var == var; });
      for (std::size_t i = 0; i < clause.size(); ++i) {
        VertexId v = cliques[c][i];
        if (!occurs) {
          g.add_edge(v, L.B[0]);
          g.add_edge(v, L.B[1]);
        } else if (clause[i].var == var) {
          g.add_edge(v, L.B[clause[i].positive ? 1 : 0]);
        }
      }
    }
    built.push_back(std::move(L));
  }
  gg.levels.assign(built.rbegin(), built.rend());
  return gg;
}

GadgetGraph build_h_phi(const CnfFormula& psi, int innermost_m) {
  QbfFormula phi;
  phi.matrix = psi;
  for (int v = 1; v <= psi.num_vars; ++v) phi.prefix.emplace_back(Quantifier::Forall, v);
  return build_s_phi(phi, innermost_m);
}

int predicted_cops(const QbfFormula& phi, int innermost_m) {
  if (phi.r() == 0) return 1;
  int m_outer = innermost_m + 3 * (phi.r() - 1);
  return m_outer + 2 + 1;
}

LevelBlockade level_blockade(const GadgetGraph& gg, std::size_t level, const std::vector<int>& bits) {
  if (level > gg.levels.size() || bits.size() < level) throw InputError("blockade needs one bit per outer level");
  LevelBlockade b{level, std::vector<int>(bits.begin(), bits.begin() + static_cast<long>(level)), {}};
  for (std::size_t i = 0; i < level; ++i) {
    b.blocked |= set_of(gg.levels[i].A);
    b.blocked.insert(gg.levels[i].B.at(static_cast<std::size_t>(bits[i])));
  }
  return b;
}

std::vector<bool> recorded_values(const GadgetGraph& gg, const VertexSet& cops) {
  std::vector<bool> out;
  for (const auto& L : gg.levels) out.push_back(cops.contains(L.B[0]));
  return out;
}

namespace {

bool meets(const VertexSet& s, const std::vector<VertexId>& vs) { return s.intersects(set_of(vs)); }

std::optional<VertexSet> within(const VertexSet& move, int k) {
  if (move.size() > k) return std::nullopt;
  return move;
}

// Target b vertex of a clause vertex for its own literal.
VertexId literal_target(const GadgetGraph& gg, VertexId v) {
  int lit = gg.graph.role(v)->literal;
  int var = lit < 0 ? -lit : lit;
  for (const auto& L : gg.levels)
    if (L.variable == var) return L.B[lit > 0 ? 1 : 0];
  throw std::logic_error("clause vertex without a level");
}

std::optional<VertexSet> clause_phase_move(const GadgetGraph& gg, int k, const Digraph& g, const CopPosition& pos,
                                           const VertexSet& guard) {
  VertexId hub = gg.bottom[0];
  if (pos.robber.contains(hub)) return within(guard | VertexSet{hub}, k);
  int free = k - guard.size();
  if (free <= 0) return std::nullopt;
  // Occupy first the clause vertices that are the last F-neighbours of a held b.
  std::vector<VertexId> first, rest;
  pos.robber.for_each([&](VertexId v) {
    const auto& role = g.role(v);
    bool productive = role && role->part == Part::FClause && guard.contains(literal_target(gg, v));
    (productive ? first : rest).push_back(v);
  });
  first.insert(first.end(), rest.begin(), rest.end());
  VertexSet move = guard;
  for (std::size_t i = 0; i < first.size() && static_cast<int>(i) < free; ++i) move.insert(first[i]);
  return move;
}

std::optional<VertexSet> script_move(const GadgetGraph& gg, const ValueChoice& exists, int k, const Digraph& g,
                                     const CopPosition& pos) {
  bool initial = pos.is_initial();
  VertexSet guard = guarding_cops(g, pos);
  VertexSet terr = territory(g, pos);
  if (gg.levels.empty()) {
    // No variables: cover as much of the territory as the cops can.
    VertexSet x = guard;
    terr.for_each([&](VertexId v) {
      if (x.size() < k) x.insert(v);
    });
    return x;
  }
  if (guard.size() + terr.size() <= k) return guard | terr;
  std::optional<std::size_t> li = initial ? std::optional<std::size_t>{0} : gg.outermost_level(pos.robber);
  if (!li) return clause_phase_move(gg, k, g, pos, guard);

  const GadgetLevel& L = gg.levels[*li];
  // Keep the b-cops of outer levels: they record the valuation.
  VertexSet base = guard;
  for (std::size_t i = 0; i < *li; ++i) base |= pos.cops & set_of(gg.levels[i].B);
  int want = 0;
  if (L.existential) {
    std::vector<bool> values = recorded_values(gg, pos.cops);
    values.resize(*li);
    want = exists(values) ? 0 : 1;
  }
  if (initial || meets(pos.robber, L.N())) {
    if (L.existential && !pos.cops.contains(L.c[1 - want])) return within(base | VertexSet{L.c[1 - want]}, k);
    return within(base | set_of(L.N()), k);
  }
  for (int x = 0; x < 2; ++x) {
    bool in_c = pos.robber.subset_of(set_of(L.C[x]));
    bool on_sub = L.existential && pos.robber == VertexSet{L.c[x]};
    if (!in_c && !on_sub) continue;
    if (L.existential && in_c && x != want) return within(base | pos.robber, k);  // expel
    int b = L.existential ? want : x;
    if (guard.contains(L.B[b])) return within(base | pos.robber, k);
    return within(base | VertexSet{L.B[b]}, k);
  }
  if (!guard.intersects(set_of(L.B))) return within(base | VertexSet{L.B[L.existential ? want : 0]}, k);
  return within(base | set_of(L.A), k);
}

std::optional<CopPosition> widest_reply(const Digraph& g, const std::vector<CopPosition>& options) {
  if (options.empty()) return std::nullopt;
  const CopPosition* best = &options.front();
  int best_size = -1;
  for (const auto& o : options)
    if (int sz = territory(g, o).size(); sz > best_size) {
      best = &o;
      best_size = sz;
    }
  return *best;
}

std::optional<CopPosition> robber_reply(const GadgetGraph& gg, const ValueChoice& forall, const Digraph& g,
                                        const RobberPosition& rpos, const std::vector<CopPosition>& options) {
  if (options.empty()) return std::nullopt;
  const VertexSet& cops = rpos.cops_new;
  for (std::size_t li = 0; li < gg.levels.size(); ++li) {
    const GadgetLevel& L = gg.levels[li];
    if (set_of(L.A).subset_of(cops)) continue;
    VertexSet open = set_of(L.N()) - cops;
    for (const auto& o : options)
      if (o.robber.intersects(open)) return o;
    if (!cops.intersects(set_of(L.B))) {
      std::vector<int> order{0, 1};
      if (!L.existential) {
        std::vector<bool> values = recorded_values(gg, cops);
        values.resize(li);
        if (!forall(values)) order = {1, 0};
      }
      for (int x : order)
        for (const auto& o : options)
          if (o.robber.subset_of(set_of(L.C[static_cast<std::size_t>(x)]))) return o;
    } else {
      VertexSet lower = gg.below(li) | set_of(L.A);
      for (const auto& o : options)
        if (o.robber.intersects(lower - cops) && o.robber.intersects(gg.below(li))) return o;
    }
    return widest_reply(g, options);
  }
  // Clause gadget: a clause whose literal vertices all point at held b vertices.
  for (const auto& o : options) {
    bool all_clause = true, blocked = true;
    o.robber.for_each([&](VertexId v) {
      const auto& role = g.role(v);
      if (!role || role->part != Part::FClause) {
        all_clause = false;
        return;
      }
      if (!cops.contains(literal_target(gg, v))) blocked = false;
    });
    if (all_clause && blocked) return o;
  }
  return widest_reply(g, options);
}

}  // namespace

std::shared_ptr<CopStrategy> scripted_cops(const QbfFormula&, const GadgetGraph& gg, ValueChoice exists, int k) {
  return std::make_shared<ScriptedCops>("qbf-cops", [gg, exists, k](const Digraph& g, const CopPosition& pos) {
    return script_move(gg, exists, k, g, pos);
  });
}

std::shared_ptr<RobberStrategy> scripted_robber(const QbfFormula&, const GadgetGraph& gg, ValueChoice forall) {
  return std::make_shared<ScriptedRobber>(
      "qbf-robber", [gg, forall](const Digraph& g, const RobberPosition& rpos, const std::vector<CopPosition>& options) {
        return robber_reply(gg, forall, g, rpos, options);
      });
}

namespace {

ValueChoice from_result(const QbfResult& mc) {
  auto choice = mc.choice;
  return [choice](const std::vector<bool>& values) {
    auto it = choice.find(values);
    return it == choice.end() ? false : it->second;
  };
}

}  // namespace

std::shared_ptr<CopStrategy> cop_strategy_from_exists(const QbfFormula& phi, const GadgetGraph& gg,
                                                      const QbfResult& mc, int k) {
  if (!mc.truth) throw InputError("the existential player does not win; no cop script");
  return scripted_cops(phi, gg, from_result(mc), k);
}

std::shared_ptr<RobberStrategy> robber_strategy_from_forall(const QbfFormula& phi, const GadgetGraph& gg,
                                                            const QbfResult& mc) {
  if (mc.truth) throw InputError("the universal player does not win; no robber script");
  return scripted_robber(phi, gg, from_result(mc));
}

// ---------------------------------------------------------------------------
// Verification

namespace {

// Every positional choice function of one player, as bit masks over the
// (prefix position, earlier values) pairs the player decides.
struct ChoiceSpace {
  std::vector<std::size_t> offset;  // per prefix position, -1 when not ours
  std::size_t bits = 0;

  ChoiceSpace(const QbfFormula& phi, Quantifier q) {
    for (int j = 0; j < phi.r(); ++j) {
      if (phi.prefix[static_cast<std::size_t>(j)].first == q) {
        offset.push_back(bits);
        bits += std::size_t{1} << j;
      } else {
        offset.push_back(static_cast<std::size_t>(-1));
      }
    }
  }
  ValueChoice function(std::uint64_t mask) const {
    auto off = offset;
    return [off, mask](const std::vector<bool>& values) {
      std::size_t j = values.size();
      if (j >= off.size() || off[j] == static_cast<std::size_t>(-1)) return false;
      std::size_t idx = 0;
      for (std::size_t i = 0; i < j; ++i) idx |= static_cast<std::size_t>(values[i]) << i;
      return ((mask >> (off[j] + idx)) & 1u) != 0;
    };
  }
};

}  // namespace

ReductionReport verify_reduction(const QbfFormula& phi, const ReductionOptions& opts) {
  return verify_reduction_on(phi, build_s_phi(phi, opts.innermost_m), opts);
}

ReductionReport verify_reduction_on(const QbfFormula& phi, const GadgetGraph& gg, const ReductionOptions& opts) {
  ReductionReport rep;
  QbfResult mc = qbf_eval(phi);
  rep.truth = mc.truth;
  rep.k_star = predicted_cops(phi, opts.innermost_m);
  const Digraph& g = gg.graph;
  bool ok = true;
  try {
    if (opts.full_solve) {
      SolveOptions so;
      so.max_positions = opts.max_positions;
      rep.cops_win = solve(g, rep.k_star, so).winner == Winner::Cops;
      // With no cops at all the robber wins on any nonempty graph.
      rep.robber_wins_below = rep.k_star - 1 < 1 ? g.size() > 0 : solve(g, rep.k_star - 1, so).winner == Winner::Robber;
      ok = ok && *rep.cops_win == rep.truth && *rep.robber_wins_below;
      if (rep.truth) {
        auto res = simulate_exhaustive(g, *cop_strategy_from_exists(phi, gg, mc, rep.k_star), rep.k_star);
        rep.script_vs_exhaustive = res.cops_win;
        if (!res.cops_win) rep.play = res.counterexample;
      } else {
        auto chk = verify_robber_strategy(g, *robber_strategy_from_forall(phi, gg, mc), rep.k_star, opts.max_positions);
        rep.script_vs_exhaustive = chk.robber_survives;
        if (!chk.robber_survives) rep.play = chk.capture;
      }
      ok = ok && *rep.script_vs_exhaustive;
    }
  } catch (const BudgetError& e) {
    rep.verified = false;
    rep.note = std::string("unverified: ") + e.what();
  }

  // Script of the MC(φ) winner against the opposing script under every
  // positional choice function of the loser.
  rep.script = rep.truth ? "cops" : "robber";
  ChoiceSpace space(phi, rep.truth ? Quantifier::Forall : Quantifier::Exists);
  if (space.bits > 16) throw BudgetError("too many opposing choice functions to enumerate");
  rep.script_vs_scripts = true;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << space.bits); ++mask) {
    ValueChoice other = space.function(mask);
    auto cops = rep.truth ? cop_strategy_from_exists(phi, gg, mc, rep.k_star) : scripted_cops(phi, gg, other, rep.k_star);
    auto robber = rep.truth ? scripted_robber(phi, gg, other) : robber_strategy_from_forall(phi, gg, mc);
    PlayRecord play = simulate(g, *cops, *robber, rep.k_star);
    ++rep.scripted_plays;
    bool won = (play.outcome == Outcome::CopsWin) == rep.truth;
    if (!won) {
      rep.script_vs_scripts = false;
      if (!rep.play) rep.play = play;
      break;
    }
    if (!rep.play && mask == 0) rep.play = play;
  }
  ok = ok && rep.script_vs_scripts;
  rep.agrees = ok && rep.verified;
  return rep;
}

json ReductionReport::to_json(const Digraph& g) const {
  auto opt = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
  json j{{"truth", truth},
         {"k_star", k_star},
         {"cops_win", opt(cops_win)},
         {"robber_wins_below", opt(robber_wins_below)},
         {"script", script},
         {"script_vs_exhaustive", opt(script_vs_exhaustive)},
         {"script_vs_scripts", script_vs_scripts},
         {"scripted_plays", scripted_plays},
         {"agrees", agrees},
         {"verified", verified}};
  if (!note.empty()) j["note"] = note;
  if (play) j["play"] = json{{"record", play->to_json()}, {"transcript", play->transcript(g)}};
  return j;
}

std::string ReductionReport::to_text() const {
  auto opt = [](const std::optional<bool>& b) -> std::string { return b ? (*b ? "yes" : "no") : "not run"; };
  std::ostringstream os;
  os << "truth: " << (truth ? "true" : "false") << "\n"
     << "k*: " << k_star << "\n"
     << "cops win at k*: " << opt(cops_win) << "\n"
     << "robber wins at k*-1: " << opt(robber_wins_below) << "\n"
     << script << " script vs exhaustive opponent: " << opt(script_vs_exhaustive) << "\n"
     << script << " script vs " << scripted_plays << " opposing scripts: " << (script_vs_scripts ? "won" : "lost")
     << "\n"
     << "agrees: " << (agrees ? "yes" : "no") << (verified ? "" : " (unverified)") << "\n";
  if (!note.empty()) os << note << "\n";
  return os.str();
}

}  // namespace dwlab
