#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "dwlab/errors.hpp"
#include "dwlab/gadgets.hpp"
#include "dwlab/simulate.hpp"
#include "helpers.hpp"

using namespace dwlab;
using testing::named;

namespace {

GadgetGraph g5() { return gen_gnst(5, SizeProfile::constant(2), SizeProfile::constant(2)); }

// Robber that picks a uniformly random option.
std::shared_ptr<RobberStrategy> random_robber(std::mt19937& rng) {
  return std::make_shared<ScriptedRobber>(
      "random", [&rng](const Digraph&, const RobberPosition&, const std::vector<CopPosition>& opts) {
        return std::optional<CopPosition>(opts[rng() % opts.size()]);
      });
}

Winner winner(const Digraph& g, int k, Mode mode, bool pruned) {
  SolveOptions o;
  o.mode = mode;
  o.pruned = pruned;
  return solve(g, k, o).winner;
}

}  // namespace

TEST_CASE("monotone move examples") {
  Digraph p = named(2, {{0, 1}});
  CopPosition pos{{1}, {0}};
  CHECK(is_monotone_cop_move(p, pos, pos.cops));
  CHECK_FALSE(is_monotone_cop_move(p, pos, {}));
  CHECK_FALSE(is_monotone_cop_move_by_free_cops(p, pos, {}));
}

TEST_CASE("monotone move on G_5: D cops are free once the robber left C_0") {
  GadgetGraph gg = g5();
  const Digraph& g = gg.graph;
  const auto& lv = gg.levels[0];
  VertexSet n = VertexSet::from(lv.N());
  VertexSet b0{lv.B[0]};
  VertexSet c = n | b0;
  // Robber left C_0 towards the A-clique: its component in G - C.
  VertexSet r = component_of(g, lv.A[0], g.all() - c);
  CopPosition pos{c, r};
  VertexSet next = (n - VertexSet::from(lv.D)) | b0 | VertexSet::from(lv.A);
  CHECK(is_monotone_cop_move(g, pos, next));
  CHECK(is_monotone_cop_move_by_free_cops(g, pos, next));
  CHECK(VertexSet::from(lv.D).subset_of(c - guarding_cops(g, pos)));
}

TEST_CASE("robber move examples") {
  Digraph cyc = named(3, {{0, 1}, {1, 2}, {2, 0}});
  auto init = legal_robber_moves(cyc, RobberPosition{{}, {}, {}});
  REQUIRE(init.size() == 1);
  CHECK(init[0].robber == VertexSet{0, 1, 2});
  CHECK(legal_robber_moves(cyc, RobberPosition{{}, {0, 1, 2}, {0, 1, 2}}).empty());
}

TEST_CASE("solve examples") {
  CHECK(solve(named(1, {}), 1).winner == Winner::Cops);
  Digraph k3 = testing::clique(3);
  CHECK(solve(k3, 2).winner == Winner::Robber);
  CHECK(solve(k3, 3).winner == Winner::Cops);
  CHECK(dag_width(testing::path(4), 4).width == 1);
  CHECK(dag_width(named(2, {{0, 1}, {1, 0}}), 4).width == 2);
}

TEST_CASE("G_5(2,2): width 6") {
  GadgetGraph gg = g5();
  CHECK(gg.graph.size() == 16);
  CHECK(solve(gg.graph, 5).winner == Winner::Robber);
  SolveResult six = solve(gg.graph, 6);
  REQUIRE(six.winner == Winner::Cops);
  CHECK(dag_width(gg.graph, 8).width == 6);
  // The returned strategy wins against every robber.
  CHECK(simulate_exhaustive(gg.graph, *six.cop_strategy, 6).cops_win);
}

TEST_CASE("G_5(2,2): scripted strategies") {
  GadgetGraph gg = g5();
  CHECK(simulate_exhaustive(gg.graph, *canonical_cop_strategy(gg, 6), 6).cops_win);
  // With 5 cops the script runs out of moves or loses.
  bool five_win = false;
  try {
    five_win = simulate_exhaustive(gg.graph, *canonical_cop_strategy(gg, 5), 5).cops_win;
  } catch (const IncompleteStrategyError&) {
  }
  CHECK_FALSE(five_win);
  CHECK(verify_robber_strategy(gg.graph, *canonical_robber_strategy(gg), 5).robber_survives);
  CHECK_FALSE(verify_robber_strategy(gg.graph, *canonical_robber_strategy(gg), 6).robber_survives);
}

TEST_CASE("one vertex: capture in one round, at most two positions") {
  Digraph one = named(1, {});
  SolveResult r = solve(one, 1);
  REQUIRE(r.cop_strategy);
  std::mt19937 rng(1);
  PlayRecord play = simulate(one, *r.cop_strategy, *random_robber(rng), 1);
  CHECK(play.outcome == Outcome::CopsWin);
  CHECK(play.rounds() == 1);
  CHECK(count_consistent_positions(one, *r.cop_strategy, 1) <= 2);
}

TEST_CASE("interactive play") {
  Digraph one = named(1, {});
  SolveResult r = solve(one, 1);
  std::istringstream in;
  std::ostringstream out;
  PlayRecord rec = interactive_play(one, 1, Side::Robber, r.cop_strategy.get(), nullptr, in, out);
  CHECK(rec.outcome == Outcome::CopsWin);
  CHECK(rec.rounds() == 1);

  // A human robber on G_5 always loses against the solver's cops.
  GadgetGraph gg = g5();
  SolveResult six = solve(gg.graph, 6);
  std::string script;
  for (int i = 0; i < 20; ++i) script += "0\n";
  std::istringstream in2(script);
  PlayRecord rec2 = interactive_play(gg.graph, 6, Side::Robber, six.cop_strategy.get(), nullptr, in2, out);
  CHECK(rec2.outcome == Outcome::CopsWin);
  CHECK_FALSE(rec2.aborted);
}

TEST_CASE("budget is reported") {
  SolveOptions o;
  o.max_positions = 3;
  CHECK_THROWS_AS(solve(g5().graph, 6, o), BudgetError);
}

TEST_CASE("property: determinacy and monotonicity in k") {
  std::mt19937 rng(21);
  for (int it = 0; it < 150; ++it) {
    int n = 1 + static_cast<int>(rng() % 6);
    Digraph g = testing::random_graph(rng, n, 0.4);
    bool won = false;
    for (int k = 1; k <= n; ++k) {
      bool cops = solve(g, k).winner == Winner::Cops;
      if (won) CHECK(cops);
      won = won || cops;
    }
    CHECK(won);  // n cops always win
  }
}

TEST_CASE("property: monotone-as-legality equals raw solving (sample, up to 4 vertices)") {
  std::mt19937 rng(22);
  for (int it = 0; it < 200; ++it) {
    int n = 1 + static_cast<int>(rng() % 4);
    Digraph g = testing::random_graph(rng, n, 0.45);
    for (int k = 1; k <= 4; ++k) CHECK(winner(g, k, Mode::Monotone, true) == winner(g, k, Mode::Raw, false));
  }
}

TEST_CASE("property: pruned equals unpruned move generation (sample, up to 5 vertices)") {
  std::mt19937 rng(23);
  for (int it = 0; it < 150; ++it) {
    int n = 1 + static_cast<int>(rng() % 5);
    Digraph g = testing::random_graph(rng, n, 0.4);
    for (int k = 1; k <= 4; ++k)
      CHECK(winner(g, k, Mode::Monotone, true) == winner(g, k, Mode::Monotone, false));
  }
}

TEST_CASE("property: explicit attractor agrees with the memoised search") {
  std::mt19937 rng(24);
  for (int it = 0; it < 150; ++it) {
    int n = 1 + static_cast<int>(rng() % 5);
    Digraph g = testing::random_graph(rng, n, 0.4);
    for (int k = 1; k <= 3; ++k) {
      ExplicitOptions eo;
      eo.pruned = true;
      CHECK(solve_explicit(g, k, eo).winner == solve(g, k).winner);
    }
  }
}

TEST_CASE("property: winning strategies win and territory never grows") {
  std::mt19937 rng(25);
  for (int it = 0; it < 120; ++it) {
    int n = 1 + static_cast<int>(rng() % 6);
    Digraph g = testing::random_graph(rng, n, 0.35);
    auto w = dag_width(g, n);
    REQUIRE(w.width);
    CHECK(simulate_exhaustive(g, *w.strategy, *w.width).cops_win);
    auto robber = random_robber(rng);
    PlayRecord play = simulate(g, *w.strategy, *robber, *w.width);
    CHECK(play.outcome == Outcome::CopsWin);
    VertexSet prev = g.all();
    for (const auto& e : play.entries) {
      if (const auto* cp = std::get_if<CopPosition>(&e)) {
        VertexSet t = territory(g, *cp);
        CHECK(t.subset_of(prev));
        prev = t;
      }
    }
  }
}

TEST_CASE("property: lifting only free cops is exactly monotonicity") {
  std::mt19937 rng(26);
  for (int it = 0; it < 400; ++it) {
    int n = 2 + static_cast<int>(rng() % 5);
    Digraph g = testing::random_graph(rng, n, 0.35);
    VertexSet c, c2;
    for (int v = 0; v < n; ++v) {
      if (rng() % 3 == 0) c.insert(v);
      if (rng() % 3 == 0) c2.insert(v);
    }
    auto comps = components(g, c);
    if (comps.empty()) continue;
    CopPosition pos{c, comps[rng() % comps.size()]};
    CHECK(is_monotone_cop_move(g, pos, c2) == is_monotone_cop_move_by_free_cops(g, pos, c2));
  }
}
