#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <set>

#include "dwlab/errors.hpp"
#include "dwlab/logic.hpp"
#include "qbf_corpus.hpp"

using namespace dwlab;

namespace {

QbfFormula qbf(std::vector<std::pair<Quantifier, int>> prefix, int vars, std::vector<Clause> clauses) {
  QbfFormula f;
  f.prefix = std::move(prefix);
  f.matrix.num_vars = vars;
  f.matrix.clauses = std::move(clauses);
  return f;
}

constexpr auto E = Quantifier::Exists;
constexpr auto A = Quantifier::Forall;
const Literal x1{1, true}, nx1{1, false}, x2{2, true}, nx2{2, false};

// Plays the winner's strategy against every choice of the other player.
bool strategy_wins(const QbfFormula& f, const QbfResult& res, std::vector<bool>& values) {
  if (static_cast<int>(values.size()) == f.r()) {
    Valuation beta = res.valuation(values);
    if (res.truth) {
      for (int c = 0; c < static_cast<int>(f.matrix.clauses.size()); ++c) {
        auto lit = res.true_literal(values, c);
        if (!lit) return false;
        const Literal& l = f.matrix.clauses[c][*lit];
        if (beta[l.var] != l.positive) return false;
      }
      return f.matrix.satisfied_by(beta);
    }
    auto c = res.falsified_clause(values);
    return c && !CnfFormula::clause_satisfied(f.matrix.clauses[*c], beta);
  }
  bool winner_moves = (f.prefix[values.size()].first == E) == res.truth;
  std::vector<bool> options;
  if (winner_moves) {
    auto v = res.value(values);
    if (!v) return false;
    options = {*v};
  } else {
    options = {false, true};
  }
  for (bool b : options) {
    values.push_back(b);
    bool ok = strategy_wins(f, res, values);
    values.pop_back();
    if (!ok) return false;
  }
  return true;
}

VertexId b_vertex(const GadgetGraph& gg, std::size_t level, int i) { return gg.levels[level].B[i]; }

}  // namespace

TEST_CASE("parser examples") {
  CnfFormula one = parse_dimacs("p cnf 1 1\n1 0\n");
  REQUIRE(one.clauses.size() == 1);
  CHECK(one.clauses[0] == Clause{x1});
  CHECK(is_tautology(one) == false);

  CnfFormula two = parse_dimacs("c comment\np cnf 2 2\n1 2 0\n-1 -2 0\n");
  CHECK(two.clauses.size() == 2);
  CHECK(two.clauses[1] == Clause{nx1, nx2});

  try {
    parse_dimacs("p cnf 1 1\n1 -1 0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("restriction violated") != std::string::npos);
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 2\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n1\n"), ParseError);

  QbfFormula q = parse_qdimacs("p cnf 3 1\na 2 0\ne 3 0\n1 2 3 0\n");
  REQUIRE(q.r() == 3);
  CHECK(q.prefix[0] == std::pair{E, 1});  // free variable becomes outermost existential
  CHECK(q.prefix[1] == std::pair{A, 2});
  CHECK(parse_qdimacs(q.to_qdimacs()).prefix == q.prefix);
  CHECK(parse_qdimacs(q.to_qdimacs()).matrix.clauses == q.matrix.clauses);
}

TEST_CASE("evaluation examples") {
  CHECK(is_tautology(CnfFormula{2, {}}));
  CHECK_FALSE(qbf_eval(qbf({{A, 1}}, 1, {{x1}})).truth);
  CHECK(qbf_eval(qbf({{E, 1}}, 1, {{x1}})).truth);
  QbfFormula f = qbf({{A, 1}, {E, 2}}, 2, {{x1, x2}, {nx1, nx2}});
  CHECK(qbf_eval(f).truth);
  CHECK(qbf_truth_table(f));
  CHECK(qbf_eval(qbf({}, 0, {})).truth);
  CHECK_FALSE(qbf_eval(qbf({}, 0, {{}})).truth);
}

TEST_CASE("property: game evaluation equals the truth table, and its strategy wins") {
  int n = 0;
  for (int r = 0; r <= 3; ++r)
    for (const auto& f : testing::all_qbfs(r, 2, 3)) {
      QbfResult res = qbf_eval(f);
      CHECK_MESSAGE(res.truth == qbf_truth_table(f), f.to_string());
      std::vector<bool> values;
      CHECK_MESSAGE(strategy_wins(f, res, values), f.to_string());
      ++n;
    }
  CHECK(n > 1000);
}

TEST_CASE("property: a nonempty CNF with distinct variables per clause is never a tautology") {
  for (int r = 1; r <= 3; ++r)
    for (const auto& m : testing::all_matrices(r, 2, 3)) {
      if (m.empty()) continue;
      CHECK_FALSE(is_tautology(CnfFormula{r, m}));
    }
}

TEST_CASE("clause gadget sizes") {
  Digraph one = build_clause_gadget(CnfFormula{1, {{x1}}});
  CHECK(one.size() == 2);
  CHECK(one.has_edge(0, 1));
  CHECK(one.has_edge(1, 0));
  Digraph two = build_clause_gadget(CnfFormula{2, {{x1, x2}, {nx1, nx2}}});
  CHECK(two.size() == 5);
  CHECK(two.edge_count() == 2 * (4 + 2));
  CHECK(build_clause_gadget(CnfFormula{1, {}}).size() == 1);
}

TEST_CASE("reduction graph sizes and thresholds") {
  CHECK(build_s_phi(qbf({{A, 1}}, 1, {{x1}})).graph.size() == 20);
  CHECK(build_s_phi(qbf({{E, 1}}, 1, {{x1}})).graph.size() == 22);
  CHECK(build_s_phi(qbf({}, 0, {})).graph.size() == 1);
  GadgetGraph f0 = build_s_phi(qbf({}, 0, {{}}));
  CHECK(f0.graph.size() == 2);
  CHECK(dag_width(f0.graph, 3).width == 2);
  CHECK(predicted_cops(qbf({{A, 1}}, 1, {{x1}})) == 7);
  CHECK(predicted_cops(qbf({{A, 1}, {E, 2}}, 2, {})) == 10);
  CHECK(predicted_cops(qbf({}, 0, {})) == 1);
  CHECK(build_h_phi(CnfFormula{1, {{x1}}}).graph.size() == 20);
  CHECK_THROWS_AS(build_s_phi(qbf({{E, 1}}, 1, {{}})), InputError);
}

TEST_CASE("property: the tautology graph is the all-universal reduction graph") {
  for (const auto& m : testing::all_matrices(2, 2, 2)) {
    CnfFormula psi{2, m};
    GadgetGraph h = build_h_phi(psi);
    GadgetGraph s = build_s_phi(qbf({{A, 1}, {A, 2}}, 2, m));
    CHECK(h.graph == s.graph);
  }
}

TEST_CASE("property: clause vertices point at the b vertices of every level") {
  // A vertex of clause C points at both b vertices of a level whose variable
  // does not occur in C. If it does occur, only the literal's own vertex has
  // an arc there: to b_1 for a positive and to b_0 for a negative literal.
  for (int r = 1; r <= 3; ++r)
    for (const auto& f : testing::all_qbfs(r, 2, 2)) {
      GadgetGraph gg = build_s_phi(f);
      const Digraph& g = gg.graph;
      for (VertexId v = 0; v < g.size(); ++v) {
        const auto& role = g.role(v);
        if (!role || role->part != Part::FClause) continue;
        const Clause& c = f.matrix.clauses[role->index];
        // The role stores the literal as a signed variable index.
        const Literal own{std::abs(role->literal), role->literal > 0};
        for (std::size_t l = 0; l < gg.levels.size(); ++l) {
          int var = gg.levels[l].variable;
          bool to0 = g.has_edge(v, b_vertex(gg, l, 0)), to1 = g.has_edge(v, b_vertex(gg, l, 1));
          bool occurs = std::any_of(c.begin(), c.end(), [&](const Literal& x) { return x.var == var; });
          if (!occurs) {
            CHECK(to0);
            CHECK(to1);
          } else if (own.var == var) {
            CHECK(to1 == own.positive);
            CHECK(to0 == !own.positive);
          } else {
            CHECK_FALSE(to0);
            CHECK_FALSE(to1);
          }
        }
      }
    }
}

TEST_CASE("level blockade and recorded values") {
  QbfFormula f = qbf({{A, 1}, {E, 2}}, 2, {{x1, x2}});
  GadgetGraph gg = build_s_phi(f);
  LevelBlockade lb = level_blockade(gg, 1, {1});
  VertexSet want = VertexSet::from(gg.levels[0].A);
  want.insert(gg.levels[0].B[1]);
  CHECK(lb.blocked == want);
  CHECK(recorded_values(gg, lb.blocked) == std::vector<bool>{false, false});
  VertexSet b0{gg.levels[0].B[0], gg.levels[1].B[0]};
  CHECK(recorded_values(gg, b0) == std::vector<bool>{true, true});
}

TEST_CASE("strategies refuse a false premise") {
  QbfFormula t = qbf({{E, 1}}, 1, {{x1}});
  QbfFormula f = qbf({{A, 1}}, 1, {{x1}});
  QbfResult rt = qbf_eval(t), rf = qbf_eval(f);
  CHECK_THROWS_AS(cop_strategy_from_exists(f, build_s_phi(f), rf, 7), InputError);
  CHECK_THROWS_AS(robber_strategy_from_forall(t, build_s_phi(t), rt), InputError);
  CHECK_NOTHROW(cop_strategy_from_exists(t, build_s_phi(t), rt, 7));
  CHECK_NOTHROW(robber_strategy_from_forall(f, build_s_phi(f), rf));
}

TEST_CASE("cop script on a true formula wins against every robber") {
  QbfFormula t = qbf({{E, 1}}, 1, {{x1}});
  GadgetGraph gg = build_s_phi(t);
  auto cops = cop_strategy_from_exists(t, gg, qbf_eval(t), 7);
  ExhaustiveResult res = simulate_exhaustive(gg.graph, *cops, 7);
  CHECK(res.cops_win);
  ReductionReport rep = verify_reduction(t);
  CHECK(rep.truth);
  CHECK(rep.k_star == 7);
  CHECK(rep.agrees);
  CHECK(rep.verified);
}

TEST_CASE("r = 0 reduction agrees") {
  for (const auto& f : testing::r0_bases()) {
    ReductionReport rep = verify_reduction(f);
    CHECK_MESSAGE(rep.agrees, f.to_string(), "\n", rep.to_text());
  }
}

TEST_CASE("single-variable reduction agrees with evaluation") {
  for (const auto& f : testing::all_qbfs(1, 1, 1)) {
    ReductionReport rep = verify_reduction(f);
    CHECK_MESSAGE(rep.agrees, f.to_string(), "\n", rep.to_text());
  }
}

TEST_CASE("robber script on a false formula survives k* cops") {
  QbfFormula f = qbf({{A, 1}}, 1, {{x1}});
  GadgetGraph gg = build_s_phi(f);
  auto robber = robber_strategy_from_forall(f, gg, qbf_eval(f));
  CHECK(verify_robber_strategy(gg.graph, *robber, 7).robber_survives);
  CHECK(solve(gg.graph, 7).winner == Winner::Robber);
}

TEST_CASE("a corrupted clause arc is detected") {
  // Flipping the arc of the first clause turns the graph into the one for
  // (X1) & (~X1), which is false.
  QbfFormula t = qbf({{E, 1}}, 1, {{x1}, {x1}});
  GadgetGraph gg = build_s_phi(t);
  VertexId lit = -1;
  for (VertexId v = 0; v < gg.graph.size() && lit < 0; ++v)
    if (gg.graph.role(v) && gg.graph.role(v)->part == Part::FClause && gg.graph.role(v)->index == 0) lit = v;
  REQUIRE(lit >= 0);
  GadgetGraph bad = gg;
  Digraph g;
  for (VertexId v = 0; v < gg.graph.size(); ++v) g.add_vertex(gg.graph.name(v), gg.graph.role(v));
  VertexId b0 = gg.levels[0].B[0], b1 = gg.levels[0].B[1];
  for (auto [u, v] : gg.graph.edges()) g.add_edge(u, (u == lit && v == b1) ? b0 : v);
  bad.graph = g;
  REQUIRE(bad.graph.has_edge(lit, b0));
  REQUIRE_FALSE(bad.graph.has_edge(lit, b1));
  ReductionOptions o;
  CHECK(verify_reduction_on(t, gg, o).agrees);
  CHECK_FALSE(verify_reduction_on(t, bad, o).agrees);
}

TEST_CASE("two-variable scripted verification") {
  QbfFormula f = qbf({{A, 1}, {E, 2}}, 2, {{x1, x2}, {nx1, nx2}});
  ReductionOptions o;
  o.full_solve = false;
  ReductionReport rep = verify_reduction(f, o);
  CHECK(rep.k_star == 10);
  CHECK(rep.script_vs_scripts);
  CHECK_MESSAGE(rep.agrees, rep.to_text());
}

TEST_CASE("report serialisation") {
  QbfFormula t = qbf({{E, 1}}, 1, {{x1}});
  ReductionReport rep = verify_reduction(t);
  auto j = rep.to_json(build_s_phi(t).graph);
  CHECK(j["agrees"] == true);
  CHECK(j["k_star"] == 7);
  CHECK(j.contains("play"));
  CHECK(rep.to_text().find("agrees") != std::string::npos);
}
