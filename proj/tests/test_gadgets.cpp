#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "dwlab/errors.hpp"
#include "dwlab/gadgets.hpp"
#include "dwlab/simulate.hpp"

using namespace dwlab;

namespace {

SizeProfile two = SizeProfile::constant(2);

// Independent size count: N, t cliques C_i of size n - s, A, B, then the
// recursive gadget; a single vertex below 5.
int expected_size(int n, const SizeProfile& s, const SizeProfile& t) {
  if (n < 5) return 1;
  int sn = s(n), tn = t(n);
  return n + tn * (n - sn) + sn + tn + expected_size(n - sn - 1, s, t);
}

}  // namespace

TEST_CASE("size examples") {
  CHECK(gen_gnst(2, two, two).graph.size() == 1);
  CHECK(gen_gnst(2, two, two).graph.edge_count() == 0);
  GadgetGraph g5 = gen_gnst(5, two, two);
  CHECK(g5.graph.size() == 16);
  CHECK(gnst_levels(5, two) == std::vector<int>{5, 2});
  CHECK(gen_gnst(8, two, two).graph.size() == 40);
  CHECK(gnst_levels(8, two) == std::vector<int>{8, 5, 2});
  CHECK(floor_log2(1) == 0);
  CHECK(floor_log2(8) == 3);
  CHECK(floor_log2(9) == 3);
}

TEST_CASE("property: sizes follow the recurrence for n up to 40") {
  for (const auto& s : {SizeProfile::constant(2), SizeProfile::floor_log(), SizeProfile::div_log()})
    for (const auto& t : {SizeProfile::constant(2), SizeProfile::floor_log(), SizeProfile::div_log()})
      for (int n = 1; n <= 40; ++n) {
        CAPTURE(n);
        CAPTURE(s.name());
        CAPTURE(t.name());
        int want = expected_size(n, s, t);
        if (want > kMaxVertices) continue;
        try {
          GadgetGraph gg = gen_gnst(n, s, t);
          CHECK(gg.graph.size() == want);
          CHECK(gnst_size(n, s, t) == want);
        } catch (const InputError&) {
          // Only profiles that break the side conditions may be refused.
          bool broken = false;
          for (int l : gnst_levels(n, s))
            if (l >= 5 && (s(l) < 2 || t(l) < 2 || s(l) * floor_log2(l) >= l)) broken = true;
          CHECK(broken);
        }
      }
}

TEST_CASE("property: role labels partition the vertices") {
  for (int n : {5, 8, 12}) {
    GadgetGraph gg = gen_gnst(n, two, two);
    std::set<VertexId> seen;
    for (VertexId v = 0; v < gg.graph.size(); ++v) CHECK(gg.graph.role(v).has_value());
    for (const auto& lv : gg.levels) {
      std::vector<VertexId> all = lv.N();
      all.insert(all.end(), lv.A.begin(), lv.A.end());
      all.insert(all.end(), lv.B.begin(), lv.B.end());
      for (const auto& c : lv.C) all.insert(all.end(), c.begin(), c.end());
      for (VertexId v : all) CHECK(seen.insert(v).second);
    }
    for (VertexId v : gg.bottom) CHECK(seen.insert(v).second);
    CHECK(static_cast<int>(seen.size()) == gg.graph.size());
  }
}

TEST_CASE("canonical strategies on G_5(2,2)") {
  GadgetGraph gg = gen_gnst(5, two, two);
  auto sigma = canonical_cop_strategy(gg, 6);
  auto res = simulate_exhaustive(gg.graph, *sigma, 6);
  CHECK(res.cops_win);
  CHECK(count_consistent_positions(gg.graph, *sigma, 6) == 12);
  // With 5 cops the script runs out of moves or loses.
  bool five_win = false;
  try {
    five_win = simulate_exhaustive(gg.graph, *canonical_cop_strategy(gg, 5), 5).cops_win;
  } catch (const IncompleteStrategyError&) {
  }
  CHECK_FALSE(five_win);
  CHECK(verify_robber_strategy(gg.graph, *canonical_robber_strategy(gg), 5).robber_survives);
  CHECK(solve(gg.graph, 5).winner == Winner::Robber);
}

TEST_CASE("canonical strategy on G_8(2,2) with 9 cops") {
  GadgetGraph gg = gen_gnst(8, two, two);
  CHECK(simulate_exhaustive(gg.graph, *canonical_cop_strategy(gg, 9), 9).cops_win);
  CHECK(simulate_exhaustive(gg.graph, *poly_cop_strategy(gg, 10), 10).cops_win);
}

TEST_CASE("forced branching and the additive-constant strategy on G_5(2,2)") {
  GadgetGraph gg = gen_gnst(5, two, two);
  Branching br = forced_branching(gg);
  CHECK(br.all_cop_wins);
  CHECK(br.deep.size() >= 4);
  auto poly = poly_cop_strategy(gg, 7);
  CHECK(simulate_exhaustive(gg.graph, *poly, 7).cops_win);
  CHECK(count_consistent_positions(gg.graph, *poly, 7) == 7);
  CHECK(count_consistent_positions(gg.graph, *poly, 7) < count_consistent_positions(gg.graph, *canonical_cop_strategy(gg, 6), 6));
  CHECK(solve(gen_gnst(2, two, two).graph, 1).winner == Winner::Cops);
}

TEST_CASE("forcing robber reaches distinct deep positions") {
  GadgetGraph gg = gen_gnst(5, two, two);
  auto sigma = canonical_cop_strategy(gg, 6);
  std::set<std::pair<std::vector<VertexId>, std::vector<VertexId>>> seen;
  for (int c0 : {0, 1})
    for (int c1 : {0, 1}) {
      PlayRecord play = simulate(gg.graph, *sigma, *forcing_robber_strategy(gg, {c0, c1}), 6);
      CHECK(play.outcome == Outcome::CopsWin);
      std::vector<CopPosition> ps;
      for (const auto& e : play.entries)
        if (const auto* cp = std::get_if<CopPosition>(&e)) ps.push_back(*cp);
      for (const auto& d : deep_positions(gg, ps)) seen.insert({d.cops.to_vector(), d.robber.to_vector()});
    }
  CHECK(seen.size() >= 2);
}

TEST_CASE("other families") {
  CHECK(gen_upclosure_tree(1).size() == 1);
  Digraph t3 = gen_upclosure_tree(3);
  CHECK(t3.size() == 7);
  CHECK(t3.has_edge(3, 0));
  CHECK(t3.has_edge(1, 0));
  CHECK(t3.has_edge(0, 1));
  CHECK_FALSE(t3.has_edge(0, 3));
  Digraph s2 = gen_sibling_tree(2);
  CHECK(s2.size() == 3);
  CHECK(s2.edge_count() == 5);  // two tree edges both ways plus one cross arc
  CHECK(gen_sibling_tree(3, 2).size() == 7);
  CHECK_THROWS_AS(gen_gnst(5, SizeProfile::constant(1), two), InputError);
}
