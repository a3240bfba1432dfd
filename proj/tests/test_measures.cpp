#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dwlab/errors.hpp"
#include "dwlab/gadgets.hpp"
#include "dwlab/measures.hpp"
#include "helpers.hpp"

using namespace dwlab;
using testing::named;

namespace {

// Bag of v: v and all its ancestors; tree edges as in the binary tree.
DDecomposition natural_decomposition(int h) {
  int n = (1 << h) - 1;
  DDecomposition d;
  for (int v = 0; v < n; ++v) {
    VertexSet bag{v};
    for (int a = v; a > 0;) {
      a = (a - 1) / 2;
      bag.insert(a);
    }
    d.bags.push_back(bag);
    if (v > 0) d.tree.emplace_back((v - 1) / 2, v);
  }
  return d;
}

}  // namespace

TEST_CASE("support examples") {
  Digraph dag = testing::path(4);
  EliminationOrder rev{3, 2, 1, 0};
  for (VertexId v = 0; v < 4; ++v) CHECK(support(dag, rev, v).empty());
  CHECK(order_width(dag, rev) == 0);

  Digraph k3 = testing::clique(3);
  CHECK(support(k3, {0, 1, 2}, 0) == VertexSet{1, 2});

  Digraph two = named(2, {{0, 1}, {1, 0}});
  CHECK(support(two, {0, 1}, 0) == VertexSet{1});
  CHECK(support(two, {0, 1}, 1).empty());
  CHECK(support_after(two, {0}, 1).empty());
}

TEST_CASE("kelly width examples") {
  CHECK(kelly_width(testing::path(5)).width == 1);
  for (int k = 1; k <= 5; ++k) CHECK(kelly_width(testing::clique(k)).width == k);
  CHECK(kelly_width(gen_sibling_tree(2)).width == 2);
  CHECK(kelly_width_by_permutations(gen_sibling_tree(2)).width == 2);
  KellyResult r = kelly_width(testing::clique(4));
  CHECK(1 + order_width(testing::clique(4), r.order) == 4);
  CHECK_THROWS_AS(kelly_width(testing::clique(6), 5), BudgetError);
}

TEST_CASE("d-decomposition examples") {
  Digraph one = named(1, {});
  DDecomposition d1{{}, {{0}}};
  CHECK(validate_d_decomposition(one, d1).ok);
  CHECK(width(d1) == 1);

  Digraph s2 = gen_sibling_tree(2);
  DDecomposition ts = tree_edge_decomposition(s2);
  CHECK(validate_d_decomposition(s2, ts).ok);
  CHECK(width(ts) == 2);

  Digraph two = named(2, {{0, 1}, {1, 0}});
  DDecomposition split{{{0, 1}}, {{0}, {1}}};
  CHECK_FALSE(validate_d_decomposition(two, split).ok);
  DDecomposition mismatch{{{0, 5}}, {{0}, {1}}};
  CHECK_THROWS_AS(validate_d_decomposition(two, mismatch), InputError);
  auto back = DDecomposition::from_json(ts.to_json(), s2);
  CHECK(back.tree == ts.tree);
  CHECK(back.bags == ts.bags);
}

TEST_CASE("property: dp equals the permutation oracle up to 5 vertices") {
  std::mt19937 rng(41);
  for (int it = 0; it < 300; ++it) {
    int n = 1 + static_cast<int>(rng() % 5);
    Digraph g = testing::random_graph(rng, n, 0.4);
    KellyResult dp = kelly_width(g);
    CHECK(dp.width == kelly_width_by_permutations(g).width);
    CHECK(1 + order_width(g, dp.order) == dp.width);
  }
}

TEST_CASE("property: acyclic graphs have kelly width 1") {
  std::mt19937 rng(42);
  for (int it = 0; it < 100; ++it) {
    int n = 1 + static_cast<int>(rng() % 8);
    Digraph g = named(n, {});
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 2) g.add_edge(v, u);
    CHECK(kelly_width(g).width == 1);
  }
}

TEST_CASE("property: adding edges never decreases kelly width") {
  std::mt19937 rng(43);
  for (int it = 0; it < 200; ++it) {
    int n = 1 + static_cast<int>(rng() % 6);
    Digraph g = testing::random_graph(rng, n, 0.3);
    Digraph h = g;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && rng() % 4 == 0) h.add_edge(u, v);
    CHECK(kelly_width(g).width <= kelly_width(h).width);
  }
}

TEST_CASE("property: natural decomposition of the upward-closed tree") {
  for (int h = 1; h <= 3; ++h) {
    Digraph t = gen_upclosure_tree(h);
    DDecomposition d = natural_decomposition(h);
    auto chk = validate_d_decomposition(t, d);
    CHECK_MESSAGE(chk.ok, chk.axiom, " ", chk.witness);
    CHECK(width(d) <= h + 1);
    auto dw = dag_width(t, 8);
    REQUIRE(dw.width);
    MESSAGE("upclosure h=", h, ": D-decomposition width ", width(d), ", dag width ", *dw.width);
  }
}
