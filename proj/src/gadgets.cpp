#include "dwlab/gadgets.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "dwlab/errors.hpp"
#include "dwlab/simulate.hpp"

namespace dwlab {

using nlohmann::json;

int floor_log2(int n) {
  if (n < 1) throw InputError("log of a non-positive level");
  int r = 0;
  while (n >>= 1) ++r;
  return r;
}

SizeProfile SizeProfile::parse(const std::string& s) {
  if (s == "log" || s == "floor_log") return floor_log();
  if (s == "div_log") return div_log();
  if (s.rfind("const:", 0) == 0) {
    try {
      std::size_t used = 0;
      int c = std::stoi(s.substr(6), &used);
      if (used == s.size() - 6) return constant(c);
    } catch (const std::exception&) {
    }
  }
  throw InputError("unknown size profile '" + s + "' (use const:<c>, log or div_log)");
}

int SizeProfile::operator()(int level) const {
  switch (kind) {
    case Kind::Const: return value;
    case Kind::FloorLog: return floor_log2(level);
    case Kind::DivLog: return level / floor_log2(level);
  }
  return 0;
}

std::string SizeProfile::name() const {
  switch (kind) {
    case Kind::Const: return "const:" + std::to_string(value);
    case Kind::FloorLog: return "log";
    case Kind::DivLog: return "div_log";
  }
  return "?";
}

std::vector<VertexId> GadgetLevel::N() const {
  std::vector<VertexId> out = M;
  out.insert(out.end(), D.begin(), D.end());
  return out;
}

VertexSet GadgetGraph::below(std::size_t i) const {
  VertexSet s = VertexSet::from(bottom);
  for (std::size_t j = i + 1; j < levels.size(); ++j) {
    const auto& L = levels[j];
    for (const auto* part : {&L.M, &L.D, &L.A, &L.B, &L.c}) s |= VertexSet::from(*part);
    for (const auto& ci : L.C) s |= VertexSet::from(ci);
  }
  return s;
}

std::optional<std::size_t> GadgetGraph::outermost_level(const VertexSet& s) const {
  std::optional<std::size_t> best;
  s.for_each([&](VertexId v) {
    const auto& r = graph.role(v);
    if (!r) return;
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (levels[i].level == r->level && r->part != Part::Base && r->part != Part::FHub &&
          r->part != Part::FClause) {
        if (!best || i < *best) best = i;
        break;
      }
  });
  return best;
}

json GadgetGraph::summary() const {
  json rows = json::array();
  for (const auto& L : levels)
    rows.push_back(json{{"level", L.level},
                        {"M", L.M.size()},
                        {"D", L.D.size()},
                        {"C_i", L.C.empty() ? 0 : L.C[0].size()},
                        {"B", L.B.size()}});
  return json{{"levels", rows}, {"bottom", bottom.size()}, {"vertices", graph.size()}, {"edges", graph.edge_count()}};
}

std::string GadgetGraph::summary_text() const {
  std::ostringstream os;
  os << "level  |M|  |D|  |C_i|  |B|\n";
  for (const auto& L : levels)
    os << L.level << "      " << L.M.size() << "    " << L.D.size() << "    " << (L.C.empty() ? 0 : L.C[0].size())
       << "      " << L.B.size() << '\n';
  os << "bottom " << bottom.size() << " vertices; total " << graph.size() << " vertices, " << graph.edge_count()
     << " edges\n";
  return os.str();
}

std::vector<int> gnst_levels(int n, const SizeProfile& s) {
  if (n < 1) throw InputError("n must be at least 1");
  std::vector<int> out{n};
  while (out.back() >= 5) out.push_back(out.back() - s(out.back()) - 1);
  return out;
}

int gnst_size(int n, const SizeProfile& s, const SizeProfile& t) {
  if (n <= 4) return 1;
  int sn = s(n), tn = t(n);
  return n + tn * (n - sn) + sn + tn + gnst_size(n - sn - 1, s, t);
}

namespace {

void check_profile(int level, const SizeProfile& s, const SizeProfile& t) {
  int sl = s(level), tl = t(level);
  double bound = static_cast<double>(level) / floor_log2(level);
  if (sl < 2 || sl >= bound)
    throw InputError("profile violates 2 <= s(l) < l/log l at level " + std::to_string(level) + " (s=" +
                     std::to_string(sl) + ")");
  if (tl < 2)
    throw InputError("profile violates t(l) >= 2 at level " + std::to_string(level) + " (t=" + std::to_string(tl) +
                     ")");
}

std::vector<VertexId> add_part(Digraph& g, int level, Part part, int index, int count, const std::string& label) {
  std::vector<VertexId> out;
  for (int j = 0; j < count; ++j) {
    std::string name = label + std::to_string(level) + "_" + std::to_string(j);
    RoleTag role{level, part, part == Part::C ? index : j, 0};
    out.push_back(g.add_vertex(name, role));
  }
  return out;
}

}  // namespace

GadgetGraph gen_gnst(int n, const SizeProfile& s, const SizeProfile& t) {
  std::vector<int> levels = gnst_levels(n, s);
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) check_profile(levels[i], s, t);
  GadgetGraph gg;
  Digraph& g = gg.graph;
  gg.base_level = levels.back();
  gg.bottom.push_back(g.add_vertex("base", RoleTag{levels.back(), Part::Base, 0, 0}));

  // Build from the innermost level outwards; `sub` is everything built so far.
  std::vector<GadgetLevel> built;
  for (int i = static_cast<int>(levels.size()) - 2; i >= 0; --i) {
    int l = levels[i], sl = s(l), tl = t(l);
    std::vector<VertexId> sub = g.all().to_vector();
    GadgetLevel L;
    L.level = l;
    L.M = add_part(g, l, Part::M, 0, l - sl, "M");
    L.D = add_part(g, l, Part::D, 0, sl, "D");
    L.A = add_part(g, l, Part::A, 0, sl, "A");
    for (int j = 0; j < tl; ++j) {
      std::string name = "b" + std::to_string(l) + "_" + std::to_string(j);
      L.B.push_back(g.add_vertex(name, RoleTag{l, Part::B, j, 0}));
    }
    for (int j = 0; j < tl; ++j) L.C.push_back(add_part(g, l, Part::C, j, l - sl, "C" + std::to_string(j) + "_"));
    std::vector<VertexId> N = L.N();
    g.add_clique(N);
    g.add_clique(L.A);
    for (int j = 0; j < tl; ++j) {
      g.add_clique(L.C[j]);
      g.add_all(N, L.C[j]);
      g.add_all(L.C[j], L.D);
      g.add_all(L.C[j], {L.B[j]});
    }
    g.add_all(L.B, L.A);
    g.add_all(L.A, L.B);
    g.add_all(L.A, L.M);
    g.add_all(N, sub);
    g.add_all(L.A, sub);
    g.add_all(sub, L.A);
    g.add_all(sub, L.B);
    built.push_back(std::move(L));
  }
  gg.levels.assign(built.rbegin(), built.rend());
  return gg;
}

// ---------------------------------------------------------------------------
// Scripted strategies

namespace {

bool contains_any(const VertexSet& s, const std::vector<VertexId>& vs) {
  for (VertexId v : vs)
    if (s.contains(v)) return true;
  return false;
}

VertexSet set_of(const std::vector<VertexId>& vs) { return VertexSet::from(vs); }

std::optional<VertexSet> within(const VertexSet& move, int k) {
  if (move.size() > k) return std::nullopt;
  return move;
}

std::optional<VertexSet> first_move(const GadgetGraph& gg, int k, bool with_a) {
  if (gg.levels.empty()) return within(set_of(gg.bottom), k);
  VertexSet m = set_of(gg.levels[0].N());
  if (with_a) m |= set_of(gg.levels[0].A);
  return within(m, k);
}

std::optional<VertexSet> sigma_move(const GadgetGraph& gg, int k, const Digraph& g, const CopPosition& pos) {
  if (pos.is_initial()) return first_move(gg, k, false);
  VertexSet guard = guarding_cops(g, pos);
  VertexSet terr = territory(g, pos);
  if (guard.size() + terr.size() <= k) return guard | terr;
  auto li = gg.outermost_level(pos.robber);
  if (!li) return std::nullopt;
  const GadgetLevel& L = gg.levels[*li];
  if (contains_any(pos.robber, L.N())) return within(guard | set_of(L.N()), k);
  for (std::size_t i = 0; i < L.C.size(); ++i)
    if (pos.robber.subset_of(set_of(L.C[i]))) {
      // The M cops sweep the clique once b_i is held.
      if (guard.contains(L.B[i])) return within(guard | pos.robber, k);
      return within(guard | VertexSet{L.B[i]}, k);
    }
  if (!guard.intersects(set_of(L.B))) return within(guard | VertexSet{L.B[0]}, k);
  return within(guard | set_of(L.A), k);
}

std::optional<VertexSet> poly_move(const GadgetGraph& gg, int k, const Digraph& g, const CopPosition& pos) {
  if (pos.is_initial()) return first_move(gg, k, true);
  VertexSet guard = guarding_cops(g, pos);
  VertexSet terr = territory(g, pos);
  if (guard.size() + terr.size() <= k) return guard | terr;
  auto li = gg.outermost_level(pos.robber);
  if (!li) return std::nullopt;
  const GadgetLevel& L = gg.levels[*li];
  if (contains_any(pos.robber, L.N())) return within(guard | set_of(L.N()) | set_of(L.A), k);
  for (const auto& ci : L.C)
    if (pos.robber.subset_of(set_of(ci))) return within(guard | pos.robber, k);
  return std::nullopt;
}

// Reply with the largest territory after the move; ties go to the lowest id.
std::optional<CopPosition> widest(const Digraph& g, const std::vector<CopPosition>& options) {
  if (options.empty()) return std::nullopt;
  const CopPosition* best = nullptr;
  int best_size = -1;
  for (const auto& o : options) {
    int sz = territory(g, o).size();
    if (sz > best_size) {
      best = &o;
      best_size = sz;
    }
  }
  return *best;
}

// Reply that keeps an unoccupied vertex of N(l) for the outermost level l
// whose A set is still free.
std::optional<CopPosition> open_n_reply(const GadgetGraph& gg, const RobberPosition& rpos,
                                        const std::vector<CopPosition>& options) {
  for (const auto& L : gg.levels) {
    if (set_of(L.A).subset_of(rpos.cops_new)) continue;
    VertexSet open = set_of(L.N()) - rpos.cops_new;
    for (const auto& o : options)
      if (o.robber.intersects(open)) return o;
    break;
  }
  return std::nullopt;
}

}  // namespace

std::shared_ptr<CopStrategy> canonical_cop_strategy(const GadgetGraph& gg, int k) {
  return std::make_shared<ScriptedCops>(
      "sigma", [gg, k](const Digraph& g, const CopPosition& pos) { return sigma_move(gg, k, g, pos); });
}

std::shared_ptr<CopStrategy> poly_cop_strategy(const GadgetGraph& gg, int k) {
  return std::make_shared<ScriptedCops>(
      "poly", [gg, k](const Digraph& g, const CopPosition& pos) { return poly_move(gg, k, g, pos); });
}

std::shared_ptr<RobberStrategy> canonical_robber_strategy(const GadgetGraph& gg) {
  return std::make_shared<ScriptedRobber>(
      "gadget-robber",
      [gg](const Digraph& g, const RobberPosition& rpos,
           const std::vector<CopPosition>& options) -> std::optional<CopPosition> {
        if (auto o = open_n_reply(gg, rpos, options)) return o;
        if (!gg.levels.empty()) {
          VertexSet c0 = set_of(gg.levels[0].C[0]);
          for (const auto& o : options)
            if (o.robber.subset_of(c0)) return o;
        }
        return widest(g, options);
      });
}

std::shared_ptr<RobberStrategy> forcing_robber_strategy(const GadgetGraph& gg, std::vector<int> choices) {
  choices.resize(gg.levels.size() + 1, 0);
  return std::make_shared<ScriptedRobber>(
      "forcing-robber",
      [gg, choices](const Digraph&, const RobberPosition& rpos,
                    const std::vector<CopPosition>& options) -> std::optional<CopPosition> {
        if (options.empty()) return std::nullopt;
        if (auto o = open_n_reply(gg, rpos, options)) return o;
        for (std::size_t i = 0; i < gg.levels.size(); ++i) {
          const GadgetLevel& L = gg.levels[i];
          // Escape below once the b cop of this level is down.
          if (rpos.cops_new.intersects(set_of(L.B)))
            for (const auto& o : options)
              if (o.robber.intersects(set_of(L.A) - rpos.cops_new)) return o;
          int want = choices[i] % static_cast<int>(L.C.size());
          for (const auto& o : options)
            if (o.robber.subset_of(set_of(L.C[want])) && !rpos.cops_new.contains(L.B[want])) return o;
        }
        for (std::size_t i = 0; i < gg.levels.size(); ++i)
          for (const auto& o : options)
            if (o.robber.intersects(gg.below(i)) && gg.outermost_level(o.robber) &&
                *gg.outermost_level(o.robber) > i && contains_any(o.robber, gg.levels[*gg.outermost_level(o.robber)].N()))
              return o;
        std::size_t pick = static_cast<std::size_t>(std::max(0, choices.back()));
        return options[std::min(pick, options.size() - 1)];
      });
}

std::vector<CopPosition> deep_positions(const GadgetGraph& gg, const std::vector<CopPosition>& positions) {
  std::vector<CopPosition> out;
  for (const auto& p : positions) {
    bool deep = !gg.levels.empty();
    for (const auto& L : gg.levels) {
      int bs = 0;
      for (VertexId b : L.B) bs += p.cops.contains(b);
      if (!set_of(L.A).subset_of(p.cops) || bs != 1) deep = false;
    }
    if (deep) out.push_back(p);
  }
  return out;
}

Branching forced_branching(const GadgetGraph& gg) {
  Branching br;
  int k = gg.levels.empty() ? 1 : gg.levels[0].level + 1;
  auto cops = canonical_cop_strategy(gg, k);
  std::set<std::pair<std::vector<VertexId>, std::vector<VertexId>>> seen;
  std::vector<int> choices(gg.levels.size() + 1, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == choices.size()) {
      auto robber = forcing_robber_strategy(gg, choices);
      PlayRecord play = simulate(gg.graph, *cops, *robber, k);
      ++br.plays;
      if (play.outcome != Outcome::CopsWin) br.all_cop_wins = false;
      std::vector<CopPosition> visited;
      for (const auto& e : play.entries)
        if (const auto* c = std::get_if<CopPosition>(&e)) visited.push_back(*c);
      for (const auto& d : deep_positions(gg, visited))
        if (seen.emplace(d.cops.to_vector(), d.robber.to_vector()).second) br.deep.push_back(d);
      return;
    }
    int width = i < gg.levels.size() ? static_cast<int>(gg.levels[i].B.size()) : (gg.levels.empty() ? 1 : 2);
    for (int c = 0; c < width; ++c) {
      choices[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return br;
}

// ---------------------------------------------------------------------------
// Comparison fixtures

Digraph gen_upclosure_tree(int h) {
  if (h < 1) throw InputError("height must be at least 1");
  int n = (1 << h) - 1;
  if (n > kMaxVertices) throw InputError("tree too large");
  Digraph g;
  for (int v = 0; v < n; ++v) g.add_vertex("t" + std::to_string(v));
  for (int v = 1; v < n; ++v) {
    int p = (v - 1) / 2;
    g.add_undirected(v, p);
    for (int a = p; a > 0;) {
      a = (a - 1) / 2;
      g.add_edge(v, a);
    }
  }
  return g;
}

namespace {

// Adds a copy of G_n^m below nothing; returns (root, leaves).
std::pair<VertexId, std::vector<VertexId>> add_sibling_tree(Digraph& g, int n, int m, const std::string& prefix) {
  VertexId root = g.add_vertex(prefix.empty() ? "r" : prefix);
  if (n <= 1) return {root, {root}};
  std::vector<std::vector<VertexId>> child_leaves;
  std::vector<VertexId> leaves;
  for (int i = 0; i < m; ++i) {
    auto [c, ls] = add_sibling_tree(g, n - 1, m, (prefix.empty() ? "r" : prefix) + "." + std::to_string(i + 1));
    g.add_undirected(root, c);
    for (const auto& earlier : child_leaves)
      for (VertexId l : earlier)
        if (l != c) g.add_edge(c, l);
    child_leaves.push_back(ls);
    leaves.insert(leaves.end(), ls.begin(), ls.end());
  }
  return {root, leaves};
}

}  // namespace

Digraph gen_sibling_tree(int n, int m) {
  if (n < 1 || m < 1) throw InputError("sibling tree needs n, m >= 1");
  Digraph g;
  add_sibling_tree(g, n, m, "");
  return g;
}

}  // namespace dwlab
