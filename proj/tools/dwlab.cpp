#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dwlab/decomp.hpp"
#include "dwlab/errors.hpp"
#include "dwlab/gadgets.hpp"
#include "dwlab/logic.hpp"
#include "dwlab/measures.hpp"
#include "dwlab/serialize.hpp"
#include "dwlab/simulate.hpp"

using namespace dwlab;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

struct Common {
  std::string format = "text";
  std::string graph_format = "json";
  std::string output;
  std::uint64_t max_positions = 50'000'000;
  bool json() const { return format == "json"; }
};

GraphFormat graph_format(const std::string& name) {
  auto f = graph_format_from_name(name);
  if (!f) throw InputError("unknown graph format \"" + name + "\"");
  return *f;
}

Digraph load_graph(const std::string& path, const Common& c) {
  std::string data = read_file(path);
  // Files ending in .dot or .edges are read in that format regardless of --graph-format.
  GraphFormat f = graph_format(c.graph_format);
  if (path.size() > 4 && path.substr(path.size() - 4) == ".dot") f = GraphFormat::Dot;
  if (path.size() > 6 && path.substr(path.size() - 6) == ".edges") f = GraphFormat::EdgeList;
  return decode(data, f);
}

json load_json(const std::string& path) {
  std::string data = read_file(path);
  try {
    return json::parse(data);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what(), e.byte);
  }
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty())
    std::cout << text;
  else
    write_file(c.output, text);
}

void emit_json(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

std::string yes_no(bool b) { return b ? "yes" : "no"; }

Mode parse_mode(const std::string& m) {
  if (m == "monotone") return Mode::Monotone;
  if (m == "raw") return Mode::Raw;
  throw InputError("mode must be monotone or raw");
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("DWLAB_THREADS")) {
    // Accepted for compatibility; every computation here runs on one thread.
    char* end = nullptr;
    long n = std::strtol(t, &end, 10);
    if (*t == '\0' || *end != '\0' || n < 1) {
      std::cerr << "error: usage: DWLAB_THREADS must be a positive integer\n";
      return kUsage;
    }
  }

  CLI::App app{"Exact laboratory for DAG-width games, decompositions and reductions"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--graph-format", c.graph_format, "Graph encoding for input and output")
      ->check(CLI::IsMember({"json", "dot", "edges"}));
  app.add_option("-o,--output", c.output, "Write the main output to this file");
  app.add_option("--max-positions", c.max_positions, "Position budget")->check(CLI::PositiveNumber);

  int exit_code = kOk;
  auto print_graph = [&](const Digraph& g) { emit(c, encode(g, graph_format(c.graph_format))); };

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph");
  gen->require_subcommand(1);
  bool summary = false;
  int n = 5, h = 2, m = 0;
  std::string s_prof = "const:2", t_prof = "const:2";
  auto* gnst = gen->add_subcommand("gnst", "Lower-bound gadget G_n(s,t)");
  gnst->add_option("--n", n, "Top level")->required();
  gnst->add_option("--s", s_prof, "s profile: const:<c>, log or div_log");
  gnst->add_option("--t", t_prof, "t profile: const:<c>, log or div_log");
  gnst->add_flag("--summary", summary, "Print the level table instead of the graph");
  gnst->callback([&] {
    GadgetGraph gg = gen_gnst(n, SizeProfile::parse(s_prof), SizeProfile::parse(t_prof));
    if (!summary) return print_graph(gg.graph);
    if (c.json()) return emit_json(c, gg.summary());
    emit(c, gg.summary_text());
  });
  auto* up = gen->add_subcommand("upclosure", "Binary tree with arcs to all ancestors");
  up->add_option("--height", h, "Height")->required()->check(CLI::NonNegativeNumber);
  up->callback([&] { print_graph(gen_upclosure_tree(h)); });
  auto* sib = gen->add_subcommand("sibling", "Recursive sibling tree G_n^m");
  sib->add_option("--n", n, "Depth")->required()->check(CLI::NonNegativeNumber);
  sib->add_option("--m", m, "Branching (defaults to n)");
  sib->callback([&] { print_graph(gen_sibling_tree(n, m > 0 ? m : n)); });

  // solve / width
  std::string graph_path, second_path, mode = "monotone";
  int k = 1;
  bool unpruned = false;
  std::string strategy_out;
  auto* solve_cmd = app.add_subcommand("solve", "Decide the k-cop monotone (or raw) game");
  solve_cmd->add_option("graph", graph_path)->required();
  solve_cmd->add_option("--k", k, "Number of cops")->required()->check(CLI::PositiveNumber);
  solve_cmd->add_option("--mode", mode)->check(CLI::IsMember({"monotone", "raw"}));
  solve_cmd->add_flag("--unpruned", unpruned, "Generate all cop moves");
  solve_cmd->add_option("--strategy-out", strategy_out, "Write the cop strategy table here");
  solve_cmd->callback([&] {
    Digraph g = load_graph(graph_path, c);
    SolveOptions o;
    o.mode = parse_mode(mode);
    o.pruned = !unpruned;
    o.max_positions = c.max_positions;
    SolveResult r = solve(g, k, o);
    if (!strategy_out.empty() && r.cop_strategy) write_file(strategy_out, r.cop_strategy->to_json().dump(2) + "\n");
    json j{{"winner", std::string(winner_name(r.winner))}, {"k", k}, {"positions", r.positions}};
    if (c.json()) {
      if (r.cop_strategy) j["strategy"] = r.cop_strategy->to_json();
      return emit_json(c, j);
    }
    emit(c, std::string(winner_name(r.winner)) + "\n");
  });

  int k_max = 8;
  auto* width_cmd = app.add_subcommand("width", "Least k for which the cops win monotonically");
  width_cmd->add_option("graph", graph_path)->required();
  width_cmd->add_option("--max", k_max, "Largest k to try")->check(CLI::PositiveNumber);
  width_cmd->callback([&] {
    Digraph g = load_graph(graph_path, c);
    SolveOptions o;
    o.max_positions = c.max_positions;
    WidthResult w = dag_width(g, k_max, o);
    if (!w.width) exit_code = kNegative;
    if (c.json()) return emit_json(c, json{{"width", w.width ? json(*w.width) : json(nullptr)}, {"max", k_max}});
    emit(c, w.width ? std::to_string(*w.width) + "\n" : "greater than " + std::to_string(k_max) + "\n");
  });

  // decompositions
  auto report_check = [&](const DecompositionCheck& chk, int w, int size) {
    if (!chk) exit_code = kNegative;
    if (c.json())
      return emit_json(c, json{{"valid", chk.ok}, {"axiom", chk.axiom}, {"witness", chk.witness}, {"width", w},
                               {"size", size}});
    emit(c, chk ? "valid: width " + std::to_string(w) + ", size " + std::to_string(size) + "\n"
                : "invalid (" + chk.axiom + "): " + chk.witness + "\n");
  };
  auto* vd = app.add_subcommand("validate-decomp", "Check a DAG decomposition");
  vd->add_option("graph", graph_path)->required();
  vd->add_option("decomp", second_path)->required();
  vd->callback([&] {
    Digraph g = load_graph(graph_path, c);
    DagDecomposition d = DagDecomposition::from_json(load_json(second_path), g);
    report_check(validate(g, d), width(d), d.size());
  });
  auto* vdd = app.add_subcommand("validate-ddecomp", "Check a D-decomposition");
  vdd->add_option("graph", graph_path)->required();
  vdd->add_option("decomp", second_path)->required();
  vdd->callback([&] {
    Digraph g = load_graph(graph_path, c);
    DDecomposition d = DDecomposition::from_json(load_json(second_path), g);
    report_check(validate_d_decomposition(g, d), width(d), d.size());
  });
  auto* s2d = app.add_subcommand("strategy-to-decomp", "Decomposition from a winning cop strategy table");
  s2d->add_option("graph", graph_path)->required();
  s2d->add_option("strategy", second_path)->required();
  s2d->add_option("--k", k, "Number of cops")->required()->check(CLI::PositiveNumber);
  s2d->callback([&] {
    Digraph g = load_graph(graph_path, c);
    StrategyTable t = StrategyTable::from_json(load_json(second_path), g);
    emit_json(c, decomposition_from_strategy(g, t, k).to_json());
  });
  auto* d2s = app.add_subcommand("decomp-to-strategy", "Cop strategy table from a decomposition");
  d2s->add_option("graph", graph_path)->required();
  d2s->add_option("decomp", second_path)->required();
  d2s->callback([&] {
    Digraph g = load_graph(graph_path, c);
    DagDecomposition d = DagDecomposition::from_json(load_json(second_path), g);
    emit_json(c, strategy_from_decomposition(g, d).to_json());
  });
  auto* cp = app.add_subcommand("count-positions", "Consistent positions of the strategy of a decomposition");
  cp->add_option("graph", graph_path)->required();
  cp->add_option("decomp", second_path)->required();
  cp->callback([&] {
    Digraph g = load_graph(graph_path, c);
    DagDecomposition d = DagDecomposition::from_json(load_json(second_path), g);
    StrategyTable t = strategy_from_decomposition(g, d);
    std::uint64_t count = count_consistent_positions(g, t, std::max(1, width(d)));
    std::uint64_t bound = static_cast<std::uint64_t>(d.size()) * static_cast<std::uint64_t>(g.size());
    if (count > bound) exit_code = kNegative;
    if (c.json()) return emit_json(c, json{{"positions", count}, {"bound", bound}, {"within_bound", count <= bound}});
    emit(c, std::to_string(count) + " positions (bound " + std::to_string(bound) + ")\n");
  });

  auto* kelly = app.add_subcommand("kelly", "Exact Kelly-width with an optimal elimination order");
  kelly->add_option("graph", graph_path)->required();
  kelly->callback([&] {
    Digraph g = load_graph(graph_path, c);
    KellyResult r = kelly_width(g);
    json order = json::array();
    for (VertexId v : r.order) order.push_back(g.name(v));
    if (c.json()) return emit_json(c, json{{"kelly_width", r.width}, {"order", order}});
    std::string s = std::to_string(r.width) + "\norder:";
    for (VertexId v : r.order) s += " " + g.name(v);
    emit(c, s + "\n");
  });

  // logic
  std::string phi_path, emit_graph;
  int innermost_m = 4;
  auto* reduce = app.add_subcommand("reduce", "Build the reduction graph of a QDIMACS formula");
  reduce->add_option("formula", phi_path)->required();
  reduce->add_option("--innermost-m", innermost_m, "|M| of the innermost level")->check(CLI::PositiveNumber);
  reduce->add_flag("--summary", summary, "Print the level table and k* instead of the graph");
  reduce->callback([&] {
    QbfFormula phi = parse_qdimacs(read_file(phi_path));
    GadgetGraph gg = build_s_phi(phi, innermost_m);
    if (!summary) return print_graph(gg.graph);
    json j = gg.summary();
    j["k_star"] = predicted_cops(phi, innermost_m);
    if (c.json()) return emit_json(c, j);
    emit(c, gg.summary_text() + "k*: " + std::to_string(predicted_cops(phi, innermost_m)) + "\n");
  });
  auto* qe = app.add_subcommand("qbf-eval", "Evaluate a QDIMACS formula");
  qe->add_option("formula", phi_path)->required();
  qe->callback([&] {
    QbfFormula phi = parse_qdimacs(read_file(phi_path));
    QbfResult r = qbf_eval(phi);
    if (c.json()) {
      json choices = json::array();
      for (const auto& [values, v] : r.choice) choices.push_back(json{{"after", values}, {"value", v}});
      return emit_json(c, json{{"truth", r.truth},
                               {"winner", r.truth ? "exists" : "forall"},
                               {"choices", choices},
                               {"oracle", qbf_truth_table(phi)}});
    }
    emit(c, std::string(r.truth ? "true" : "false") + "\n");
  });
  bool scripted_only = false;
  auto* vr = app.add_subcommand("verify-reduction", "Check the reduction against the formula's truth value");
  vr->add_option("formula", phi_path)->required();
  vr->add_option("--innermost-m", innermost_m, "|M| of the innermost level")->check(CLI::PositiveNumber);
  vr->add_flag("--scripted-only", scripted_only, "Skip the solver; play the scripts only");
  vr->add_option("--emit-graph", emit_graph, "Write the reduction graph as JSON here");
  vr->callback([&] {
    QbfFormula phi = parse_qdimacs(read_file(phi_path));
    ReductionOptions o;
    o.innermost_m = innermost_m;
    o.full_solve = !scripted_only;
    o.max_positions = c.max_positions;
    GadgetGraph gg = build_s_phi(phi, innermost_m);
    if (!emit_graph.empty()) write_file(emit_graph, graph_to_json(gg.graph).dump(2) + "\n");
    ReductionReport rep = verify_reduction_on(phi, gg, o);
    exit_code = !rep.verified ? kBudget : rep.agrees ? kOk : kNegative;
    if (c.json()) return emit_json(c, rep.to_json(gg.graph));
    emit(c, rep.to_text());
  });

  // play
  std::string side = "cops";
  auto* play = app.add_subcommand("play", "Play against the solver on the terminal");
  play->add_option("graph", graph_path)->required();
  play->add_option("--k", k, "Number of cops")->required()->check(CLI::PositiveNumber);
  play->add_option("--side", side, "Side played by the human")->check(CLI::IsMember({"cops", "robber"}));
  play->callback([&] {
    Digraph g = load_graph(graph_path, c);
    SolveOptions o;
    o.max_positions = c.max_positions;
    SolveResult r = solve(g, k, o);
    PlayRecord rec = interactive_play(g, k, side == "cops" ? Side::Cops : Side::Robber, r.cop_strategy.get(),
                                      r.robber_strategy.get(), std::cin, std::cout);
    if (c.json()) emit_json(c, rec.to_json());
  });

  // Global options may also follow the subcommand.
  std::function<void(CLI::App*)> pass_up = [&](CLI::App* a) {
    for (CLI::App* sub : a->get_subcommands({})) {
      sub->fallthrough();
      pass_up(sub);
    }
  };
  pass_up(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: usage: " << e.what() << "\nRun with --help for more information.\n";
    return kUsage;
  } catch (const BudgetError& e) {
    std::cerr << "error: budget: " << e.what() << "\n";
    return kBudget;
  } catch (const ParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "error: input: " << e.what() << "\n";
    return kUsage;
  } catch (const IncompleteStrategyError& e) {
    std::cerr << "error: strategy: " << e.what() << "\n";
    return kNegative;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kUsage;
  }
  return exit_code;
}
