#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dwlab/gadgets.hpp"
#include "dwlab/simulate.hpp"

namespace dwlab {

struct Literal {
  int var = 1;  // 1-based
  bool positive = true;
  friend bool operator==(const Literal&, const Literal&) = default;
};
using Clause = std::vector<Literal>;

/// Valuation indexed by variable; entry 0 is unused.
using Valuation = std::vector<bool>;

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  /// Throws InputError on out-of-range variables or a variable repeated in a
  /// clause. Empty clauses are allowed here (they are unsatisfiable).
  void check() const;
  bool satisfied_by(const Valuation& beta) const;
  static bool clause_satisfied(const Clause& c, const Valuation& beta);
  std::string to_dimacs() const;
  /// "(X1 | ~X2) & (X2)"; "true" for no clauses.
  std::string to_string() const;
};

enum class Quantifier { Exists, Forall };

struct QbfFormula {
  /// Outermost first; covers every matrix variable exactly once.
  std::vector<std::pair<Quantifier, int>> prefix;
  CnfFormula matrix;

  int r() const { return static_cast<int>(prefix.size()); }
  void check() const;
  std::string to_qdimacs() const;
  std::string to_string() const;
};

/// DIMACS CNF. Errors carry line and column; a repeated or complementary
/// literal in one clause is reported as a restriction violation.
CnfFormula parse_dimacs(std::string_view text);
/// QDIMACS. Variables not bound by the prefix become outermost existentials.
QbfFormula parse_qdimacs(std::string_view text);

/// Truth table over all valuations; a CNF without clauses is a tautology.
bool is_tautology(const CnfFormula& f);

/// Result of the model-checking game: the winner and a positional strategy.
/// Outside the matrix the winner's choices are keyed by the values of the
/// earlier prefix variables (in prefix order). In the matrix phase the
/// universal player picks a clause and the existential player a literal.
struct QbfResult {
  bool truth = false;
  std::map<std::vector<bool>, bool> choice;
  const QbfFormula* formula = nullptr;

  /// Value the winner assigns at prefix position `values.size()`.
  std::optional<bool> value(const std::vector<bool>& values) const;
  /// Clause falsified by the full valuation (universal winner), in prefix order.
  std::optional<int> falsified_clause(const std::vector<bool>& values) const;
  /// Index of a literal of `clause` made true (existential winner).
  std::optional<int> true_literal(const std::vector<bool>& values, int clause) const;
  /// Valuation by variable index from prefix-ordered values.
  Valuation valuation(const std::vector<bool>& values) const;
};

/// Recursive game evaluation; throws BudgetError above `max_vars` variables.
/// The result keeps a pointer to `f`, which must outlive it.
QbfResult qbf_eval(const QbfFormula& f, int max_vars = 20);

/// Independent oracle: folds the full truth table from the innermost
/// quantifier outwards.
bool qbf_truth_table(const QbfFormula& f, int max_vars = 20);

// ---------------------------------------------------------------------------
// Reduction graphs

/// The clause gadget alone: hub "F" bidirected to every clause vertex, each
/// clause a bidirected clique. Empty clauses contribute no vertices.
Digraph build_clause_gadget(const CnfFormula& psi);

/// S_φ. One level per prefix variable, outermost first; |M| of the innermost
/// level is `innermost_m` and grows by 3 per level outwards. For r = 0 the
/// graph is one vertex if φ is true and a bidirected 2-clique otherwise.
GadgetGraph build_s_phi(const QbfFormula& phi, int innermost_m = 4);

/// The same for a CNF read with an all-universal prefix.
GadgetGraph build_h_phi(const CnfFormula& psi, int innermost_m = 4);

/// |N(outermost)| + 1, or 1 for r = 0.
int predicted_cops(const QbfFormula& phi, int innermost_m = 4);

/// Cops on A(l') and the chosen b of every level l' outside levels[level];
/// bits[i] picks b_0 or b_1 of levels[i].
struct LevelBlockade {
  std::size_t level = 0;
  std::vector<int> bits;
  VertexSet blocked;
};
LevelBlockade level_blockade(const GadgetGraph& gg, std::size_t level, const std::vector<int>& bits);

/// Existential choice: value of the next prefix variable given the earlier ones.
using ValueChoice = std::function<bool(const std::vector<bool>&)>;

/// The level-by-level cop script. At an existential level the cops steer the
/// robber so that b_0 ends up held when `exists` returns true and b_1
/// otherwise; at a universal level they answer the robber's C_i with b_i. In
/// the clause gadget the free cop takes the hub and then clause vertices whose
/// occupation frees a b-cop.
std::shared_ptr<CopStrategy> scripted_cops(const QbfFormula& phi, const GadgetGraph& gg, ValueChoice exists, int k);

/// The robber script: stays in N(l) until it is full, then enters C_0 when
/// `forall` returns true and C_1 otherwise (any C_i at existential levels),
/// leaves for the next level, and in the clause gadget enters a clause all of
/// whose literal vertices point at held b vertices.
std::shared_ptr<RobberStrategy> scripted_robber(const QbfFormula& phi, const GadgetGraph& gg, ValueChoice forall);

/// Cops that play the existential strategy of `mc` on `gg`; refuses (throws
/// InputError) when `mc` is not an existential win.
std::shared_ptr<CopStrategy> cop_strategy_from_exists(const QbfFormula& phi, const GadgetGraph& gg,
                                                      const QbfResult& mc, int k);

/// Robber that plays the universal strategy of `mc` on `gg`; refuses when
/// `mc` is not a universal win.
std::shared_ptr<RobberStrategy> robber_strategy_from_forall(const QbfFormula& phi, const GadgetGraph& gg,
                                                            const QbfResult& mc);

/// Valuation recorded by the b-cops of `cops` (in prefix order; a missing b
/// reads as false). A cop on b_0 means the variable is true.
std::vector<bool> recorded_values(const GadgetGraph& gg, const VertexSet& cops);

struct ReductionOptions {
  int innermost_m = 4;
  /// Full solves at k* and k*-1 and the script against an exhaustive
  /// opponent; otherwise only script-versus-script plays.
  bool full_solve = true;
  std::uint64_t max_positions = 20'000'000;
};

struct ReductionReport {
  bool truth = false;
  int k_star = 0;
  std::optional<bool> cops_win;           // solver at k*
  std::optional<bool> robber_wins_below;  // solver at k*-1
  std::optional<bool> script_vs_exhaustive;  // premise holder's script vs every opponent move
  bool script_vs_scripts = false;            // ... vs the opposing script under every choice function
  int scripted_plays = 0;
  std::string script;  // which side's script was checked
  bool agrees = false;
  bool verified = true;  // false when a budget stopped the solver
  std::string note;
  std::optional<PlayRecord> play;  // scripted play or counterexample

  nlohmann::json to_json(const Digraph& g) const;
  std::string to_text() const;
};

ReductionReport verify_reduction(const QbfFormula& phi, const ReductionOptions& opts = {});
/// Same checks on a given (possibly altered) graph.
ReductionReport verify_reduction_on(const QbfFormula& phi, const GadgetGraph& gg, const ReductionOptions& opts);

}  // namespace dwlab
