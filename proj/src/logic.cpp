#include "dwlab/logic.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "dwlab/errors.hpp"

namespace dwlab {

void CnfFormula::check() const {
  if (num_vars < 0) throw InputError("negative variable count");
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    std::set<int> seen;
    for (const Literal& l : clauses[c]) {
      if (l.var < 1 || l.var > num_vars)
        throw InputError("clause " + std::to_string(c + 1) + " uses variable " + std::to_string(l.var) +
                         " outside 1.." + std::to_string(num_vars));
      if (!seen.insert(l.var).second)
        throw InputError("restriction violated: variable " + std::to_string(l.var) + " appears twice in clause " +
                         std::to_string(c + 1));
    }
  }
}

bool CnfFormula::clause_satisfied(const Clause& c, const Valuation& beta) {
  for (const Literal& l : c)
    if (beta[l.var] == l.positive) return true;
  return false;
}

bool CnfFormula::satisfied_by(const Valuation& beta) const {
  for (const Clause& c : clauses)
    if (!clause_satisfied(c, beta)) return false;
  return true;
}

std::string CnfFormula::to_dimacs() const {
  std::ostringstream os;
  os << "p cnf " << num_vars << ' ' << clauses.size() << '\n';
  for (const Clause& c : clauses) {
    for (const Literal& l : c) os << (l.positive ? l.var : -l.var) << ' ';
    os << "0\n";
  }
  return os.str();
}

std::string CnfFormula::to_string() const {
  if (clauses.empty()) return "true";
  std::string s;
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    if (c) s += " & ";
    s += '(';
    if (clauses[c].empty()) s += "false";
    for (std::size_t i = 0; i < clauses[c].size(); ++i) {
      if (i) s += " | ";
      if (!clauses[c][i].positive) s += '~';
      s += "X" + std::to_string(clauses[c][i].var);
    }
    s += ')';
  }
  return s;
}

void QbfFormula::check() const {
  matrix.check();
  std::set<int> bound;
  for (const auto& [q, v] : prefix) {
    if (v < 1 || v > matrix.num_vars) throw InputError("prefix variable " + std::to_string(v) + " out of range");
    if (!bound.insert(v).second) throw InputError("variable " + std::to_string(v) + " is quantified twice");
  }
  if (static_cast<int>(bound.size()) != matrix.num_vars) throw InputError("prefix does not bind every variable");
}

std::string QbfFormula::to_qdimacs() const {
  std::ostringstream os;
  os << "p cnf " << matrix.num_vars << ' ' << matrix.clauses.size() << '\n';
  for (std::size_t i = 0; i < prefix.size();) {
    Quantifier q = prefix[i].first;
    os << (q == Quantifier::Exists ? 'e' : 'a');
    for (; i < prefix.size() && prefix[i].first == q; ++i) os << ' ' << prefix[i].second;
    os << " 0\n";
  }
  std::string body = matrix.to_dimacs();
  os << body.substr(body.find('\n') + 1);
  return os.str();
}

std::string QbfFormula::to_string() const {
  std::string s;
  for (const auto& [q, v] : prefix) s += (q == Quantifier::Exists ? "E" : "A") + std::string("X") + std::to_string(v) + " ";
  return s + matrix.to_string();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  std::string text;
  int line, column;
};

// Splits into lines of tokens, dropping comment lines.
std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  int line = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(pos, end - pos);
    std::vector<Token> toks;
    for (std::size_t i = 0; i < l.size();) {
      if (std::isspace(static_cast<unsigned char>(l[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < l.size() && !std::isspace(static_cast<unsigned char>(l[j]))) ++j;
      toks.push_back({std::string(l.substr(i, j - i)), line, static_cast<int>(i) + 1});
      i = j;
    }
    if (!toks.empty() && toks[0].text != "c" && toks[0].text[0] != 'c') lines.push_back(std::move(toks));
    pos = end + 1;
    ++line;
  }
  return lines;
}

int to_int(const Token& t) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.text.size() || used == 0) throw ParseError("expected an integer, got \"" + t.text + "\"", t.line, t.column);
  if (v > 1'000'000 || v < -1'000'000) throw ParseError("integer out of range", t.line, t.column);
  return static_cast<int>(v);
}

struct Parsed {
  CnfFormula cnf;
  std::vector<std::pair<Quantifier, int>> prefix;
};

Parsed parse(std::string_view text, bool allow_prefix) {
  auto lines = tokenize(text);
  if (lines.empty()) throw ParseError("missing \"p cnf\" header", 1, 1);
  const auto& header = lines[0];
  if (header.size() != 4 || header[0].text != "p" || header[1].text != "cnf")
    throw ParseError("expected \"p cnf <vars> <clauses>\"", header[0].line, header[0].column);
  Parsed out;
  out.cnf.num_vars = to_int(header[2]);
  int declared = to_int(header[3]);
  if (out.cnf.num_vars < 0 || declared < 0) throw ParseError("negative count in header", header[0].line, 1);

  std::set<int> bound;
  std::size_t li = 1;
  bool prefix_done = !allow_prefix;
  Clause cur;
  std::set<int> cur_vars;
  const Token* last = &header.back();
  for (; li < lines.size(); ++li) {
    const auto& toks = lines[li];
    if (!prefix_done && (toks[0].text == "a" || toks[0].text == "e")) {
      Quantifier q = toks[0].text == "a" ? Quantifier::Forall : Quantifier::Exists;
      if (toks.size() < 2 || toks.back().text != "0")
        throw ParseError("quantifier line must end with 0", toks[0].line, toks[0].column);
      for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
        int v = to_int(toks[i]);
        if (v < 1 || v > out.cnf.num_vars)
          throw ParseError("quantified variable " + toks[i].text + " out of range", toks[i].line, toks[i].column);
        if (!bound.insert(v).second)
          throw ParseError("variable " + toks[i].text + " is quantified twice", toks[i].line, toks[i].column);
        out.prefix.emplace_back(q, v);
      }
      continue;
    }
    prefix_done = true;
    if (toks[0].text == "a" || toks[0].text == "e" || toks[0].text == "p")
      throw ParseError("unexpected \"" + toks[0].text + "\" line", toks[0].line, toks[0].column);
    for (const Token& t : toks) {
      last = &t;
      if (t.text == "%") goto done;  // SATLIB end marker
      int lit = to_int(t);
      if (lit == 0) {
        out.cnf.clauses.push_back(std::move(cur));
        cur.clear();
        cur_vars.clear();
        continue;
      }
      int v = lit < 0 ? -lit : lit;
      if (v > out.cnf.num_vars)
        throw ParseError("variable " + std::to_string(v) + " exceeds the declared " + std::to_string(out.cnf.num_vars),
                         t.line, t.column);
      if (!cur_vars.insert(v).second)
        throw ParseError("restriction violated: variable " + std::to_string(v) + " appears twice in a clause", t.line,
                         t.column);
      cur.push_back({v, lit > 0});
    }
  }
done:
  if (!cur.empty()) throw ParseError("last clause is not terminated by 0", last->line, last->column);
  if (static_cast<int>(out.cnf.clauses.size()) != declared)
    throw ParseError("header declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(out.cnf.clauses.size()),
                     header[0].line, header[0].column);
  if (allow_prefix) {
    std::vector<std::pair<Quantifier, int>> free;
    for (int v = 1; v <= out.cnf.num_vars; ++v)
      if (!bound.count(v)) free.emplace_back(Quantifier::Exists, v);
    out.prefix.insert(out.prefix.begin(), free.begin(), free.end());
  }
  return out;
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text) { return parse(text, false).cnf; }

QbfFormula parse_qdimacs(std::string_view text) {
  Parsed p = parse(text, true);
  return QbfFormula{std::move(p.prefix), std::move(p.cnf)};
}

// ---------------------------------------------------------------------------
// Evaluation

bool is_tautology(const CnfFormula& f) {
  f.check();
  if (f.num_vars > 24) throw BudgetError("truth table limited to 24 variables");
  Valuation beta(static_cast<std::size_t>(f.num_vars) + 1, false);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << f.num_vars); ++m) {
    for (int v = 1; v <= f.num_vars; ++v) beta[v] = (m >> (v - 1)) & 1u;
    if (!f.satisfied_by(beta)) return false;
  }
  return true;
}

Valuation QbfResult::valuation(const std::vector<bool>& values) const {
  Valuation beta(static_cast<std::size_t>(formula->matrix.num_vars) + 1, false);
  for (std::size_t i = 0; i < values.size() && i < formula->prefix.size(); ++i) beta[formula->prefix[i].second] = values[i];
  return beta;
}

std::optional<bool> QbfResult::value(const std::vector<bool>& values) const {
  auto it = choice.find(values);
  if (it == choice.end()) return std::nullopt;
  return it->second;
}

std::optional<int> QbfResult::falsified_clause(const std::vector<bool>& values) const {
  Valuation beta = valuation(values);
  for (std::size_t c = 0; c < formula->matrix.clauses.size(); ++c)
    if (!CnfFormula::clause_satisfied(formula->matrix.clauses[c], beta)) return static_cast<int>(c);
  return std::nullopt;
}

std::optional<int> QbfResult::true_literal(const std::vector<bool>& values, int clause) const {
  Valuation beta = valuation(values);
  const Clause& c = formula->matrix.clauses.at(static_cast<std::size_t>(clause));
  for (std::size_t i = 0; i < c.size(); ++i)
    if (beta[c[i].var] == c[i].positive) return static_cast<int>(i);
  return std::nullopt;
}

namespace {

// Value of the game from the position after `values` were fixed.
bool game_value(const QbfFormula& f, std::vector<bool>& values, Valuation& beta) {
  std::size_t j = values.size();
  if (j == f.prefix.size()) return f.matrix.satisfied_by(beta);
  bool exists = f.prefix[j].first == Quantifier::Exists;
  for (bool b : {false, true}) {
    values.push_back(b);
    beta[f.prefix[j].second] = b;
    bool v = game_value(f, values, beta);
    values.pop_back();
    if (v == exists) return v;
  }
  return !exists;
}

void record(const QbfFormula& f, bool winner_exists, std::vector<bool>& values, Valuation& beta, QbfResult& out) {
  std::size_t j = values.size();
  if (j == f.prefix.size()) return;
  bool mine = (f.prefix[j].first == Quantifier::Exists) == winner_exists;
  for (bool b : {false, true}) {
    values.push_back(b);
    beta[f.prefix[j].second] = b;
    bool good = !mine || game_value(f, values, beta) == winner_exists;
    if (good) {
      if (mine) {
        std::vector<bool> key(values.begin(), values.end() - 1);
        out.choice[key] = b;
      }
      record(f, winner_exists, values, beta, out);
    }
    values.pop_back();
    if (good && mine) return;
  }
}

}  // namespace

QbfResult qbf_eval(const QbfFormula& f, int max_vars) {
  f.check();
  if (f.r() > max_vars) throw BudgetError("QBF evaluation limited to " + std::to_string(max_vars) + " variables");
  QbfResult out;
  out.formula = &f;
  std::vector<bool> values;
  Valuation beta(static_cast<std::size_t>(f.matrix.num_vars) + 1, false);
  out.truth = game_value(f, values, beta);
  record(f, out.truth, values, beta, out);
  return out;
}

bool qbf_truth_table(const QbfFormula& f, int max_vars) {
  f.check();
  int r = f.r();
  if (r > max_vars) throw BudgetError("truth table limited to " + std::to_string(max_vars) + " variables");
  // Bit i of an index is the value of the i-th prefix variable.
  std::vector<char> table(std::size_t{1} << r);
  Valuation beta(static_cast<std::size_t>(f.matrix.num_vars) + 1, false);
  for (std::size_t m = 0; m < table.size(); ++m) {
    for (int i = 0; i < r; ++i) beta[f.prefix[i].second] = (m >> i) & 1u;
    table[m] = f.matrix.satisfied_by(beta);
  }
  for (int i = r - 1; i >= 0; --i) {
    bool exists = f.prefix[i].first == Quantifier::Exists;
    std::size_t half = std::size_t{1} << i;
    for (std::size_t m = 0; m < half; ++m)
      table[m] = exists ? (table[m] || table[m | half]) : (table[m] && table[m | half]);
  }
  return table[0];
}

}  // namespace dwlab
