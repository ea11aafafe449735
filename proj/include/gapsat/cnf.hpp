#pragma once

// Formula representation, DIMACS I/O, assignment semantics and the
// resolution rule. Everything else in gapsat is built on these types.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <iterator>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gapsat {

using Var = std::uint32_t;

/// A variable (1-based) with a polarity, packed as 2*var + negative.
/// The packing makes the natural order "by variable, positive first", which
/// is the canonical clause order.
class Lit {
public:
  constexpr Lit() = default;
  constexpr Lit(Var var, bool negative) : code_(2 * var + (negative ? 1U : 0U)) {}

  static Lit from_dimacs(long value) {
    if (value == 0)
      throw std::invalid_argument("literal 0 is a clause terminator");
    return {static_cast<Var>(value < 0 ? -value : value), value < 0};
  }
  static constexpr Lit from_code(std::uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negative() const { return (code_ & 1U) != 0; }
  constexpr bool positive() const { return !negative(); }
  constexpr std::uint32_t code() const { return code_; }
  constexpr Lit operator~() const { return from_code(code_ ^ 1U); }
  long to_dimacs() const { return negative() ? -static_cast<long>(var()) : static_cast<long>(var()); }

  constexpr auto operator<=>(const Lit&) const = default;

private:
  std::uint32_t code_ = 0;
};

using Clause = std::vector<Lit>;

/// Sort by variable and drop repeated literals. Returns true when the clause
/// contains a complementary pair.
inline bool normalize_clause(Clause& clause) {
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i)
    if (clause[i].var() == clause[i - 1].var())
      return true;
  return false;
}

inline bool is_tautology(const Clause& clause) {
  for (std::size_t i = 1; i < clause.size(); ++i)
    if (clause[i].var() == clause[i - 1].var())
      return true;
  return false;
}

inline Clause clause_from_dimacs(std::initializer_list<long> lits) {
  Clause c;
  for (long v : lits)
    c.push_back(Lit::from_dimacs(v));
  normalize_clause(c);
  return c;
}

inline std::string to_string(const Clause& clause) {
  std::string s = "(";
  for (std::size_t i = 0; i < clause.size(); ++i) {
    if (i)
      s += " ";
    s += std::to_string(clause[i].to_dimacs());
  }
  return s + ")";
}

/// Complete truth assignment over variables 1..n.
class Assignment {
public:
  Assignment() = default;
  explicit Assignment(Var numVars, bool initial = false) : values_(numVars + 1, initial ? 1 : 0) {}

  Var num_vars() const { return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1); }
  bool value(Var v) const { return values_[v] != 0; }
  void set(Var v, bool value) { values_[v] = value ? 1 : 0; }
  void flip(Var v) { values_[v] ^= 1; }
  bool satisfies(Lit l) const { return (values_[l.var()] != 0) != l.negative(); }

  /// The literal over v that this assignment makes true.
  Lit true_literal(Var v) const { return Lit(v, !value(v)); }

  bool operator==(const Assignment&) const = default;

private:
  std::vector<std::uint8_t> values_;
};

inline bool eval_clause(const Clause& clause, const Assignment& alpha) {
  return std::any_of(clause.begin(), clause.end(), [&](Lit l) { return alpha.satisfies(l); });
}

inline std::size_t count_satisfied_literals(const Clause& clause, const Assignment& alpha) {
  return static_cast<std::size_t>(
      std::count_if(clause.begin(), clause.end(), [&](Lit l) { return alpha.satisfies(l); }));
}

/// Immutable CNF formula over variables 1..n with a literal occurrence index.
class Formula {
public:
  Formula() = default;

  /// Clauses are normalized on construction. Tautologies are kept and flagged.
  Formula(Var numVars, std::vector<Clause> clauses) : numVars_(numVars), clauses_(std::move(clauses)) {
    tautology_.resize(clauses_.size(), false);
    occurrences_.resize(2 * static_cast<std::size_t>(numVars_) + 2);
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      Clause& c = clauses_[i];
      tautology_[i] = normalize_clause(c);
      for (Lit l : c) {
        if (l.var() == 0 || l.var() > numVars_)
          throw std::out_of_range("literal " + std::to_string(l.to_dimacs()) + " outside 1.." +
                                  std::to_string(numVars_));
        occurrences_[l.code()].push_back(static_cast<std::uint32_t>(i));
      }
      maxWidth_ = std::max(maxWidth_, c.size());
    }
  }

  Var num_vars() const { return numVars_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const Clause& clause(std::size_t i) const { return clauses_[i]; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  bool is_tautology(std::size_t i) const { return tautology_[i]; }

  std::span<const std::uint32_t> occurrences(Lit l) const { return occurrences_[l.code()]; }

  /// Largest clause length; 0 for a formula without clauses.
  std::size_t max_width_or_zero() const { return maxWidth_; }

  bool satisfied_by(const Assignment& alpha) const {
    return std::all_of(clauses_.begin(), clauses_.end(),
                       [&](const Clause& c) { return eval_clause(c, alpha); });
  }

private:
  Var numVars_ = 0;
  std::vector<Clause> clauses_;
  std::vector<bool> tautology_;
  std::vector<std::vector<std::uint32_t>> occurrences_;
  std::size_t maxWidth_ = 0;
};

inline std::size_t max_clause_width(const Formula& formula) {
  if (formula.num_clauses() == 0)
    throw std::invalid_argument("max_clause_width of a formula without clauses");
  return formula.max_width_or_zero();
}

/// Clause sets compared as sorted multisets of canonical clauses.
inline std::vector<Clause> sorted_clauses(const Formula& formula) {
  std::vector<Clause> out = formula.clauses();
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Resolution

/// Resolve a and b on pivot. Returns nullopt if the resolvent is tautological.
/// Both inputs must be canonical.
inline std::optional<Clause> resolve(const Clause& a, const Clause& b, Var pivot) {
  auto polarity = [pivot](const Clause& c) -> int {
    for (Lit l : c)
      if (l.var() == pivot)
        return l.negative() ? -1 : 1;
    return 0;
  };
  const int pa = polarity(a), pb = polarity(b);
  if (pa == 0 || pb == 0 || pa == pb)
    throw std::invalid_argument("pivot " + std::to_string(pivot) + " does not clash between " +
                                to_string(a) + " and " + to_string(b));

  Clause out;
  out.reserve(a.size() + b.size() - 2);
  auto ia = a.begin(), ib = b.begin();
  auto push = [&](Lit l) {
    if (l.var() == pivot)
      return;
    if (!out.empty() && out.back() == l)
      return;
    out.push_back(l);
  };
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && *ia < *ib))
      push(*ia++);
    else
      push(*ib++);
  }
  if (is_tautology(out))
    return std::nullopt;
  return out;
}

/// The variable on which a and b clash, if they clash on exactly one.
inline std::optional<Var> unique_clash(const Clause& a, const Clause& b) {
  std::optional<Var> pivot;
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->var() < ib->var()) {
      ++ia;
    } else if (ib->var() < ia->var()) {
      ++ib;
    } else {
      if (*ia != *ib) {
        if (pivot)
          return std::nullopt;
        pivot = ia->var();
      }
      ++ia;
      ++ib;
    }
  }
  return pivot;
}

// ---------------------------------------------------------------------------
// DIMACS

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Parse DIMACS CNF. A header/body clause-count mismatch is not an error: the
/// actual count is used and a message is appended to `warnings` if given.
inline Formula parse_dimacs(std::istream& in, std::vector<std::string>* warnings = nullptr) {
  std::string line;
  std::size_t lineNo = 0;
  bool haveHeader = false;
  long declaredVars = 0, declaredClauses = 0;
  std::vector<Clause> clauses;
  Clause current;
  bool open = false;

  while (std::getline(in, line)) {
    ++lineNo;
    std::string_view view(line);
    const auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
      continue;
    view.remove_prefix(first);
    if (view.front() == 'c')
      continue;
    if (view.front() == '%') // trailer used by some benchmark archives
      break;
    if (view.front() == 'p') {
      if (haveHeader)
        throw ParseError(lineNo, "duplicate header");
      std::istringstream hs{std::string(view)};
      std::string p, fmt, extra;
      if (!(hs >> p >> fmt >> declaredVars >> declaredClauses) || p != "p" || fmt != "cnf" ||
          declaredVars < 0 || declaredClauses < 0 || (hs >> extra))
        throw ParseError(lineNo, "malformed header '" + std::string(view) + "'");
      haveHeader = true;
      continue;
    }
    if (!haveHeader)
      throw ParseError(lineNo, "clause data before 'p cnf' header");

    const char* p = view.data();
    const char* end = view.data() + view.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r'))
        ++p;
      if (p >= end)
        break;
      char* next = nullptr;
      const long value = std::strtol(p, &next, 10);
      if (next == p)
        throw ParseError(lineNo, "unexpected token '" + std::string(p, end) + "'");
      p = next;
      if (value == 0) {
        if (normalize_clause(current) && warnings)
          warnings->push_back("line " + std::to_string(lineNo) + ": tautological clause kept");
        clauses.push_back(std::move(current));
        current.clear();
        open = false;
        continue;
      }
      if (std::labs(value) > declaredVars)
        throw ParseError(lineNo, "literal " + std::to_string(value) + " exceeds declared " +
                                     std::to_string(declaredVars) + " variables");
      current.push_back(Lit::from_dimacs(value));
      open = true;
    }
  }
  if (!haveHeader)
    throw ParseError(lineNo, "missing 'p cnf' header");
  if (open)
    throw ParseError(lineNo, "last clause is missing its terminating 0");
  if (static_cast<long>(clauses.size()) != declaredClauses && warnings)
    warnings->push_back("header declares " + std::to_string(declaredClauses) + " clauses, found " +
                        std::to_string(clauses.size()));
  return Formula(static_cast<Var>(declaredVars), std::move(clauses));
}

inline Formula parse_dimacs(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in, warnings);
}

inline void write_clause(std::ostream& out, const Clause& clause) {
  for (Lit l : clause)
    out << l.to_dimacs() << ' ';
  out << "0\n";
}

inline std::string emit_dimacs(const Formula& formula, std::span<const std::string> comments = {}) {
  std::ostringstream out;
  for (const auto& c : comments)
    out << "c " << c << '\n';
  out << "p cnf " << formula.num_vars() << ' ' << formula.num_clauses() << '\n';
  for (const auto& c : formula.clauses())
    write_clause(out, c);
  return out.str();
}

/// SAT-competition model line: "v 1 -2 3 0".
inline std::string format_model(const Assignment& alpha) {
  std::ostringstream out;
  out << 'v';
  for (Var v = 1; v <= alpha.num_vars(); ++v)
    out << ' ' << (alpha.value(v) ? "" : "-") << v;
  out << " 0";
  return out.str();
}

/// Read a model from "v ..." lines (or bare literal lists). Variables not
/// mentioned stay false; an out-of-range literal is an error.
inline Assignment parse_model(std::istream& in, Var numVars) {
  Assignment alpha(numVars);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (tok == "v")
        continue;
      if (tok == "c" || tok == "s")
        break;
      char* end = nullptr;
      const long value = std::strtol(tok.c_str(), &end, 10);
      if (*end != '\0')
        throw ParseError(lineNo, "bad model token '" + tok + "'");
      if (value == 0)
        continue;
      if (std::labs(value) > static_cast<long>(numVars))
        throw ParseError(lineNo, "model literal " + tok + " exceeds " + std::to_string(numVars) + " variables");
      alpha.set(static_cast<Var>(std::labs(value)), value > 0);
    }
  }
  return alpha;
}

inline Assignment parse_model(std::string_view text, Var numVars) {
  std::istringstream in{std::string(text)};
  return parse_model(in, numVars);
}

/// Plain clause list (one 0-terminated clause per line, comments allowed).
inline std::vector<Clause> parse_clause_list(std::istream& in) {
  std::vector<Clause> out;
  Clause current;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (tok == "c" || tok == "p")
        break;
      char* end = nullptr;
      const long value = std::strtol(tok.c_str(), &end, 10);
      if (*end != '\0')
        throw ParseError(lineNo, "bad clause token '" + tok + "'");
      if (value == 0) {
        normalize_clause(current);
        out.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(Lit::from_dimacs(value));
      }
    }
  }
  if (!current.empty())
    throw ParseError(lineNo, "last clause is missing its terminating 0");
  return out;
}

} // namespace gapsat
