#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmt/rewrite.hpp"

namespace dmt::resolution {

struct Literal {
  bool positive;
  PropPtr atom;
};

bool literal_eq(const Literal& a, const Literal& b);

/// How a clause entered the derivation. Parent ids index the saturation
/// state's step list; a resolution partner that is a one-way clause is
/// recorded by rule name instead of id.
struct Provenance {
  enum class Kind { Input, Resolvent, Rewrite, Factor };

  Kind kind = Kind::Input;
  int parent1 = -1;
  int parent2 = -1;
  std::string one_way_rule;  // resolvent against a one-way clause
  std::string rewrite_rule;  // rewrite step
  int lit1 = -1, lit2 = -1;
  Subst mgu;   // substitution for the first parent (rewrite: the rule match)
  Subst mgu2;  // for the second parent, composed with its renaming apart
};

struct Clause {
  std::vector<Literal> literals;
  Provenance prov;

  bool empty() const { return literals.empty(); }
};

bool clause_eq(const Clause& a, const Clause& b);  // literal-wise, syntactic

/// A polarized rewrite rule seen as a clause usable only through its
/// selected literal (the rule's left-hand side) and never against another
/// one-way clause.
struct OneWayClause {
  Clause clause;
  std::size_t selected;
  std::string origin;  // rule name
  rewrite::RulePolarity polarity;
};

struct NonClausalRule : InputError {
  using InputError::InputError;
};

/// Fresh Skolem symbols, sk0, sk1, ...
struct SkolemSource {
  int next = 0;
  std::string fresh() { return "sk" + std::to_string(next++); }
};

/// Negation normal form, Skolemization of existentials, distribution to
/// conjunctive normal form. Free variables are read as universal.
std::vector<Clause> clausify(const PropPtr& p);
std::vector<Clause> clausify(const PropPtr& p, SkolemSource& sk);

/// NegativeOnly P -->- A1|...|An becomes [~P, A1, ..., An] with ~P selected;
/// PositiveOnly P -->+ A1&...&An becomes [P, ~A1, ..., ~An] with P selected.
/// Term rules and unpolarized rules contribute nothing (they act by
/// rewriting). Throws NonClausalRule for other right-hand sides.
std::vector<OneWayClause> compile_one_way(const rewrite::Theory& th);

struct UnifyResult {
  std::optional<Subst> mgu;
  std::string reason;  // "clash" / "occurs check" detail on failure
};

/// Syntactic first-order unification with occurs check.
UnifyResult unify(const PropPtr& a, const PropPtr& b);
UnifyResult unify(const TermPtr& a, const TermPtr& b);

/// A resolution operand: an ordinary clause, or a one-way clause whose use
/// is restricted to its selected literal.
struct ClauseRef {
  const Clause* clause = nullptr;
  const OneWayClause* one_way = nullptr;

  ClauseRef(const Clause& c) : clause(&c) {}
  ClauseRef(const OneWayClause& ow) : clause(&ow.clause), one_way(&ow) {}
};

struct ResolveOutcome {
  enum class Status { Resolved, Blocked, NotUnifiable };

  Status status;
  std::string reason;
  std::optional<Clause> clause;
};

/// Binary resolution on literals i of c1 and j of c2 (renamed apart).
/// Blocked when both operands are one-way clauses or a one-way operand is
/// used off its selected literal.
ResolveOutcome resolve(ClauseRef c1, std::size_t i, ClauseRef c2, std::size_t j);

/// Factoring: merges literal j into literal i under their mgu.
std::optional<Clause> factor(const Clause& c, std::size_t i, std::size_t j);

struct RewriteClauseResult {
  std::vector<Clause> clauses;
  bool exhausted = false;
  bool changed = false;
};

/// Normalizes a clause by the theory: term rules rewrite inside literals;
/// proposition rules apply with the clause read as a hypothesis, so positive
/// literals take negative-polarity rules and negative literals positive ones.
/// A rule application whose spliced right-hand side is non-clausal is
/// re-clausified, so one input clause can produce several.
RewriteClauseResult rewrite_clause(const Clause& c, const rewrite::Theory& th,
                                   long long fuel);
RewriteClauseResult rewrite_clause(const Clause& c, const rewrite::Theory& th,
                                   long long fuel, SkolemSource& sk);

struct Limits {
  long long max_clauses = 50000;
  long long fuel = 10000;
  int max_depth = 0;  // 0: unlimited
};

struct RefuteResult {
  enum class Status { Refutation, Saturated, ResourceOut };

  Status status = Status::Saturated;
  std::vector<Clause> steps;      // every recorded clause; ids index here
  std::vector<int> derivation;    // ancestor ids of the empty clause, ascending
  std::vector<OneWayClause> one_way;
  long long generated = 0;        // clauses beyond the inputs
  std::string resource;           // limit that ended the search
};

/// Given-clause saturation with the one-way restrictions: lightest clause
/// first (literal count, then symbol count, then FIFO), rewrite-normalized
/// before use, resolved against processed clauses and one-way clauses,
/// factored; tautologies and exact variants are discarded.
RefuteResult refute(const rewrite::Theory& th, const std::vector<Clause>& input,
                    const Limits& limits);

// --- problem files (.dmc) ---

struct Problem {
  std::string name;
  Signature signature;            // theory signature plus local declarations
  std::vector<Clause> clauses;    // includes negated, clausified goals
};

Problem parse_problem(const std::string& text, const Signature& theory_sig);
Problem load_problem_file(const std::string& path, const Signature& theory_sig);

std::string print_literal(const Literal& l, const Signature& sig);
std::string print_clause(const Clause& c, const Signature& sig);
std::string print_subst(const Subst& s, const Signature& sig);
std::string print_steps(const RefuteResult& r, const Signature& sig);

}  // namespace dmt::resolution
