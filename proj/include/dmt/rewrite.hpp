#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dmt/syntax.hpp"

namespace dmt::rewrite {

enum class RuleKind { TermRule, PropRule };

/// Positive rules fire at positive atom occurrences (goal side), negative
/// rules at negative ones (hypothesis side). Term rules are always
/// unpolarized: polarity is a propositional notion.
enum class RulePolarity { Unpolarized, PositiveOnly, NegativeOnly };

bool admits(RulePolarity rp, Polarity at);

/// Oriented rewrite rule. Term rules map Term -> Term; proposition rules map
/// an atomic pattern to an arbitrary proposition. Exactly one of the
/// (term_lhs, term_rhs) / (atom_lhs, prop_rhs) pairs is populated.
struct RewriteRule {
  std::string name;
  RuleKind kind;
  RulePolarity polarity = RulePolarity::Unpolarized;
  TermPtr term_lhs, term_rhs;
  PropPtr atom_lhs, prop_rhs;

  static RewriteRule term_rule(std::string name, TermPtr lhs, TermPtr rhs);
  static RewriteRule prop_rule(std::string name, PropPtr lhs, PropPtr rhs,
                               RulePolarity pol = RulePolarity::Unpolarized);
};

struct Theory {
  std::string name;
  Signature signature;
  std::vector<RewriteRule> rules;

  bool polarized() const;
};

/// First-order matching: pattern variables are the only variables bound; the
/// subject is taken as-is (its variables behave like constants).
std::optional<Subst> match(const TermPtr& pattern, const TermPtr& subject);
std::optional<Subst> match(const PropPtr& atom_pattern, const PropPtr& atom_subject);

/// Result of a fuel-bounded computation; an empty value means the fuel ran
/// out before an answer was reached.
template <typename T>
struct Bounded {
  std::optional<T> value;
  long long steps = 0;

  bool exhausted() const { return !value.has_value(); }
};

/// All one-step reducts of the subject, deduplicated up to alpha.
/// Proposition rules respect occurrence polarity relative to `base`; term
/// positions inside atoms carry no polarity restriction.
std::vector<PropPtr> reduce_once(const PropPtr& p, const Theory& th, Polarity base);
std::vector<TermPtr> reduce_once(const TermPtr& t, const Theory& th);

/// Proposition-rule rewrites available at one atom (used directly by clause
/// rewriting, where literals are atoms).
struct AtomRewrite {
  const RewriteRule* rule;
  PropPtr result;
  Subst match;
};
std::vector<AtomRewrite> atom_rewrites(const PropPtr& atom, Polarity pol,
                                       const Theory& th);

/// Leftmost-outermost normalization, first matching rule in declaration
/// order. Exhausts after `fuel` rewrite steps.
Bounded<PropPtr> normalize(const PropPtr& p, const Theory& th, Polarity base,
                           long long fuel);
Bounded<TermPtr> normalize(const TermPtr& t, const Theory& th, long long fuel);

/// Reduces at the root only, until the root is a connective, a quantifier,
/// or an irreducible atom. Term positions inside the root atom count as root
/// positions here: they can unblock a head rule.
Bounded<PropPtr> whnf(const PropPtr& p, const Theory& th, Polarity base,
                      long long fuel);

/// The congruence test behind the deduction rules. Unpolarized theories
/// compare normal forms; if normalization does not terminate within fuel, or
/// the theory is polarized, a bounded breadth-first search for a common
/// reduct decides instead (hypothesis side reduces negatively, goal side
/// positively).
Bounded<bool> congruent(const PropPtr& a, const PropPtr& b, const Theory& th,
                        long long fuel);
Bounded<bool> congruent(const TermPtr& a, const TermPtr& b, const Theory& th,
                        long long fuel);

/// True iff the two terms have a common reduct within fuel.
Bounded<bool> joinable(const TermPtr& t, const TermPtr& u, const Theory& th,
                       long long fuel);

/// Every rule invariant plus signature consistency; empty means well-formed.
std::vector<std::string> validate_theory(const Theory& th);

// --- theory files (.dmt) ---

Theory parse_theory(const std::string& text);
Theory load_theory_file(const std::string& path);
std::string print_theory(const Theory& th);
Theory merge_theories(const std::vector<Theory>& parts);

}  // namespace dmt::rewrite
