#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dmt {

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// First-order term: a variable or a function symbol applied to arguments.
/// Constants are 0-ary applications. Values are immutable and freely shared.
struct Term {
  enum class Kind { Var, App };

  Kind kind;
  std::string name;           // variable name or function symbol
  std::vector<TermPtr> args;  // empty for variables

  static TermPtr var(std::string name);
  static TermPtr app(std::string fn, std::vector<TermPtr> args = {});
};

bool term_eq(const TermPtr& a, const TermPtr& b);

/// Decimal literals are sugar for towers of S over 0.
TermPtr numeral(unsigned long long n);
std::optional<unsigned long long> as_numeral(const TermPtr& t);

// ---------------------------------------------------------------------------
// Propositions
// ---------------------------------------------------------------------------

struct Prop;
using PropPtr = std::shared_ptr<const Prop>;

/// Proposition tree. There is no negation node: ~A is surface sugar for
/// A => false.
struct Prop {
  enum class Kind { Atom, Top, Bottom, And, Or, Implies, Forall, Exists };

  Kind kind;
  std::string name;           // Atom: predicate symbol; Forall/Exists: bound variable
  std::vector<TermPtr> args;  // Atom arguments
  PropPtr lhs, rhs;           // binary connectives; quantifiers keep the body in rhs

  static PropPtr atom(std::string pred, std::vector<TermPtr> args = {});
  static PropPtr top();
  static PropPtr bottom();
  static PropPtr conj(PropPtr a, PropPtr b);
  static PropPtr disj(PropPtr a, PropPtr b);
  static PropPtr implies(PropPtr a, PropPtr b);
  static PropPtr neg(PropPtr a);  // a => false
  static PropPtr forall(std::string x, PropPtr body);
  static PropPtr exists(std::string x, PropPtr body);

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_quant() const { return kind == Kind::Forall || kind == Kind::Exists; }
};

/// Syntactic equality (bound-variable names matter; see alpha_eq otherwise).
bool prop_eq(const PropPtr& a, const PropPtr& b);

// ---------------------------------------------------------------------------
// Polarity of occurrences
// ---------------------------------------------------------------------------

/// Flips exactly when passing to the left argument of an implication.
enum class Polarity { Positive, Negative };

Polarity flip(Polarity p);

/// Tree path: child index per node. And/Or/Implies children are 0 and 1,
/// quantifier bodies are 0, atom argument i is i.
using Path = std::vector<int>;

struct AtomOccurrence {
  Path path;
  PropPtr atom;
  Polarity polarity;
};

std::vector<AtomOccurrence> atom_occurrences(const PropPtr& p, Polarity base);

// ---------------------------------------------------------------------------
// Contexts
// ---------------------------------------------------------------------------

/// Ordered list of named hypotheses. Construction from user input rejects
/// duplicate names; `extended` permits shadowing (innermost binding wins),
/// which is what proof-term binders need.
class Context {
 public:
  using Entry = std::pair<std::string, PropPtr>;

  Context() = default;
  explicit Context(std::vector<Entry> entries);

  Context extended(const std::string& name, PropPtr p) const;
  const PropPtr* lookup(const std::string& name) const;
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Substitutions
// ---------------------------------------------------------------------------

/// Finite map from variable names to terms. Application to propositions is
/// capture-avoiding: bound variables are renamed on demand.
class Subst {
 public:
  Subst() = default;
  static Subst single(const std::string& v, TermPtr t);

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const TermPtr* lookup(const std::string& v) const;
  void bind(const std::string& v, TermPtr t);
  void erase(const std::string& v) { map_.erase(v); }

  /// Extends with v -> t after applying {v -> t} to every existing range
  /// term (the step unification uses to stay idempotent).
  void compose_bind(const std::string& v, const TermPtr& t);

  TermPtr apply(const TermPtr& t) const;
  PropPtr apply(const PropPtr& p) const;

  const std::map<std::string, TermPtr>& mapping() const { return map_; }

 private:
  std::map<std::string, TermPtr> map_;
};

std::set<std::string> free_vars(const TermPtr& t);
std::set<std::string> free_vars(const PropPtr& p);
std::set<std::string> free_vars(const Context& ctx);

bool alpha_eq(const TermPtr& a, const TermPtr& b);  // terms have no binders
bool alpha_eq(const PropPtr& a, const PropPtr& b);

/// alpha_eq under an outer pairing of variables: vars paired in `outer`
/// are treated as identical.
bool alpha_eq_open(const PropPtr& a, const PropPtr& b,
                   const std::vector<std::pair<std::string, std::string>>& outer);
bool alpha_eq_open(const TermPtr& a, const TermPtr& b,
                   const std::vector<std::pair<std::string, std::string>>& outer);

/// A name based on `base` (primes appended) that is not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

// ---------------------------------------------------------------------------
// Signatures and concrete syntax
// ---------------------------------------------------------------------------

struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line, int col);
  int line;
  int col;
};

struct InfixDecl {
  enum class Assoc { Left, Right, None };
  std::string name;
  int prec = 0;
  Assoc assoc = Assoc::None;
};

/// Function and predicate symbols with fixed arities, plus infix
/// declarations for term-level operators. The numeral sugar makes `0` (0-ary)
/// and `S` (1-ary) implicitly known unless a theory redeclares them.
struct Signature {
  std::map<std::string, int> funs;
  std::map<std::string, int> preds;
  std::map<std::string, InfixDecl> infixes;

  std::optional<int> fun_arity(const std::string& f) const;
  std::optional<int> pred_arity(const std::string& p) const;
  const InfixDecl* infix(const std::string& op) const;

  void declare_fun(const std::string& f, int arity);
  void declare_pred(const std::string& p, int arity);
  void declare_infix(InfixDecl d);
  void merge(const Signature& other);
};

struct ParseOptions {
  /// Strict parses reject symbols absent from the signature (theory and
  /// axiom files); lenient parses infer them, holding arities consistent
  /// within the call (ad-hoc command-line expressions).
  bool strict = false;
};

TermPtr parse_term(const std::string& text, const Signature& sig,
                   ParseOptions opts = {});
PropPtr parse_prop(const std::string& text, const Signature& sig,
                   ParseOptions opts = {});

/// Parses text that is either a term or an atomic proposition, decided by
/// the head symbol (rewrite-rule left-hand sides). Exactly one result is
/// non-null.
std::pair<TermPtr, PropPtr> parse_term_or_atom(const std::string& text,
                                               const Signature& sig,
                                               ParseOptions opts = {});

std::string print_term(const TermPtr& t, const Signature& sig);
std::string print_prop(const PropPtr& p, const Signature& sig);

}  // namespace dmt
