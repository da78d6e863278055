#pragma once

// Shared test machinery: random syntax generators, the independent oracles
// (arithmetic evaluator, brute-force rewriter, ground truth tables), and the
// proof corpus the invariant suites run over.

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dmt/ndproof.hpp"
#include "dmt/resolution.hpp"
#include "dmt/rewrite.hpp"
#include "dmt/syntax.hpp"
#include "dmt/theories.hpp"

namespace testkit {

using namespace dmt;

inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed);
  return gen;
}

inline int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng()); }

// ---------------------------------------------------------------------------
// Random syntax
// ---------------------------------------------------------------------------

// Signature used by the randomized syntax suites: arith symbols plus a few
// extra functions and predicates, so infix, prefix, quantifiers and numerals
// all appear.
inline const Signature& test_signature() {
  static Signature sig = [] {
    Signature s;
    s.declare_fun("0", 0);
    s.declare_fun("S", 1);
    s.declare_fun("+", 2);
    s.declare_infix({"+", 6, InfixDecl::Assoc::Left});
    s.declare_fun("f", 1);
    s.declare_fun("g", 2);
    s.declare_pred("=", 2);
    s.declare_infix({"=", 4, InfixDecl::Assoc::None});
    s.declare_pred("p", 0);
    s.declare_pred("q", 1);
    s.declare_pred("r", 2);
    return s;
  }();
  return sig;
}

inline const std::vector<std::string>& var_pool() {
  static std::vector<std::string> vs = {"x", "y", "z", "w", "x'"};
  return vs;
}

inline TermPtr gen_term(int depth) {
  if (depth <= 0) {
    switch (pick(3)) {
      case 0: return Term::var(var_pool()[pick((int)var_pool().size())]);
      case 1: return Term::app("0");
      default: return numeral(pick(4));
    }
  }
  switch (pick(6)) {
    case 0: return Term::var(var_pool()[pick((int)var_pool().size())]);
    case 1: return numeral(pick(5));
    case 2: return Term::app("S", {gen_term(depth - 1)});
    case 3: return Term::app("+", {gen_term(depth - 1), gen_term(depth - 1)});
    case 4: return Term::app("f", {gen_term(depth - 1)});
    default: return Term::app("g", {gen_term(depth - 1), gen_term(depth - 1)});
  }
}

inline PropPtr gen_atom(int depth) {
  switch (pick(4)) {
    case 0: return Prop::atom("p");
    case 1: return Prop::atom("q", {gen_term(depth)});
    case 2: return Prop::atom("r", {gen_term(depth), gen_term(depth)});
    default: return Prop::atom("=", {gen_term(depth), gen_term(depth)});
  }
}

inline PropPtr gen_prop(int depth) {
  if (depth <= 0) {
    switch (pick(4)) {
      case 0: return Prop::top();
      case 1: return Prop::bottom();
      default: return gen_atom(0);
    }
  }
  switch (pick(8)) {
    case 0: return gen_atom(depth - 1);
    case 1: return Prop::conj(gen_prop(depth - 1), gen_prop(depth - 1));
    case 2: return Prop::disj(gen_prop(depth - 1), gen_prop(depth - 1));
    case 3: return Prop::implies(gen_prop(depth - 1), gen_prop(depth - 1));
    case 4: return Prop::neg(gen_prop(depth - 1));
    case 5:
      return Prop::forall(var_pool()[pick((int)var_pool().size())],
                          gen_prop(depth - 1));
    case 6:
      return Prop::exists(var_pool()[pick((int)var_pool().size())],
                          gen_prop(depth - 1));
    default: return gen_atom(depth - 1);
  }
}

// Ground terms over {0, S, +} only.
inline TermPtr gen_ground_arith(int depth) {
  if (depth <= 0) return numeral(pick(3));
  switch (pick(3)) {
    case 0: return numeral(pick(4));
    case 1: return Term::app("S", {gen_ground_arith(depth - 1)});
    default:
      return Term::app("+", {gen_ground_arith(depth - 1), gen_ground_arith(depth - 1)});
  }
}

// ---------------------------------------------------------------------------
// Independent arithmetic evaluator (oracle)
// ---------------------------------------------------------------------------

inline std::optional<unsigned long long> eval_arith_term(const TermPtr& t) {
  if (t->kind == Term::Kind::Var) return std::nullopt;
  if (t->name == "0" && t->args.empty()) return 0;
  if (t->name == "S" && t->args.size() == 1) {
    auto v = eval_arith_term(t->args[0]);
    if (!v) return std::nullopt;
    return *v + 1;
  }
  if (t->name == "+" && t->args.size() == 2) {
    auto a = eval_arith_term(t->args[0]);
    auto b = eval_arith_term(t->args[1]);
    if (!a || !b) return std::nullopt;
    return *a + *b;
  }
  return std::nullopt;
}

inline std::optional<bool> eval_arith_prop(const PropPtr& p) {
  switch (p->kind) {
    case Prop::Kind::Atom: {
      if (p->name != "=" || p->args.size() != 2) return std::nullopt;
      auto a = eval_arith_term(p->args[0]);
      auto b = eval_arith_term(p->args[1]);
      if (!a || !b) return std::nullopt;
      return *a == *b;
    }
    case Prop::Kind::Top: return true;
    case Prop::Kind::Bottom: return false;
    case Prop::Kind::And: {
      auto a = eval_arith_prop(p->lhs), b = eval_arith_prop(p->rhs);
      if (!a || !b) return std::nullopt;
      return *a && *b;
    }
    case Prop::Kind::Or: {
      auto a = eval_arith_prop(p->lhs), b = eval_arith_prop(p->rhs);
      if (!a || !b) return std::nullopt;
      return *a || *b;
    }
    case Prop::Kind::Implies: {
      auto a = eval_arith_prop(p->lhs), b = eval_arith_prop(p->rhs);
      if (!a || !b) return std::nullopt;
      return !*a || *b;
    }
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Brute-force rewriter for the two addition rules (oracle)
// ---------------------------------------------------------------------------

// One-step reducts under 0+y --> y and S(x)+y --> S(x+y), written directly
// against the term structure so it shares nothing with the engine.
inline void bf_reducts(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->kind == Term::Kind::App && t->name == "+" && t->args.size() == 2) {
    const TermPtr& l = t->args[0];
    if (l->kind == Term::Kind::App && l->name == "0" && l->args.empty())
      out.push_back(t->args[1]);
    if (l->kind == Term::Kind::App && l->name == "S" && l->args.size() == 1)
      out.push_back(
          Term::app("S", {Term::app("+", {l->args[0], t->args[1]})}));
  }
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    std::vector<TermPtr> inner;
    bf_reducts(t->args[i], inner);
    for (const auto& a : inner) {
      auto args = t->args;
      args[i] = a;
      out.push_back(Term::app(t->name, std::move(args)));
    }
  }
}

inline std::string term_key(const TermPtr& t) {
  std::string s = t->name;
  if (t->kind == Term::Kind::Var) return "$" + s;
  s += "(";
  for (const auto& a : t->args) s += term_key(a) + ",";
  return s + ")";
}

// All terms reachable by any reduction sequence.
inline std::set<std::string> bf_closure(const TermPtr& t) {
  std::set<std::string> seen{term_key(t)};
  std::vector<TermPtr> front{t};
  while (!front.empty()) {
    std::vector<TermPtr> next;
    for (const auto& x : front) {
      std::vector<TermPtr> red;
      bf_reducts(x, red);
      for (const auto& r : red)
        if (seen.insert(term_key(r)).second) next.push_back(r);
    }
    front = std::move(next);
  }
  return seen;
}

inline bool bf_joinable(const TermPtr& a, const TermPtr& b) {
  auto ca = bf_closure(a);
  auto cb = bf_closure(b);
  for (const auto& k : ca)
    if (cb.count(k)) return true;
  return false;
}

// Every ground {0,S,+} term of the given syntactic size (node count).
inline std::vector<TermPtr> arith_terms_of_size(int size) {
  static std::map<int, std::vector<TermPtr>> memo;
  auto it = memo.find(size);
  if (it != memo.end()) return it->second;
  std::vector<TermPtr> out;
  if (size == 1) {
    out.push_back(Term::app("0"));
  } else if (size >= 2) {
    for (const auto& t : arith_terms_of_size(size - 1))
      out.push_back(Term::app("S", {t}));
    for (int i = 1; i <= size - 2; ++i)
      for (const auto& a : arith_terms_of_size(i))
        for (const auto& b : arith_terms_of_size(size - 1 - i))
          out.push_back(Term::app("+", {a, b}));
  }
  memo[size] = out;
  return out;
}

inline std::vector<TermPtr> arith_terms_up_to(int size) {
  std::vector<TermPtr> out;
  for (int s = 1; s <= size; ++s) {
    auto ts = arith_terms_of_size(s);
    out.insert(out.end(), ts.begin(), ts.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ground truth-table oracle for saturation steps
// ---------------------------------------------------------------------------

using GroundLits = std::vector<resolution::Literal>;

inline std::string atom_key(const PropPtr& a) {
  std::string s = a->name + "(";
  for (const auto& t : a->args) s += term_key(t) + ",";
  return s + ")";
}

inline void collect_atoms(const GroundLits& lits, std::map<std::string, int>& atoms) {
  for (const auto& l : lits)
    atoms.emplace(atom_key(l.atom), (int)atoms.size());
}

inline void collect_prop_atoms(const PropPtr& p, std::map<std::string, int>& atoms) {
  switch (p->kind) {
    case Prop::Kind::Atom:
      atoms.emplace(atom_key(p), (int)atoms.size());
      return;
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return;
    default:
      if (p->lhs) collect_prop_atoms(p->lhs, atoms);
      if (p->rhs) collect_prop_atoms(p->rhs, atoms);
  }
}

inline bool eval_lits(const GroundLits& lits, const std::map<std::string, int>& atoms,
                      unsigned long long mask) {
  for (const auto& l : lits) {
    bool v = (mask >> atoms.at(atom_key(l.atom))) & 1;
    if (v == l.positive) return true;
  }
  return false;
}

inline bool eval_ground_prop(const PropPtr& p, const std::map<std::string, int>& atoms,
                             unsigned long long mask) {
  switch (p->kind) {
    case Prop::Kind::Atom:
      return (mask >> atoms.at(atom_key(p))) & 1;
    case Prop::Kind::Top:
      return true;
    case Prop::Kind::Bottom:
      return false;
    case Prop::Kind::And:
      return eval_ground_prop(p->lhs, atoms, mask) &&
             eval_ground_prop(p->rhs, atoms, mask);
    case Prop::Kind::Or:
      return eval_ground_prop(p->lhs, atoms, mask) ||
             eval_ground_prop(p->rhs, atoms, mask);
    case Prop::Kind::Implies:
      return !eval_ground_prop(p->lhs, atoms, mask) ||
             eval_ground_prop(p->rhs, atoms, mask);
    default:
      throw std::runtime_error("quantified proposition in the ground oracle");
  }
}

// All substitutions mapping the given variables into the universe.
inline std::vector<Subst> groundings(const std::set<std::string>& vars,
                                     const std::vector<TermPtr>& universe) {
  std::vector<Subst> out{Subst{}};
  for (const auto& v : vars) {
    std::vector<Subst> next;
    for (const auto& s : out)
      for (const auto& t : universe) {
        Subst s2 = s;
        s2.bind(v, t);
        next.push_back(std::move(s2));
      }
    out = std::move(next);
  }
  return out;
}

inline std::set<std::string> clause_vars_of(const resolution::Clause& c) {
  std::set<std::string> vs;
  for (const auto& l : c.literals) {
    auto f = free_vars(l.atom);
    vs.insert(f.begin(), f.end());
  }
  return vs;
}

// The rule read as the axiom it came from: unpolarized rules as a
// biconditional, negative rules as lhs => rhs, positive rules as rhs => lhs.
inline PropPtr rule_reading(const rewrite::RewriteRule& r) {
  switch (r.polarity) {
    case rewrite::RulePolarity::Unpolarized:
      return Prop::conj(Prop::implies(r.atom_lhs, r.prop_rhs),
                        Prop::implies(r.prop_rhs, r.atom_lhs));
    case rewrite::RulePolarity::NegativeOnly:
      return Prop::implies(r.atom_lhs, r.prop_rhs);
    case rewrite::RulePolarity::PositiveOnly:
      return Prop::implies(r.prop_rhs, r.atom_lhs);
  }
  return nullptr;
}

// Checks one derivation step: every assignment over the ground instances
// that satisfies all parent instances (and the rule reading, for rewrite
// steps) satisfies the child. Parents' recorded substitutions are applied
// first; leftover variables are grounded jointly over the universe.
struct StepSoundness {
  const rewrite::Theory& theory;
  std::vector<TermPtr> universe;
  int max_atoms = 22;

  bool entails(const std::vector<GroundLits>& premise_clauses,
               const std::vector<PropPtr>& premise_props,
               const GroundLits& child) const {
    std::map<std::string, int> atoms;
    for (const auto& c : premise_clauses) collect_atoms(c, atoms);
    for (const auto& p : premise_props) collect_prop_atoms(p, atoms);
    collect_atoms(child, atoms);
    if ((int)atoms.size() > max_atoms)
      throw std::runtime_error("ground oracle: too many atoms");
    for (unsigned long long mask = 0; mask < (1ull << atoms.size()); ++mask) {
      bool premises = true;
      for (const auto& c : premise_clauses)
        if (!eval_lits(c, atoms, mask)) {
          premises = false;
          break;
        }
      if (premises)
        for (const auto& p : premise_props)
          if (!eval_ground_prop(p, atoms, mask)) {
            premises = false;
            break;
          }
      if (premises && !eval_lits(child, atoms, mask)) return false;
    }
    return true;
  }

  // The recorded substitutions pin the exact inference instance: mgu applies
  // to the first parent (for rewrites, to the rule reading), mgu2 to the
  // second parent or one-way rule. Leftover variables are grounded jointly.
  bool check(const resolution::RefuteResult& res, int id) const {
    using PKind = resolution::Provenance::Kind;
    const resolution::Clause& child = res.steps[id];
    const resolution::Provenance& pv = child.prov;
    if (pv.kind == PKind::Input) return true;

    auto find_rule = [&](const std::string& name) -> const rewrite::RewriteRule* {
      for (const auto& r : theory.rules)
        if (r.name == name) return &r;
      return nullptr;
    };

    // (clause, substitution) premises and (prop, substitution) premises
    std::vector<std::pair<const resolution::Clause*, const Subst*>> parents;
    std::vector<std::pair<PropPtr, const Subst*>> readings;
    static const Subst ident;

    switch (pv.kind) {
      case PKind::Rewrite:
        parents.emplace_back(&res.steps[pv.parent1], &ident);
        readings.emplace_back(rule_reading(*find_rule(pv.rewrite_rule)), &pv.mgu);
        break;
      case PKind::Resolvent:
        parents.emplace_back(&res.steps[pv.parent1], &pv.mgu);
        if (pv.parent2 >= 0)
          parents.emplace_back(&res.steps[pv.parent2], &pv.mgu2);
        else
          readings.emplace_back(rule_reading(*find_rule(pv.one_way_rule)), &pv.mgu2);
        break;
      case PKind::Factor:
        parents.emplace_back(&res.steps[pv.parent1], &pv.mgu);
        break;
      default:
        return true;
    }

    std::set<std::string> vars = clause_vars_of(child);
    for (const auto& [c, s] : parents)
      for (const auto& l : c->literals) {
        auto f = free_vars(s->apply(l.atom));
        vars.insert(f.begin(), f.end());
      }
    for (const auto& [rprop, s] : readings) {
      auto f = free_vars(s->apply(rprop));
      vars.insert(f.begin(), f.end());
    }

    for (const auto& g : groundings(vars, universe)) {
      std::vector<GroundLits> premise_clauses;
      for (const auto& [c, s] : parents) {
        GroundLits lits;
        for (const auto& l : c->literals)
          lits.push_back({l.positive, g.apply(s->apply(l.atom))});
        premise_clauses.push_back(std::move(lits));
      }
      std::vector<PropPtr> premise_props;
      for (const auto& [rprop, s] : readings)
        premise_props.push_back(g.apply(s->apply(rprop)));
      GroundLits child_lits;
      for (const auto& l : child.literals)
        child_lits.push_back({l.positive, g.apply(l.atom)});
      if (!entails(premise_clauses, premise_props, child_lits)) return false;
    }
    return true;
  }

  bool check_all(const resolution::RefuteResult& res) const {
    for (int id = 0; id < (int)res.steps.size(); ++id)
      if (!check(res, id)) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// Proof corpus
// ---------------------------------------------------------------------------

struct CorpusEntry {
  std::string name;
  rewrite::Theory theory;
  Context ctx;
  PropPtr goal;
  ndproof::ProofPtr proof;
};

inline rewrite::Theory props_theory() {
  return rewrite::parse_theory(R"(theory props
pred p 0
pred q 0
pred r 0
pred pr 1
fun a 0
)");
}

inline std::vector<CorpusEntry> proof_corpus() {
  namespace nd = dmt::ndproof;
  using P = Prop;
  std::vector<CorpusEntry> out;

  auto arith = theories::builtin("arith");
  auto subset = theories::builtin("subset");
  auto loop = theories::builtin("loopPQ");
  auto props = props_theory();

  auto atom = [](const char* n, std::vector<TermPtr> args = {}) {
    return P::atom(n, std::move(args));
  };
  PropPtr p = atom("p"), q = atom("q"), r = atom("r");
  TermPtr a = Term::app("a");
  auto pr = [&](TermPtr t) { return P::atom("pr", {t}); };

  // subset reflexivity
  {
    PropPtr zin_s = P::atom("in", {Term::var("z"), Term::var("s")});
    out.push_back({"subset_refl", subset, Context{},
                   P::atom("sub", {Term::var("s"), Term::var("s")}),
                   nd::Proof::all_intro("z", P::implies(zin_s, zin_s),
                                        nd::Proof::imp_intro("h", zin_s,
                                                             nd::Proof::axiom("h")))});
  }
  // computation proves 2 + 2 = 4
  {
    PropPtr goal = P::atom("=", {Term::app("+", {numeral(2), numeral(2)}), numeral(4)});
    out.push_back({"two_plus_two", arith, Context{}, goal, nd::Proof::top_intro()});
  }
  // the looping proof of Q
  {
    PropPtr bigP = atom("P");
    auto omega = nd::Proof::imp_intro(
        "h", bigP, nd::Proof::imp_elim(nd::Proof::axiom("h"), nd::Proof::axiom("h")));
    out.push_back({"loop_q", loop, Context{}, atom("Q"),
                   nd::Proof::imp_elim(omega, omega)});
  }
  // plain connective proofs over the rule-free theory
  out.push_back({"and_pair", props, Context{{{"h1", p}, {"h2", q}}}, P::conj(p, q),
                 nd::Proof::and_intro(nd::Proof::axiom("h1"), nd::Proof::axiom("h2"))});
  out.push_back({"imp_id", props, Context{}, P::implies(p, p),
                 nd::Proof::imp_intro("h", p, nd::Proof::axiom("h"))});
  out.push_back(
      {"or_case", props,
       Context{{{"d", P::disj(p, q)},
                {"c1", P::implies(p, r)},
                {"c2", P::implies(q, r)}}},
       r,
       nd::Proof::or_elim(nd::Proof::axiom("d"), "hl",
                          nd::Proof::imp_elim(nd::Proof::axiom("c1"),
                                              nd::Proof::axiom("hl")),
                          "hr",
                          nd::Proof::imp_elim(nd::Proof::axiom("c2"),
                                              nd::Proof::axiom("hr")))});
  out.push_back({"vacuous", props, Context{}, P::implies(q, P::top()),
                 nd::Proof::imp_intro("h", q, nd::Proof::top_intro())});
  out.push_back({"shadowing", props, Context{}, P::implies(p, P::implies(p, p)),
                 nd::Proof::imp_intro(
                     "h", p, nd::Proof::imp_intro("h", p, nd::Proof::axiom("h")))});
  out.push_back({"bot_elim", props, Context{{{"hb", P::bottom()}}}, p,
                 nd::Proof::bot_elim(p, nd::Proof::axiom("hb"))});
  // beta redexes of every flavor
  out.push_back({"redex_imp", props, Context{{{"hp", p}}}, p,
                 nd::Proof::imp_elim(nd::Proof::imp_intro("h", p, nd::Proof::axiom("h")),
                                     nd::Proof::axiom("hp"))});
  out.push_back(
      {"redex_and", props, Context{{{"hp", p}}}, p,
       nd::Proof::and_elim_l(P::conj(p, P::top()),
                             nd::Proof::and_intro(nd::Proof::axiom("hp"),
                                                  nd::Proof::top_intro()))});
  out.push_back(
      {"redex_or", props, Context{{{"hp", p}}}, p,
       nd::Proof::or_elim(nd::Proof::or_intro_l(P::disj(p, q), nd::Proof::axiom("hp")),
                          "h1", nd::Proof::axiom("h1"), "h2",
                          nd::Proof::axiom("hp"))});
  {
    PropPtr body = P::implies(pr(Term::var("x")), pr(Term::var("x")));
    out.push_back(
        {"redex_all", props, Context{}, P::implies(pr(a), pr(a)),
         nd::Proof::all_elim(
             "x", body, a,
             nd::Proof::all_intro(
                 "x", body,
                 nd::Proof::imp_intro("h", pr(Term::var("x")),
                                      nd::Proof::axiom("h"))))});
  }
  {
    PropPtr ex_goal = P::exists("y", pr(Term::var("y")));
    out.push_back(
        {"redex_ex", props, Context{{{"ha", pr(a)}}}, ex_goal,
         nd::Proof::ex_elim(
             nd::Proof::ex_intro("x", pr(Term::var("x")), a, nd::Proof::axiom("ha")),
             "h", "x", pr(Term::var("x")),
             nd::Proof::ex_intro("y", pr(Term::var("y")), Term::var("x"),
                                 nd::Proof::axiom("h")))});
  }
  // permutative redex: the conjunction elimination sits on an or-elimination
  {
    PropPtr rp = P::conj(r, p);
    out.push_back(
        {"redex_perm", props,
         Context{{{"d", P::disj(p, q)},
                  {"c1", P::implies(p, rp)},
                  {"c2", P::implies(q, rp)}}},
         r,
         nd::Proof::and_elim_l(
             rp, nd::Proof::or_elim(nd::Proof::axiom("d"), "hl",
                                    nd::Proof::imp_elim(nd::Proof::axiom("c1"),
                                                        nd::Proof::axiom("hl")),
                                    "hr",
                                    nd::Proof::imp_elim(nd::Proof::axiom("c2"),
                                                        nd::Proof::axiom("hr"))))});
  }
  // an existential witness used through a universal hypothesis
  {
    PropPtr prx = pr(Term::var("x"));
    PropPtr all_hyp =
        P::forall("x", P::implies(prx, q));
    out.push_back(
        {"ex_use", props,
         Context{{{"d", P::exists("x", prx)}, {"k", all_hyp}}},
         q,
         nd::Proof::ex_elim(
             nd::Proof::axiom("d"), "h", "x", prx,
             nd::Proof::imp_elim(
                 nd::Proof::all_elim("x'", P::implies(pr(Term::var("x'")), q),
                                     Term::var("x"), nd::Proof::axiom("k")),
                 nd::Proof::axiom("h")))});
  }
  // identity cut over a computation
  {
    PropPtr goal = P::atom("=", {Term::app("+", {numeral(2), numeral(2)}), numeral(4)});
    out.push_back({"redex_arith", arith, Context{}, goal,
                   nd::Proof::imp_elim(
                       nd::Proof::imp_intro("h", goal, nd::Proof::axiom("h")),
                       nd::Proof::top_intro())});
  }
  return out;
}

// Random sound proof transformations: wrap an accepted proof of (ctx, goal)
// in a fresh redex that still proves goal.
inline ndproof::ProofPtr wrap_redex(const CorpusEntry& e, const ndproof::ProofPtr& p,
                                    int kind) {
  namespace nd = dmt::ndproof;
  const PropPtr& g = e.goal;
  std::set<std::string> used;
  for (const auto& [n, pr] : e.ctx.entries()) used.insert(n);
  std::string h = fresh_name("w", used);
  std::string h2 = fresh_name("w'", used);
  switch (kind % 5) {
    case 0:
      return nd::Proof::imp_elim(nd::Proof::imp_intro(h, g, nd::Proof::axiom(h)), p);
    case 1:
      return nd::Proof::and_elim_l(Prop::conj(g, Prop::top()),
                                   nd::Proof::and_intro(p, nd::Proof::top_intro()));
    case 2:
      return nd::Proof::and_elim_r(Prop::conj(Prop::top(), g),
                                   nd::Proof::and_intro(nd::Proof::top_intro(), p));
    case 3:
      return nd::Proof::or_elim(nd::Proof::or_intro_l(Prop::disj(g, Prop::bottom()), p),
                                h, nd::Proof::axiom(h), h2,
                                nd::Proof::bot_elim(g, nd::Proof::axiom(h2)));
    default: {
      std::set<std::string> avoid = free_vars(e.ctx);
      auto gv = free_vars(g);
      avoid.insert(gv.begin(), gv.end());
      std::string x = fresh_name("v", avoid);
      return nd::Proof::all_elim(x, g, Term::app("0"),
                                 nd::Proof::all_intro(x, g, p));
    }
  }
}

}  // namespace testkit

namespace testkit {

// Reverse arithmetic rewriting: replaces a subformula/subterm by something
// that reduces to it in one step. Hand-coded against the six arith rules so
// it stays independent of the engine.
inline dmt::TermPtr expand_term_once(const dmt::TermPtr& t) {
  using namespace dmt;
  // t  <-  0 + t
  if (pick(3) == 0) return Term::app("+", {Term::app("0"), t});
  // S(a + b)  <-  S(a) + b
  if (t->kind == Term::Kind::App && t->name == "S" && t->args.size() == 1) {
    const TermPtr& inner = t->args[0];
    if (inner->kind == Term::Kind::App && inner->name == "+" && pick(2) == 0)
      return Term::app("+", {Term::app("S", {inner->args[0]}), inner->args[1]});
  }
  if (t->kind == Term::Kind::App && !t->args.empty()) {
    auto args = t->args;
    int i = pick((int)args.size());
    args[i] = expand_term_once(args[i]);
    return Term::app(t->name, std::move(args));
  }
  return Term::app("+", {Term::app("0"), t});
}

inline dmt::PropPtr expand_prop_once(const dmt::PropPtr& p) {
  using namespace dmt;
  switch (p->kind) {
    case Prop::Kind::Top:
      // true  <-  0 = 0
      return Prop::atom("=", {Term::app("0"), Term::app("0")});
    case Prop::Kind::Bottom:
      // false  <-  S(t) = 0  or  0 = S(t)
      return pick(2) ? Prop::atom("=", {Term::app("S", {gen_ground_arith(1)}),
                                        Term::app("0")})
                     : Prop::atom("=", {Term::app("0"),
                                        Term::app("S", {gen_ground_arith(1)})});
    case Prop::Kind::Atom: {
      if (p->name == "=" && p->args.size() == 2 && pick(2) == 0) {
        // t = u  <-  S(t) = S(u)
        return Prop::atom("=", {Term::app("S", {p->args[0]}),
                                Term::app("S", {p->args[1]})});
      }
      auto args = p->args;
      if (!args.empty()) {
        int i = pick((int)args.size());
        args[i] = expand_term_once(args[i]);
        return Prop::atom(p->name, std::move(args));
      }
      return p;
    }
    case Prop::Kind::And:
      return pick(2) ? Prop::conj(expand_prop_once(p->lhs), p->rhs)
                     : Prop::conj(p->lhs, expand_prop_once(p->rhs));
    case Prop::Kind::Or:
      return pick(2) ? Prop::disj(expand_prop_once(p->lhs), p->rhs)
                     : Prop::disj(p->lhs, expand_prop_once(p->rhs));
    case Prop::Kind::Implies:
      return pick(2) ? Prop::implies(expand_prop_once(p->lhs), p->rhs)
                     : Prop::implies(p->lhs, expand_prop_once(p->rhs));
    case Prop::Kind::Forall:
      return Prop::forall(p->name, expand_prop_once(p->rhs));
    case Prop::Kind::Exists:
      return Prop::exists(p->name, expand_prop_once(p->rhs));
  }
  return p;
}

}  // namespace testkit
