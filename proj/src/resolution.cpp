#include "dmt/resolution.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace dmt::resolution {

bool literal_eq(const Literal& a, const Literal& b) {
  return a.positive == b.positive && prop_eq(a.atom, b.atom);
}

bool clause_eq(const Clause& a, const Clause& b) {
  if (a.literals.size() != b.literals.size()) return false;
  for (std::size_t i = 0; i < a.literals.size(); ++i)
    if (!literal_eq(a.literals[i], b.literals[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Clausification
// ---------------------------------------------------------------------------

namespace {

struct NNF {
  enum class K { True, False, Lit, And, Or, All, Ex };
  K k;
  Literal lit{true, nullptr};
  std::string var;
  std::vector<NNF> kids;
};

NNF nnf_of(const PropPtr& p, bool positive) {
  switch (p->kind) {
    case Prop::Kind::Atom:
      return {NNF::K::Lit, {positive, p}, "", {}};
    case Prop::Kind::Top:
      return {positive ? NNF::K::True : NNF::K::False, {}, "", {}};
    case Prop::Kind::Bottom:
      return {positive ? NNF::K::False : NNF::K::True, {}, "", {}};
    case Prop::Kind::And: {
      NNF n{positive ? NNF::K::And : NNF::K::Or, {}, "", {}};
      n.kids.push_back(nnf_of(p->lhs, positive));
      n.kids.push_back(nnf_of(p->rhs, positive));
      return n;
    }
    case Prop::Kind::Or: {
      NNF n{positive ? NNF::K::Or : NNF::K::And, {}, "", {}};
      n.kids.push_back(nnf_of(p->lhs, positive));
      n.kids.push_back(nnf_of(p->rhs, positive));
      return n;
    }
    case Prop::Kind::Implies: {
      NNF n{positive ? NNF::K::Or : NNF::K::And, {}, "", {}};
      n.kids.push_back(nnf_of(p->lhs, !positive));
      n.kids.push_back(nnf_of(p->rhs, positive));
      return n;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      bool universal = (p->kind == Prop::Kind::Forall) == positive;
      NNF n{universal ? NNF::K::All : NNF::K::Ex, {}, p->name, {}};
      n.kids.push_back(nnf_of(p->rhs, positive));
      return n;
    }
  }
  return {NNF::K::True, {}, "", {}};
}

// Renames universals apart, replaces existentials by Skolem terms over the
// enclosing universals, and drops the quantifiers.
NNF skolemize(const NNF& n, Subst map, std::vector<TermPtr> uvars, SkolemSource& sk,
              std::set<std::string>& used) {
  switch (n.k) {
    case NNF::K::True:
    case NNF::K::False:
      return n;
    case NNF::K::Lit:
      return {NNF::K::Lit, {n.lit.positive, map.apply(n.lit.atom)}, "", {}};
    case NNF::K::And:
    case NNF::K::Or: {
      NNF out{n.k, {}, "", {}};
      for (const auto& kid : n.kids)
        out.kids.push_back(skolemize(kid, map, uvars, sk, used));
      return out;
    }
    case NNF::K::All: {
      std::string x2 = fresh_name(n.var, used);
      used.insert(x2);
      map.bind(n.var, Term::var(x2));
      uvars.push_back(Term::var(x2));
      return skolemize(n.kids[0], std::move(map), std::move(uvars), sk, used);
    }
    case NNF::K::Ex: {
      map.bind(n.var, Term::app(sk.fresh(), uvars));
      return skolemize(n.kids[0], std::move(map), std::move(uvars), sk, used);
    }
  }
  return n;
}

std::vector<std::vector<Literal>> cnf_of(const NNF& n) {
  switch (n.k) {
    case NNF::K::True:
      return {};
    case NNF::K::False:
      return {{}};
    case NNF::K::Lit:
      return {{n.lit}};
    case NNF::K::And: {
      auto a = cnf_of(n.kids[0]);
      auto b = cnf_of(n.kids[1]);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case NNF::K::Or: {
      auto a = cnf_of(n.kids[0]);
      auto b = cnf_of(n.kids[1]);
      std::vector<std::vector<Literal>> out;
      for (const auto& ca : a)
        for (const auto& cb : b) {
          std::vector<Literal> c = ca;
          c.insert(c.end(), cb.begin(), cb.end());
          out.push_back(std::move(c));
        }
      return out;
    }
    default:
      throw InputError("quantifier survived skolemization");
  }
}

std::vector<Clause> clausify_avoiding(const PropPtr& p, SkolemSource& sk,
                                      std::set<std::string> used) {
  auto fv = free_vars(p);
  used.insert(fv.begin(), fv.end());
  std::vector<TermPtr> uvars;
  for (const auto& v : fv) uvars.push_back(Term::var(v));
  NNF n = skolemize(nnf_of(p, true), Subst{}, std::move(uvars), sk, used);
  std::vector<Clause> out;
  for (auto& lits : cnf_of(n)) {
    Clause c;
    bool tautology = false;
    for (auto& l : lits) {
      bool dup = false;
      for (const auto& e : c.literals) {
        if (literal_eq(e, l)) dup = true;
        if (e.positive != l.positive && prop_eq(e.atom, l.atom)) tautology = true;
      }
      if (!dup) c.literals.push_back(std::move(l));
    }
    if (!tautology) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<Clause> clausify(const PropPtr& p, SkolemSource& sk) {
  return clausify_avoiding(p, sk, {});
}

std::vector<Clause> clausify(const PropPtr& p) {
  SkolemSource sk;
  return clausify(p, sk);
}

// ---------------------------------------------------------------------------
// One-way clauses
// ---------------------------------------------------------------------------

namespace {

bool flatten(const PropPtr& p, Prop::Kind conn, std::vector<PropPtr>& atoms) {
  if (p->kind == conn)
    return flatten(p->lhs, conn, atoms) && flatten(p->rhs, conn, atoms);
  if (p->kind != Prop::Kind::Atom) return false;
  atoms.push_back(p);
  return true;
}

}  // namespace

std::vector<OneWayClause> compile_one_way(const rewrite::Theory& th) {
  std::vector<OneWayClause> out;
  for (const auto& r : th.rules) {
    if (r.kind != rewrite::RuleKind::PropRule) continue;
    if (r.polarity == rewrite::RulePolarity::Unpolarized) continue;
    std::vector<PropPtr> atoms;
    OneWayClause ow;
    ow.origin = r.name;
    ow.polarity = r.polarity;
    ow.selected = 0;
    if (r.polarity == rewrite::RulePolarity::NegativeOnly) {
      if (!flatten(r.prop_rhs, Prop::Kind::Or, atoms))
        throw NonClausalRule("rule " + r.name +
                             ": negative rule right-hand side is not a disjunction "
                             "of atoms");
      ow.clause.literals.push_back({false, r.atom_lhs});
      for (const auto& a : atoms) ow.clause.literals.push_back({true, a});
    } else {
      if (!flatten(r.prop_rhs, Prop::Kind::And, atoms))
        throw NonClausalRule("rule " + r.name +
                             ": positive rule right-hand side is not a conjunction "
                             "of atoms");
      ow.clause.literals.push_back({true, r.atom_lhs});
      for (const auto& a : atoms) ow.clause.literals.push_back({false, a});
    }
    out.push_back(std::move(ow));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unification
// ---------------------------------------------------------------------------

namespace {

bool unify_terms(const TermPtr& a, const TermPtr& b, Subst& s, std::string& why) {
  TermPtr x = s.apply(a);
  TermPtr y = s.apply(b);
  if (x->kind == Term::Kind::Var && y->kind == Term::Kind::Var && x->name == y->name)
    return true;
  if (x->kind == Term::Kind::Var) {
    if (free_vars(y).count(x->name)) {
      why = "occurs check: '" + x->name + "'";
      return false;
    }
    s.compose_bind(x->name, y);
    return true;
  }
  if (y->kind == Term::Kind::Var) {
    if (free_vars(x).count(y->name)) {
      why = "occurs check: '" + y->name + "'";
      return false;
    }
    s.compose_bind(y->name, x);
    return true;
  }
  if (x->name != y->name || x->args.size() != y->args.size()) {
    why = "clash: '" + x->name + "' vs '" + y->name + "'";
    return false;
  }
  for (std::size_t i = 0; i < x->args.size(); ++i)
    if (!unify_terms(x->args[i], y->args[i], s, why)) return false;
  return true;
}

}  // namespace

UnifyResult unify(const TermPtr& a, const TermPtr& b) {
  Subst s;
  std::string why;
  if (unify_terms(a, b, s, why)) return {s, ""};
  return {std::nullopt, why};
}

UnifyResult unify(const PropPtr& a, const PropPtr& b) {
  if (a->kind != Prop::Kind::Atom || b->kind != Prop::Kind::Atom)
    return {std::nullopt, "not atomic"};
  if (a->name != b->name || a->args.size() != b->args.size())
    return {std::nullopt, "clash: '" + a->name + "' vs '" + b->name + "'"};
  Subst s;
  std::string why;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!unify_terms(a->args[i], b->args[i], s, why)) return {std::nullopt, why};
  return {s, ""};
}

// ---------------------------------------------------------------------------
// Resolution and factoring
// ---------------------------------------------------------------------------

namespace {

std::set<std::string> clause_vars(const Clause& c) {
  std::set<std::string> out;
  for (const auto& l : c.literals) {
    auto f = free_vars(l.atom);
    out.insert(f.begin(), f.end());
  }
  return out;
}

// Renaming of c2's variables away from c1's.
Subst rename_apart(const Clause& c1, const Clause& c2) {
  Subst ren;
  auto v1 = clause_vars(c1);
  auto v2 = clause_vars(c2);
  std::set<std::string> taken = v1;
  taken.insert(v2.begin(), v2.end());
  for (const auto& v : v2) {
    if (v1.count(v)) {
      std::string v2name = fresh_name(v, taken);
      taken.insert(v2name);
      ren.bind(v, Term::var(v2name));
    }
  }
  return ren;
}

Literal apply_lit(const Subst& s, const Literal& l) {
  return {l.positive, s.apply(l.atom)};
}

}  // namespace

ResolveOutcome resolve(ClauseRef c1, std::size_t i, ClauseRef c2, std::size_t j) {
  if (i >= c1.clause->literals.size() || j >= c2.clause->literals.size())
    throw InputError("resolution literal index out of range");
  if (c1.one_way && c2.one_way)
    return {ResolveOutcome::Status::Blocked,
            "resolution between two one-way clauses", std::nullopt};
  if (c1.one_way && i != c1.one_way->selected)
    return {ResolveOutcome::Status::Blocked,
            "one-way clause used off its selected literal", std::nullopt};
  if (c2.one_way && j != c2.one_way->selected)
    return {ResolveOutcome::Status::Blocked,
            "one-way clause used off its selected literal", std::nullopt};
  const Literal& l1 = c1.clause->literals[i];
  const Literal& l2 = c2.clause->literals[j];
  if (l1.positive == l2.positive)
    return {ResolveOutcome::Status::NotUnifiable, "literals have the same sign",
            std::nullopt};
  Subst ren = rename_apart(*c1.clause, *c2.clause);
  auto u = unify(l1.atom, ren.apply(l2.atom));
  if (!u.mgu)
    return {ResolveOutcome::Status::NotUnifiable, u.reason, std::nullopt};
  Clause out;
  for (std::size_t k = 0; k < c1.clause->literals.size(); ++k)
    if (k != i) out.literals.push_back(apply_lit(*u.mgu, c1.clause->literals[k]));
  for (std::size_t k = 0; k < c2.clause->literals.size(); ++k)
    if (k != j)
      out.literals.push_back(
          apply_lit(*u.mgu, apply_lit(ren, c2.clause->literals[k])));
  out.prov.kind = Provenance::Kind::Resolvent;
  out.prov.lit1 = (int)i;
  out.prov.lit2 = (int)j;
  out.prov.mgu = *u.mgu;
  for (const auto& v : clause_vars(*c2.clause)) {
    TermPtr image = u.mgu->apply(ren.apply(Term::var(v)));
    if (image->kind != Term::Kind::Var || image->name != v)
      out.prov.mgu2.bind(v, image);
  }
  if (c1.one_way)
    out.prov.one_way_rule = c1.one_way->origin;
  else if (c2.one_way)
    out.prov.one_way_rule = c2.one_way->origin;
  return {ResolveOutcome::Status::Resolved, "", std::move(out)};
}

std::optional<Clause> factor(const Clause& c, std::size_t i, std::size_t j) {
  if (i >= c.literals.size() || j >= c.literals.size() || i == j)
    throw InputError("factoring literal index out of range");
  const Literal& a = c.literals[i];
  const Literal& b = c.literals[j];
  if (a.positive != b.positive) return std::nullopt;
  auto u = unify(a.atom, b.atom);
  if (!u.mgu) return std::nullopt;
  Clause out;
  for (std::size_t k = 0; k < c.literals.size(); ++k)
    if (k != j) out.literals.push_back(apply_lit(*u.mgu, c.literals[k]));
  out.prov.kind = Provenance::Kind::Factor;
  out.prov.lit1 = (int)i;
  out.prov.lit2 = (int)j;
  out.prov.mgu = *u.mgu;
  return out;
}

// ---------------------------------------------------------------------------
// Clause rewriting
// ---------------------------------------------------------------------------

namespace {

// Term-normalizes every literal; decrements budget by the steps taken.
std::optional<Clause> term_normalize_clause(const Clause& c, const rewrite::Theory& th,
                                            long long& budget) {
  Clause out;
  out.prov = c.prov;
  for (const auto& l : c.literals) {
    std::vector<TermPtr> args;
    for (const auto& a : l.atom->args) {
      auto r = rewrite::normalize(a, th, budget);
      budget -= r.steps;
      if (r.exhausted()) return std::nullopt;
      args.push_back(*r.value);
    }
    out.literals.push_back({l.positive, Prop::atom(l.atom->name, std::move(args))});
  }
  return out;
}

struct ClauseStep {
  std::vector<std::pair<Clause, const rewrite::RewriteRule*>> children;
  int lit = -1;
};

// One proposition-rule step at the first rewritable literal. The clause is
// hypothesis-side: positive literals are negative occurrences and vice
// versa. Every admissible rule at that literal contributes its children.
std::optional<ClauseStep> clause_rewrite_step(const Clause& c,
                                              const rewrite::Theory& th,
                                              SkolemSource& sk) {
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    const Literal& l = c.literals[i];
    Polarity pol = l.positive ? Polarity::Negative : Polarity::Positive;
    auto rewrites = rewrite::atom_rewrites(l.atom, pol, th);
    if (rewrites.empty()) continue;
    ClauseStep step;
    step.lit = (int)i;
    std::set<std::string> avoid;
    for (const auto& lit : c.literals) {
      auto f = free_vars(lit.atom);
      avoid.insert(f.begin(), f.end());
    }
    for (const auto& rw : rewrites) {
      PropPtr replaced = l.positive ? rw.result : Prop::neg(rw.result);
      for (const auto& piece : clausify_avoiding(replaced, sk, avoid)) {
        Clause child;
        for (std::size_t k = 0; k < i; ++k) child.literals.push_back(c.literals[k]);
        child.literals.insert(child.literals.end(), piece.literals.begin(),
                              piece.literals.end());
        for (std::size_t k = i + 1; k < c.literals.size(); ++k)
          child.literals.push_back(c.literals[k]);
        child.prov.kind = Provenance::Kind::Rewrite;
        child.prov.rewrite_rule = rw.rule->name;
        child.prov.lit1 = (int)i;
        child.prov.mgu = rw.match;
        step.children.emplace_back(std::move(child), rw.rule);
      }
    }
    return step;
  }
  return std::nullopt;
}

}  // namespace

RewriteClauseResult rewrite_clause(const Clause& c, const rewrite::Theory& th,
                                   long long fuel, SkolemSource& sk) {
  RewriteClauseResult res;
  long long budget = fuel;
  auto first = term_normalize_clause(c, th, budget);
  if (!first) {
    res.exhausted = true;
    return res;
  }
  res.changed = !clause_eq(*first, c);
  std::deque<Clause> work{*first};
  while (!work.empty()) {
    Clause x = std::move(work.front());
    work.pop_front();
    auto step = clause_rewrite_step(x, th, sk);
    if (!step) {
      bool dup = false;
      for (const auto& e : res.clauses)
        if (clause_eq(e, x)) {
          dup = true;
          break;
        }
      if (!dup) res.clauses.push_back(std::move(x));
      continue;
    }
    res.changed = true;
    for (auto& [child, rule] : step->children) {
      if (--budget < 0) {
        res.exhausted = true;
        return res;
      }
      auto tn = term_normalize_clause(child, th, budget);
      if (!tn) {
        res.exhausted = true;
        return res;
      }
      work.push_back(std::move(*tn));
    }
  }
  return res;
}

RewriteClauseResult rewrite_clause(const Clause& c, const rewrite::Theory& th,
                                   long long fuel) {
  SkolemSource sk;
  return rewrite_clause(c, th, fuel, sk);
}

// ---------------------------------------------------------------------------
// Saturation
// ---------------------------------------------------------------------------

namespace {

bool is_tautology(const Clause& c) {
  for (std::size_t i = 0; i < c.literals.size(); ++i)
    for (std::size_t j = i + 1; j < c.literals.size(); ++j)
      if (c.literals[i].positive != c.literals[j].positive &&
          prop_eq(c.literals[i].atom, c.literals[j].atom))
        return true;
  return false;
}

void canon_term(std::ostringstream& os, const TermPtr& t,
                std::map<std::string, int>& vars) {
  if (t->kind == Term::Kind::Var) {
    auto [it, inserted] = vars.emplace(t->name, (int)vars.size());
    os << '$' << it->second;
    return;
  }
  os << t->name;
  if (!t->args.empty()) {
    os << '(';
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) os << ',';
      canon_term(os, t->args[i], vars);
    }
    os << ')';
  }
}

void skeleton_term(std::ostringstream& os, const TermPtr& t) {
  if (t->kind == Term::Kind::Var) {
    os << '*';
    return;
  }
  os << t->name;
  if (!t->args.empty()) {
    os << '(';
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) os << ',';
      skeleton_term(os, t->args[i]);
    }
    os << ')';
  }
}

std::string literal_skeleton(const Literal& l) {
  std::ostringstream os;
  os << (l.positive ? '+' : '-') << l.atom->name << '(';
  for (const auto& a : l.atom->args) skeleton_term(os, a);
  os << ')';
  return os.str();
}

// Canonical key for exact-variant detection: literals sorted by a
// rename-invariant skeleton, variables numbered in traversal order.
std::string clause_key(const Clause& c) {
  std::vector<std::size_t> idx(c.literals.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<std::string> skel;
  skel.reserve(idx.size());
  for (const auto& l : c.literals) skel.push_back(literal_skeleton(l));
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return skel[a] < skel[b]; });
  std::ostringstream os;
  std::map<std::string, int> vars;
  for (std::size_t i : idx) {
    const Literal& l = c.literals[i];
    os << (l.positive ? '+' : '-') << l.atom->name << '(';
    for (const auto& a : l.atom->args) {
      canon_term(os, a, vars);
      os << ',';
    }
    os << ");";
  }
  return os.str();
}

long long clause_symbols(const Clause& c) {
  long long n = 0;
  std::function<long long(const TermPtr&)> tn = [&](const TermPtr& t) {
    long long k = 1;
    for (const auto& a : t->args) k += tn(a);
    return k;
  };
  for (const auto& l : c.literals) {
    n += 1;
    for (const auto& a : l.atom->args) n += tn(a);
  }
  return n;
}

int term_depth(const TermPtr& t) {
  int d = 0;
  for (const auto& a : t->args) d = std::max(d, term_depth(a));
  return d + 1;
}

int clause_depth(const Clause& c) {
  int d = 0;
  for (const auto& l : c.literals)
    for (const auto& a : l.atom->args) d = std::max(d, term_depth(a));
  return d;
}

void scan_skolems(const TermPtr& t, int& next) {
  if (t->kind == Term::Kind::App && t->name.size() > 2 &&
      t->name.compare(0, 2, "sk") == 0) {
    bool digits = true;
    for (std::size_t i = 2; i < t->name.size(); ++i)
      if (!std::isdigit((unsigned char)t->name[i])) {
        digits = false;
        break;
      }
    if (digits) next = std::max(next, std::stoi(t->name.substr(2)) + 1);
  }
  for (const auto& a : t->args) scan_skolems(a, next);
}

}  // namespace

RefuteResult refute(const rewrite::Theory& th, const std::vector<Clause>& input,
                    const Limits& limits) {
  auto violations = rewrite::validate_theory(th);
  if (!violations.empty())
    throw InputError("theory '" + th.name + "' failed validation: " + violations[0]);

  RefuteResult res;
  res.one_way = compile_one_way(th);

  SkolemSource sk;
  for (const auto& c : input)
    for (const auto& l : c.literals)
      for (const auto& a : l.atom->args) scan_skolems(a, sk.next);

  long long budget = limits.fuel;
  std::set<std::string> keys;
  // (literal count, symbol count, id): lightest first, FIFO on ties
  std::set<std::tuple<long long, long long, int>> pending;
  std::vector<int> processed;
  int empty_id = -1;
  bool degraded = false;
  bool stopped = false;

  auto insert = [&](Clause c) {
    if (stopped || empty_id >= 0) return;
    if ((long long)res.steps.size() >= limits.max_clauses) {
      stopped = true;
      res.resource = "clause limit";
      return;
    }
    auto tn = term_normalize_clause(c, th, budget);
    if (!tn) {
      stopped = true;
      res.resource = "rewrite fuel";
      return;
    }
    c = std::move(*tn);
    if (limits.max_depth > 0 && clause_depth(c) > limits.max_depth) {
      degraded = true;
      return;
    }
    if (is_tautology(c)) return;
    if (!keys.insert(clause_key(c)).second) return;
    int id = (int)res.steps.size();
    res.steps.push_back(std::move(c));
    if (res.steps[id].prov.kind != Provenance::Kind::Input) ++res.generated;
    if (res.steps[id].literals.empty()) {
      empty_id = id;
      return;
    }
    pending.insert({(long long)res.steps[id].literals.size(),
                    clause_symbols(res.steps[id]), id});
  };

  for (const Clause& c : input) {
    Clause ic = c;
    ic.prov = Provenance{};
    insert(std::move(ic));
  }

  while (empty_id < 0 && !stopped && !pending.empty()) {
    auto it = pending.begin();
    int g = std::get<2>(*it);
    pending.erase(it);
    const Clause given = res.steps[g];

    // rewrite simplification replaces the clause by its reducts
    auto step = clause_rewrite_step(given, th, sk);
    if (step) {
      for (auto& [child, rule] : step->children) {
        if (--budget < 0) {
          stopped = true;
          res.resource = "rewrite fuel";
          break;
        }
        child.prov.parent1 = g;
        insert(std::move(child));
        if (empty_id >= 0 || stopped) break;
      }
      continue;
    }

    // binary resolution against processed clauses and itself
    std::vector<int> partners = processed;
    partners.push_back(g);
    for (int pid : partners) {
      const Clause partner = res.steps[pid];
      for (std::size_t i = 0; i < given.literals.size(); ++i) {
        for (std::size_t j = 0; j < partner.literals.size(); ++j) {
          auto out = resolve(ClauseRef(given), i, ClauseRef(partner), j);
          if (out.status != ResolveOutcome::Status::Resolved) continue;
          out.clause->prov.parent1 = g;
          out.clause->prov.parent2 = pid;
          insert(std::move(*out.clause));
          if (empty_id >= 0 || stopped) break;
        }
        if (empty_id >= 0 || stopped) break;
      }
      if (empty_id >= 0 || stopped) break;
    }
    if (empty_id >= 0 || stopped) break;

    // resolution with the one-way clauses, selected literal only
    for (const auto& ow : res.one_way) {
      for (std::size_t i = 0; i < given.literals.size(); ++i) {
        auto out = resolve(ClauseRef(given), i, ClauseRef(ow), ow.selected);
        if (out.status != ResolveOutcome::Status::Resolved) continue;
        out.clause->prov.parent1 = g;
        insert(std::move(*out.clause));
        if (empty_id >= 0 || stopped) break;
      }
      if (empty_id >= 0 || stopped) break;
    }
    if (empty_id >= 0 || stopped) break;

    // factors of the given clause
    for (std::size_t i = 0; i < given.literals.size(); ++i) {
      for (std::size_t j = 0; j < given.literals.size(); ++j) {
        if (i == j) continue;
        auto f = factor(given, i, j);
        if (!f) continue;
        f->prov.parent1 = g;
        insert(std::move(*f));
        if (empty_id >= 0 || stopped) break;
      }
      if (empty_id >= 0 || stopped) break;
    }

    processed.push_back(g);
  }

  if (empty_id >= 0) {
    res.status = RefuteResult::Status::Refutation;
    std::set<int> seen;
    std::vector<int> stack{empty_id};
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      if (!seen.insert(id).second) continue;
      const Provenance& pv = res.steps[id].prov;
      if (pv.parent1 >= 0) stack.push_back(pv.parent1);
      if (pv.parent2 >= 0) stack.push_back(pv.parent2);
    }
    res.derivation.assign(seen.begin(), seen.end());
  } else if (stopped) {
    res.status = RefuteResult::Status::ResourceOut;
  } else if (degraded) {
    res.status = RefuteResult::Status::ResourceOut;
    res.resource = "depth limit dropped clauses";
  } else {
    res.status = RefuteResult::Status::Saturated;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Problem files
// ---------------------------------------------------------------------------

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Literal parse_literal(const std::string& text, const Signature& sig, int lineno) {
  std::string t = trim(text);
  if (t.empty() || (t[0] != '+' && t[0] != '-'))
    throw InputError("literal must start with '+' or '-' (line " +
                     std::to_string(lineno) + ")");
  bool positive = t[0] == '+';
  std::string body = trim(t.substr(1));
  auto [term, atom] = parse_term_or_atom(body, sig, ParseOptions{false});
  if (atom) return {positive, atom};
  if (term && term->kind == Term::Kind::Var) return {positive, Prop::atom(term->name)};
  throw InputError("expected an atom in clause literal (line " +
                   std::to_string(lineno) + ")");
}

}  // namespace

Problem parse_problem(const std::string& text, const Signature& theory_sig) {
  Problem pr;
  pr.signature = theory_sig;
  SkolemSource sk;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    auto where = [&] { return " (line " + std::to_string(lineno) + ")"; };
    if (kw == "problem") {
      ls >> pr.name;
    } else if (kw == "fun" || kw == "pred") {
      std::string sym;
      int arity = -1;
      ls >> sym >> arity;
      if (sym.empty() || arity < 0)
        throw InputError("expected '" + kw + " <symbol> <arity>'" + where());
      if (kw == "fun")
        pr.signature.declare_fun(sym, arity);
      else
        pr.signature.declare_pred(sym, arity);
    } else if (kw == "infix") {
      std::string sym, assoc;
      int prec = -1;
      ls >> sym >> prec >> assoc;
      if (sym.empty() || prec < 0)
        throw InputError("expected 'infix <symbol> <prec> <left|right|none>'" +
                         where());
      InfixDecl d{sym, prec, InfixDecl::Assoc::None};
      if (assoc == "left")
        d.assoc = InfixDecl::Assoc::Left;
      else if (assoc == "right")
        d.assoc = InfixDecl::Assoc::Right;
      pr.signature.declare_infix(d);
    } else if (kw == "clause") {
      std::string rest;
      std::getline(ls, rest);
      Clause c;
      std::size_t start = 0;
      for (;;) {
        auto bar = rest.find('|', start);
        std::string piece =
            bar == std::string::npos ? rest.substr(start) : rest.substr(start, bar - start);
        c.literals.push_back(parse_literal(piece, pr.signature, lineno));
        if (bar == std::string::npos) break;
        start = bar + 1;
      }
      pr.clauses.push_back(std::move(c));
    } else if (kw == "goal") {
      std::string rest;
      std::getline(ls, rest);
      PropPtr goal;
      try {
        goal = parse_prop(trim(rest), pr.signature, ParseOptions{false});
      } catch (const ParseError& e) {
        throw InputError(std::string("in goal: ") + e.what());
      }
      auto fv = free_vars(goal);
      for (auto it = fv.rbegin(); it != fv.rend(); ++it)
        goal = Prop::forall(*it, goal);
      for (auto& c : clausify(Prop::neg(goal), sk)) pr.clauses.push_back(std::move(c));
    } else {
      throw InputError("unknown directive '" + kw + "'" + where());
    }
  }
  return pr;
}

Problem load_problem_file(const std::string& path, const Signature& theory_sig) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem(buf.str(), theory_sig);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string print_literal(const Literal& l, const Signature& sig) {
  std::string atom = print_prop(l.atom, sig);
  if (l.positive) return atom;
  bool infix = l.atom->args.size() == 2 && sig.infix(l.atom->name);
  return infix ? "~(" + atom + ")" : "~" + atom;
}

std::string print_clause(const Clause& c, const Signature& sig) {
  if (c.literals.empty()) return "false";
  std::string out;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += " | ";
    out += print_literal(c.literals[i], sig);
  }
  return out;
}

std::string print_subst(const Subst& s, const Signature& sig) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s.mapping()) {
    if (!first) out += ", ";
    first = false;
    out += v + "↦" + print_term(t, sig);
  }
  return out + "}";
}

std::string print_steps(const RefuteResult& r, const Signature& sig) {
  std::vector<int> ids;
  if (r.status == RefuteResult::Status::Refutation)
    ids = r.derivation;
  else
    for (int i = 0; i < (int)r.steps.size(); ++i) ids.push_back(i);

  std::map<int, int> display;
  for (std::size_t k = 0; k < ids.size(); ++k) display[ids[k]] = (int)k + 1;

  std::ostringstream os;
  for (const auto& ow : r.one_way)
    os << "one-way " << ow.origin << ": " << print_clause(ow.clause, sig)
       << "  [selected " << ow.selected << "]\n";
  for (int id : ids) {
    const Clause& c = r.steps[id];
    const Provenance& pv = c.prov;
    os << display[id] << ". ";
    switch (pv.kind) {
      case Provenance::Kind::Input:
        os << "input";
        break;
      case Provenance::Kind::Rewrite:
        os << "rewrite of " << display[pv.parent1] << " (lit " << pv.lit1 << ") by "
           << pv.rewrite_rule;
        break;
      case Provenance::Kind::Resolvent:
        os << "resolvent of " << display[pv.parent1] << " (lit " << pv.lit1 << ") and ";
        if (!pv.one_way_rule.empty())
          os << "ow:" << pv.one_way_rule << " (selected)";
        else
          os << display[pv.parent2] << " (lit " << pv.lit2 << ")";
        os << " with " << print_subst(pv.mgu, sig);
        break;
      case Provenance::Kind::Factor:
        os << "factor of " << display[pv.parent1] << " (lits " << pv.lit1 << ", "
           << pv.lit2 << ") with " << print_subst(pv.mgu, sig);
        break;
    }
    os << ": " << print_clause(c, sig) << "\n";
  }
  return os.str();
}

}  // namespace dmt::resolution
