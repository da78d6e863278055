#include "dmt/rewrite.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dmt::rewrite {

bool admits(RulePolarity rp, Polarity at) {
  switch (rp) {
    case RulePolarity::Unpolarized:
      return true;
    case RulePolarity::PositiveOnly:
      return at == Polarity::Positive;
    case RulePolarity::NegativeOnly:
      return at == Polarity::Negative;
  }
  return false;
}

RewriteRule RewriteRule::term_rule(std::string name, TermPtr lhs, TermPtr rhs) {
  RewriteRule r;
  r.name = std::move(name);
  r.kind = RuleKind::TermRule;
  r.term_lhs = std::move(lhs);
  r.term_rhs = std::move(rhs);
  return r;
}

RewriteRule RewriteRule::prop_rule(std::string name, PropPtr lhs, PropPtr rhs,
                                   RulePolarity pol) {
  RewriteRule r;
  r.name = std::move(name);
  r.kind = RuleKind::PropRule;
  r.polarity = pol;
  r.atom_lhs = std::move(lhs);
  r.prop_rhs = std::move(rhs);
  return r;
}

bool Theory::polarized() const {
  for (const auto& r : rules)
    if (r.polarity != RulePolarity::Unpolarized) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

namespace {

bool match_term_into(const TermPtr& pat, const TermPtr& sub, Subst& s) {
  if (pat->kind == Term::Kind::Var) {
    if (const TermPtr* bound = s.lookup(pat->name)) return term_eq(*bound, sub);
    s.bind(pat->name, sub);
    return true;
  }
  if (sub->kind != Term::Kind::App) return false;
  if (pat->name != sub->name || pat->args.size() != sub->args.size()) return false;
  for (std::size_t i = 0; i < pat->args.size(); ++i)
    if (!match_term_into(pat->args[i], sub->args[i], s)) return false;
  return true;
}

}  // namespace

std::optional<Subst> match(const TermPtr& pattern, const TermPtr& subject) {
  Subst s;
  if (match_term_into(pattern, subject, s)) return s;
  return std::nullopt;
}

std::optional<Subst> match(const PropPtr& atom_pattern, const PropPtr& atom_subject) {
  if (atom_pattern->kind != Prop::Kind::Atom || atom_subject->kind != Prop::Kind::Atom)
    return std::nullopt;
  if (atom_pattern->name != atom_subject->name ||
      atom_pattern->args.size() != atom_subject->args.size())
    return std::nullopt;
  Subst s;
  for (std::size_t i = 0; i < atom_pattern->args.size(); ++i)
    if (!match_term_into(atom_pattern->args[i], atom_subject->args[i], s))
      return std::nullopt;
  return s;
}

// ---------------------------------------------------------------------------
// Single steps
// ---------------------------------------------------------------------------

std::vector<AtomRewrite> atom_rewrites(const PropPtr& atom, Polarity pol,
                                       const Theory& th) {
  std::vector<AtomRewrite> out;
  if (atom->kind != Prop::Kind::Atom) return out;
  for (const auto& r : th.rules) {
    if (r.kind != RuleKind::PropRule || !admits(r.polarity, pol)) continue;
    if (auto s = match(r.atom_lhs, atom))
      out.push_back({&r, s->apply(r.prop_rhs), *s});
  }
  return out;
}

namespace {

// Leftmost-outermost: the root first, then arguments left to right.
std::optional<TermPtr> step_term(const TermPtr& t, const Theory& th) {
  if (t->kind == Term::Kind::App) {
    for (const auto& r : th.rules) {
      if (r.kind != RuleKind::TermRule) continue;
      if (auto s = match(r.term_lhs, t)) return s->apply(r.term_rhs);
    }
  }
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    if (auto a2 = step_term(t->args[i], th)) {
      auto args = t->args;
      args[i] = *a2;
      return Term::app(t->name, std::move(args));
    }
  }
  return std::nullopt;
}

std::optional<PropPtr> step_prop(const PropPtr& p, const Theory& th, Polarity pol) {
  switch (p->kind) {
    case Prop::Kind::Atom: {
      for (const auto& r : th.rules) {
        if (r.kind != RuleKind::PropRule || !admits(r.polarity, pol)) continue;
        if (auto s = match(r.atom_lhs, p)) return s->apply(r.prop_rhs);
      }
      for (std::size_t i = 0; i < p->args.size(); ++i) {
        if (auto a2 = step_term(p->args[i], th)) {
          auto args = p->args;
          args[i] = *a2;
          return Prop::atom(p->name, std::move(args));
        }
      }
      return std::nullopt;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return std::nullopt;
    case Prop::Kind::And:
    case Prop::Kind::Or: {
      if (auto l2 = step_prop(p->lhs, th, pol))
        return p->kind == Prop::Kind::And ? Prop::conj(*l2, p->rhs)
                                          : Prop::disj(*l2, p->rhs);
      if (auto r2 = step_prop(p->rhs, th, pol))
        return p->kind == Prop::Kind::And ? Prop::conj(p->lhs, *r2)
                                          : Prop::disj(p->lhs, *r2);
      return std::nullopt;
    }
    case Prop::Kind::Implies: {
      if (auto l2 = step_prop(p->lhs, th, flip(pol))) return Prop::implies(*l2, p->rhs);
      if (auto r2 = step_prop(p->rhs, th, pol)) return Prop::implies(p->lhs, *r2);
      return std::nullopt;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      if (auto b2 = step_prop(p->rhs, th, pol))
        return p->kind == Prop::Kind::Forall ? Prop::forall(p->name, *b2)
                                             : Prop::exists(p->name, *b2);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

void push_unique(std::vector<TermPtr>& out, const TermPtr& t) {
  for (const auto& u : out)
    if (term_eq(u, t)) return;
  out.push_back(t);
}

void push_unique(std::vector<PropPtr>& out, const PropPtr& p) {
  for (const auto& q : out)
    if (alpha_eq(q, p)) return;
  out.push_back(p);
}

void term_reducts(const TermPtr& t, const Theory& th, std::vector<TermPtr>& out) {
  if (t->kind == Term::Kind::App) {
    for (const auto& r : th.rules) {
      if (r.kind != RuleKind::TermRule) continue;
      if (auto s = match(r.term_lhs, t)) push_unique(out, s->apply(r.term_rhs));
    }
  }
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    std::vector<TermPtr> inner;
    term_reducts(t->args[i], th, inner);
    for (const auto& a2 : inner) {
      auto args = t->args;
      args[i] = a2;
      push_unique(out, Term::app(t->name, std::move(args)));
    }
  }
}

void prop_reducts(const PropPtr& p, const Theory& th, Polarity pol,
                  std::vector<PropPtr>& out) {
  switch (p->kind) {
    case Prop::Kind::Atom: {
      for (const auto& ar : atom_rewrites(p, pol, th)) push_unique(out, ar.result);
      for (std::size_t i = 0; i < p->args.size(); ++i) {
        std::vector<TermPtr> inner;
        term_reducts(p->args[i], th, inner);
        for (const auto& a2 : inner) {
          auto args = p->args;
          args[i] = a2;
          push_unique(out, Prop::atom(p->name, std::move(args)));
        }
      }
      return;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies: {
      Polarity lp = p->kind == Prop::Kind::Implies ? flip(pol) : pol;
      std::vector<PropPtr> ls, rs;
      prop_reducts(p->lhs, th, lp, ls);
      prop_reducts(p->rhs, th, pol, rs);
      auto rebuild = [&](PropPtr l, PropPtr r) {
        switch (p->kind) {
          case Prop::Kind::And:
            return Prop::conj(std::move(l), std::move(r));
          case Prop::Kind::Or:
            return Prop::disj(std::move(l), std::move(r));
          default:
            return Prop::implies(std::move(l), std::move(r));
        }
      };
      for (const auto& l2 : ls) push_unique(out, rebuild(l2, p->rhs));
      for (const auto& r2 : rs) push_unique(out, rebuild(p->lhs, r2));
      return;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      std::vector<PropPtr> bs;
      prop_reducts(p->rhs, th, pol, bs);
      for (const auto& b2 : bs)
        push_unique(out, p->kind == Prop::Kind::Forall ? Prop::forall(p->name, b2)
                                                       : Prop::exists(p->name, b2));
      return;
    }
  }
}

}  // namespace

std::vector<PropPtr> reduce_once(const PropPtr& p, const Theory& th, Polarity base) {
  std::vector<PropPtr> out;
  prop_reducts(p, th, base, out);
  return out;
}

std::vector<TermPtr> reduce_once(const TermPtr& t, const Theory& th) {
  std::vector<TermPtr> out;
  term_reducts(t, th, out);
  return out;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

Bounded<PropPtr> normalize(const PropPtr& p, const Theory& th, Polarity base,
                           long long fuel) {
  PropPtr cur = p;
  long long steps = 0;
  for (;;) {
    auto next = step_prop(cur, th, base);
    if (!next) return {cur, steps};
    if (steps >= fuel) return {std::nullopt, steps};
    cur = *next;
    ++steps;
  }
}

Bounded<TermPtr> normalize(const TermPtr& t, const Theory& th, long long fuel) {
  TermPtr cur = t;
  long long steps = 0;
  for (;;) {
    auto next = step_term(cur, th);
    if (!next) return {cur, steps};
    if (steps >= fuel) return {std::nullopt, steps};
    cur = *next;
    ++steps;
  }
}

namespace {

// One root-position step: a proposition rule at the root atom, or a term
// step inside the root atom's arguments.
std::optional<PropPtr> whnf_step(const PropPtr& p, const Theory& th, Polarity base) {
  if (p->kind != Prop::Kind::Atom) return std::nullopt;
  for (const auto& r : th.rules) {
    if (r.kind != RuleKind::PropRule || !admits(r.polarity, base)) continue;
    if (auto s = match(r.atom_lhs, p)) return s->apply(r.prop_rhs);
  }
  for (std::size_t i = 0; i < p->args.size(); ++i) {
    if (auto a2 = step_term(p->args[i], th)) {
      auto args = p->args;
      args[i] = *a2;
      return Prop::atom(p->name, std::move(args));
    }
  }
  return std::nullopt;
}

}  // namespace

Bounded<PropPtr> whnf(const PropPtr& p, const Theory& th, Polarity base,
                      long long fuel) {
  PropPtr cur = p;
  long long steps = 0;
  for (;;) {
    auto next = whnf_step(cur, th, base);
    if (!next) return {cur, steps};
    if (steps >= fuel) return {std::nullopt, steps};
    cur = *next;
    ++steps;
  }
}

// ---------------------------------------------------------------------------
// Common-reduct searches
// ---------------------------------------------------------------------------

namespace {

template <typename T, typename EqFn, typename ExpandFn>
Bounded<bool> valley_search(const T& a, const T& b, EqFn eq, ExpandFn expand,
                            long long fuel) {
  if (eq(a, b)) return {true, 0};
  std::vector<T> seen_a{a}, seen_b{b};
  std::vector<T> front_a{a}, front_b{b};
  long long steps = 0;

  auto grow = [&](std::vector<T>& front, std::vector<T>& seen,
                  const std::vector<T>& other) -> std::optional<bool> {
    std::vector<T> next;
    for (const auto& x : front) {
      for (const auto& y : expand(x)) {
        if (steps >= fuel) return std::nullopt;  // out of fuel
        ++steps;
        bool fresh = true;
        for (const auto& s : seen)
          if (eq(s, y)) {
            fresh = false;
            break;
          }
        if (!fresh) continue;
        for (const auto& o : other)
          if (eq(o, y)) return true;  // common reduct
        seen.push_back(y);
        next.push_back(y);
      }
    }
    front = std::move(next);
    return false;
  };

  while (!front_a.empty() || !front_b.empty()) {
    auto ra = grow(front_a, seen_a, seen_b);
    if (!ra) return {std::nullopt, steps};
    if (*ra) return {true, steps};
    auto rb = grow(front_b, seen_b, seen_a);
    if (!rb) return {std::nullopt, steps};
    if (*rb) return {true, steps};
  }
  return {false, steps};
}

}  // namespace

Bounded<bool> joinable(const TermPtr& t, const TermPtr& u, const Theory& th,
                       long long fuel) {
  return valley_search(
      t, u, [](const TermPtr& a, const TermPtr& b) { return term_eq(a, b); },
      [&](const TermPtr& x) { return reduce_once(x, th); }, fuel);
}

// Budgets escalate so a diverging normalization does not eat the whole fuel
// before the valley search gets a chance. Answers are budget-independent: a
// completed normal-form comparison and a completed valley closure both stand,
// so only the FuelExhausted outcome waits for the final escalation.
Bounded<bool> congruent(const PropPtr& a, const PropPtr& b, const Theory& th,
                        long long fuel) {
  if (alpha_eq(a, b)) return {true, 0};
  long long used = 0;
  for (long long budget = std::min<long long>(64, fuel);; budget = std::min(budget * 4, fuel)) {
    if (!th.polarized()) {
      auto na = normalize(a, th, Polarity::Positive, budget);
      auto nb = normalize(b, th, Polarity::Positive, budget);
      used += na.steps + nb.steps;
      if (na.value && nb.value) return {alpha_eq(*na.value, *nb.value), used};
    }
    // Normalization diverges within the budget (or the theory is polarized):
    // search for a common reduct, hypothesis side reducing negatively, goal
    // side positively.
    auto v = valley_search(
        std::pair<PropPtr, Polarity>{a, Polarity::Negative},
        std::pair<PropPtr, Polarity>{b, Polarity::Positive},
        [](const auto& x, const auto& y) { return alpha_eq(x.first, y.first); },
        [&](const auto& x) {
          std::vector<std::pair<PropPtr, Polarity>> out;
          for (const auto& r : reduce_once(x.first, th, x.second))
            out.emplace_back(r, x.second);
          return out;
        },
        budget);
    used += v.steps;
    if (v.value) return {*v.value, used};
    if (budget >= fuel) return {std::nullopt, used};
  }
}

Bounded<bool> congruent(const TermPtr& a, const TermPtr& b, const Theory& th,
                        long long fuel) {
  if (term_eq(a, b)) return {true, 0};
  long long used = 0;
  for (long long budget = std::min<long long>(64, fuel);; budget = std::min(budget * 4, fuel)) {
    auto na = normalize(a, th, budget);
    auto nb = normalize(b, th, budget);
    used += na.steps + nb.steps;
    if (na.value && nb.value) return {term_eq(*na.value, *nb.value), used};
    auto v = joinable(a, b, th, budget);
    used += v.steps;
    if (v.value) return {*v.value, used};
    if (budget >= fuel) return {std::nullopt, used};
  }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

void check_term_symbols(const TermPtr& t, const Signature& sig,
                        const std::string& where, std::vector<std::string>& out) {
  if (t->kind == Term::Kind::App) {
    auto a = sig.fun_arity(t->name);
    if (!a)
      out.push_back(where + ": unknown function symbol '" + t->name + "'");
    else if (*a != (int)t->args.size())
      out.push_back(where + ": function '" + t->name + "' has arity " +
                    std::to_string(*a) + ", applied to " +
                    std::to_string(t->args.size()) + " arguments");
  }
  for (const auto& arg : t->args) check_term_symbols(arg, sig, where, out);
}

void check_prop_symbols(const PropPtr& p, const Signature& sig,
                        const std::string& where, std::vector<std::string>& out) {
  switch (p->kind) {
    case Prop::Kind::Atom: {
      auto a = sig.pred_arity(p->name);
      if (!a)
        out.push_back(where + ": unknown predicate symbol '" + p->name + "'");
      else if (*a != (int)p->args.size())
        out.push_back(where + ": predicate '" + p->name + "' has arity " +
                      std::to_string(*a) + ", applied to " +
                      std::to_string(p->args.size()) + " arguments");
      for (const auto& arg : p->args) check_term_symbols(arg, sig, where, out);
      return;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies:
      check_prop_symbols(p->lhs, sig, where, out);
      check_prop_symbols(p->rhs, sig, where, out);
      return;
    case Prop::Kind::Forall:
    case Prop::Kind::Exists:
      check_prop_symbols(p->rhs, sig, where, out);
      return;
  }
}

}  // namespace

std::vector<std::string> validate_theory(const Theory& th) {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (const auto& r : th.rules) {
    std::string where = "rule " + r.name;
    if (!names.insert(r.name).second) out.push_back(where + ": duplicate rule name");
    if (r.kind == RuleKind::TermRule) {
      if (r.polarity != RulePolarity::Unpolarized)
        out.push_back(where + ": term rules cannot be polarized");
      if (!r.term_lhs || !r.term_rhs) {
        out.push_back(where + ": malformed term rule");
        continue;
      }
      if (r.term_lhs->kind == Term::Kind::Var)
        out.push_back(where + ": left-hand side is a bare variable");
      check_term_symbols(r.term_lhs, th.signature, where, out);
      check_term_symbols(r.term_rhs, th.signature, where, out);
      auto lv = free_vars(r.term_lhs);
      for (const auto& v : free_vars(r.term_rhs))
        if (!lv.count(v))
          out.push_back(where + ": variable '" + v +
                        "' of the right-hand side does not occur on the left");
    } else {
      if (!r.atom_lhs || !r.prop_rhs) {
        out.push_back(where + ": malformed proposition rule");
        continue;
      }
      if (r.atom_lhs->kind != Prop::Kind::Atom) {
        out.push_back(where + ": left-hand side is not an atomic proposition");
        continue;
      }
      check_prop_symbols(r.atom_lhs, th.signature, where, out);
      check_prop_symbols(r.prop_rhs, th.signature, where, out);
      auto lv = free_vars(r.atom_lhs);
      for (const auto& v : free_vars(r.prop_rhs))
        if (!lv.count(v))
          out.push_back(where + ": variable '" + v +
                        "' of the right-hand side does not occur on the left");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theory files
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

}  // namespace

Theory parse_theory(const std::string& text) {
  Theory th;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool named = false;
  std::set<std::string> rule_names;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    auto where = [&] { return " (line " + std::to_string(lineno) + ")"; };
    if (kw == "theory") {
      ls >> th.name;
      if (th.name.empty()) throw InputError("missing theory name" + where());
      named = true;
    } else if (kw == "fun" || kw == "pred") {
      std::string sym;
      int arity = -1;
      ls >> sym >> arity;
      if (sym.empty() || arity < 0)
        throw InputError("expected '" + kw + " <symbol> <arity>'" + where());
      if (kw == "fun")
        th.signature.declare_fun(sym, arity);
      else
        th.signature.declare_pred(sym, arity);
    } else if (kw == "infix") {
      std::string sym, assoc;
      int prec = -1;
      ls >> sym >> prec >> assoc;
      if (sym.empty() || prec < 0 || assoc.empty())
        throw InputError("expected 'infix <symbol> <prec> <left|right|none>'" +
                         where());
      InfixDecl d{sym, prec, InfixDecl::Assoc::None};
      if (assoc == "left")
        d.assoc = InfixDecl::Assoc::Left;
      else if (assoc == "right")
        d.assoc = InfixDecl::Assoc::Right;
      else if (assoc != "none")
        throw InputError("bad associativity '" + assoc + "'" + where());
      th.signature.declare_infix(d);
    } else if (kw == "rule") {
      std::string rest;
      std::getline(ls, rest);
      auto colon = rest.find(':');
      if (colon == std::string::npos)
        throw InputError("expected 'rule <name> : <lhs> --> <rhs>'" + where());
      std::string name = trim(rest.substr(0, colon));
      std::string body = rest.substr(colon + 1);
      if (name.empty()) throw InputError("missing rule name" + where());
      if (!rule_names.insert(name).second)
        throw InputError("duplicate rule name '" + name + "'" + where());
      auto arrow = body.find("-->");
      if (arrow == std::string::npos)
        throw InputError("missing '-->' in rule '" + name + "'" + where());
      RulePolarity pol = RulePolarity::Unpolarized;
      std::size_t arrow_len = 3;
      if (arrow + 3 < body.size() && body[arrow + 3] == '+') {
        pol = RulePolarity::PositiveOnly;
        arrow_len = 4;
      } else if (arrow + 3 < body.size() && body[arrow + 3] == '-') {
        pol = RulePolarity::NegativeOnly;
        arrow_len = 4;
      }
      std::string lhs_text = trim(body.substr(0, arrow));
      std::string rhs_text = trim(body.substr(arrow + arrow_len));
      ParseOptions strict{true};
      auto [lt, la] = parse_term_or_atom(lhs_text, th.signature, strict);
      try {
        if (lt) {
          if (pol != RulePolarity::Unpolarized)
            throw InputError("term rule '" + name + "' cannot be polarized" + where());
          RewriteRule r = RewriteRule::term_rule(
              name, lt, parse_term(rhs_text, th.signature, strict));
          th.rules.push_back(std::move(r));
        } else {
          RewriteRule r = RewriteRule::prop_rule(
              name, la, parse_prop(rhs_text, th.signature, strict), pol);
          th.rules.push_back(std::move(r));
        }
      } catch (const ParseError& e) {
        throw InputError("in rule '" + name + "': " + e.what() + where());
      }
    } else {
      throw InputError("unknown directive '" + kw + "'" + where());
    }
  }
  if (!named) throw InputError("theory text has no 'theory <name>' header");
  return th;
}

Theory load_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open theory file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_theory(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string print_theory(const Theory& th) {
  std::ostringstream os;
  os << "theory " << th.name << "\n";
  for (const auto& [f, k] : th.signature.funs) os << "fun " << f << " " << k << "\n";
  for (const auto& [p, k] : th.signature.preds) os << "pred " << p << " " << k << "\n";
  for (const auto& [o, d] : th.signature.infixes) {
    os << "infix " << o << " " << d.prec << " ";
    switch (d.assoc) {
      case InfixDecl::Assoc::Left: os << "left"; break;
      case InfixDecl::Assoc::Right: os << "right"; break;
      case InfixDecl::Assoc::None: os << "none"; break;
    }
    os << "\n";
  }
  for (const auto& r : th.rules) {
    os << "rule " << r.name << " : ";
    if (r.kind == RuleKind::TermRule) {
      os << print_term(r.term_lhs, th.signature) << " --> "
         << print_term(r.term_rhs, th.signature);
    } else {
      os << print_prop(r.atom_lhs, th.signature);
      switch (r.polarity) {
        case RulePolarity::Unpolarized: os << " --> "; break;
        case RulePolarity::PositiveOnly: os << " -->+ "; break;
        case RulePolarity::NegativeOnly: os << " -->- "; break;
      }
      os << print_prop(r.prop_rhs, th.signature);
    }
    os << "\n";
  }
  return os.str();
}

Theory merge_theories(const std::vector<Theory>& parts) {
  if (parts.empty()) throw InputError("no theories to merge");
  if (parts.size() == 1) return parts.front();
  Theory out;
  std::set<std::string> rule_names;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Theory& t = parts[i];
    out.name += (i ? "+" : "") + t.name;
    out.signature.merge(t.signature);
    for (const auto& r : t.rules) {
      if (!rule_names.insert(r.name).second)
        throw InputError("duplicate rule name '" + r.name + "' when merging theories");
      out.rules.push_back(r);
    }
  }
  return out;
}

}  // namespace dmt::rewrite
