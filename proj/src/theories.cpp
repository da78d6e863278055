#include "dmt/theories.hpp"

#include <fstream>
#include <sstream>

namespace dmt::theories {

namespace {

const char* kArith = R"(theory arith
fun 0 0
fun S 1
fun + 2
pred = 2
infix + 6 left
infix = 4 none
rule plus0 : 0 + y --> y
rule plusS : S(x) + y --> S(x + y)
rule eq00 : 0 = 0 --> true
rule eqS0 : S(x) = 0 --> false
rule eq0S : 0 = S(y) --> false
rule eqSS : S(x) = S(y) --> x = y
)";

const char* kSubset = R"(theory subset
pred sub 2
pred in 2
rule subdef : sub(x, y) --> forall z. (in(z, x) => in(z, y))
)";

const char* kUnionUnpolarized = R"(theory union_unpolarized
pred in 2
fun cup 2
rule cupdef : in(x, cup(y, z)) --> in(x, y) | in(x, z)
)";

const char* kUnionPolarized = R"(theory union_polarized
pred in 2
fun cup 2
rule cupn : in(x, cup(y, z)) -->- in(x, y) | in(x, z)
rule cupp1 : in(x, cup(y, z)) -->+ in(x, y)
rule cupp2 : in(x, cup(y, z)) -->+ in(x, z)
)";

const char* kLoopPQ = R"(theory loopPQ
pred P 0
pred Q 0
rule loop : P --> P => Q
)";

}  // namespace

std::vector<std::string> builtin_names() {
  return {"arith", "subset", "union_unpolarized", "union_polarized", "loopPQ"};
}

bool is_builtin(const std::string& name) {
  for (const auto& n : builtin_names())
    if (n == name) return true;
  return false;
}

rewrite::Theory builtin(const std::string& name) {
  if (name == "arith") return rewrite::parse_theory(kArith);
  if (name == "subset") return rewrite::parse_theory(kSubset);
  if (name == "union_unpolarized") return rewrite::parse_theory(kUnionUnpolarized);
  if (name == "union_polarized") return rewrite::parse_theory(kUnionPolarized);
  if (name == "loopPQ") return rewrite::parse_theory(kLoopPQ);
  throw InputError("unknown builtin theory '" + name + "'");
}

// ---------------------------------------------------------------------------
// Orientation heuristic
// ---------------------------------------------------------------------------

namespace {

PropPtr strip_foralls(const PropPtr& p) {
  PropPtr cur = p;
  while (cur->kind == Prop::Kind::Forall) cur = cur->rhs;
  return cur;
}

int term_size(const TermPtr& t) {
  int n = 1;
  for (const auto& a : t->args) n += term_size(a);
  return n;
}

bool is_strict_subterm(const TermPtr& u, const TermPtr& t) {
  for (const auto& a : t->args) {
    if (term_eq(u, a) || is_strict_subterm(u, a)) return true;
  }
  return false;
}

// u is a strict subterm of t, or an application whose arguments all are
// (recursively); this is what lets S(x) + y --> S(x + y) orient even though
// the two sides have equal size.
bool subterm_built(const TermPtr& u, const TermPtr& t) {
  if (is_strict_subterm(u, t)) return true;
  if (u->kind != Term::Kind::App || u->args.empty()) return false;
  for (const auto& a : u->args)
    if (!subterm_built(a, t)) return false;
  return true;
}

bool fv_subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& v : a)
    if (!b.count(v)) return false;
  return true;
}

// An axiom core of the form (P => A) & (A => P), i.e. a desugared
// biconditional with an atomic side.
bool match_biconditional(const PropPtr& core, PropPtr& atom, PropPtr& body) {
  if (core->kind != Prop::Kind::And) return false;
  const PropPtr& l = core->lhs;
  const PropPtr& r = core->rhs;
  if (l->kind != Prop::Kind::Implies || r->kind != Prop::Kind::Implies) return false;
  if (!alpha_eq(l->lhs, r->rhs) || !alpha_eq(l->rhs, r->lhs)) return false;
  if (l->lhs->kind == Prop::Kind::Atom) {
    atom = l->lhs;
    body = l->rhs;
    return true;
  }
  if (l->rhs->kind == Prop::Kind::Atom) {
    atom = l->rhs;
    body = l->lhs;
    return true;
  }
  return false;
}

}  // namespace

OrientResult orient(const AxiomSet& axioms) {
  OrientResult out;
  out.theory.name = axioms.name;
  out.theory.signature = axioms.signature;
  out.residual.name = axioms.name + "_residual";
  out.residual.signature = axioms.signature;

  for (const auto& ax : axioms.axioms) {
    PropPtr core = strip_foralls(ax.prop);

    PropPtr atom, body;
    if (match_biconditional(core, atom, body) &&
        fv_subset(free_vars(body), free_vars(atom))) {
      out.theory.rules.push_back(rewrite::RewriteRule::prop_rule(
          ax.name, atom, body, rewrite::RulePolarity::Unpolarized));
      continue;
    }

    if (core->kind == Prop::Kind::Atom && core->name == "=" && core->args.size() == 2) {
      const TermPtr& t = core->args[0];
      const TermPtr& u = core->args[1];
      if (t->kind != Term::Kind::Var && fv_subset(free_vars(u), free_vars(t)) &&
          (term_size(u) < term_size(t) || subterm_built(u, t))) {
        out.theory.rules.push_back(rewrite::RewriteRule::term_rule(ax.name, t, u));
        continue;
      }
    }

    if (core->kind == Prop::Kind::Implies) {
      const PropPtr& l = core->lhs;
      const PropPtr& r = core->rhs;
      // P => A: reduce P as a hypothesis, never as a goal.
      if (l->kind == Prop::Kind::Atom && fv_subset(free_vars(r), free_vars(l))) {
        out.theory.rules.push_back(rewrite::RewriteRule::prop_rule(
            ax.name, l, r, rewrite::RulePolarity::NegativeOnly));
        continue;
      }
      // A => P: to prove the goal P it suffices to prove A.
      if (r->kind == Prop::Kind::Atom && fv_subset(free_vars(l), free_vars(r))) {
        out.theory.rules.push_back(rewrite::RewriteRule::prop_rule(
            ax.name, r, l, rewrite::RulePolarity::PositiveOnly));
        continue;
      }
    }

    out.residual.axioms.push_back(ax);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Axiom files
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

AxiomSet parse_axioms(const std::string& text) {
  AxiomSet ax;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool named = false;
  std::set<std::string> names;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    auto where = [&] { return " (line " + std::to_string(lineno) + ")"; };
    if (kw == "axioms") {
      ls >> ax.name;
      if (ax.name.empty()) throw InputError("missing axiom set name" + where());
      named = true;
    } else if (kw == "fun" || kw == "pred") {
      std::string sym;
      int arity = -1;
      ls >> sym >> arity;
      if (sym.empty() || arity < 0)
        throw InputError("expected '" + kw + " <symbol> <arity>'" + where());
      if (kw == "fun")
        ax.signature.declare_fun(sym, arity);
      else
        ax.signature.declare_pred(sym, arity);
    } else if (kw == "infix") {
      std::string sym, assoc;
      int prec = -1;
      ls >> sym >> prec >> assoc;
      if (sym.empty() || prec < 0 || assoc.empty())
        throw InputError("expected 'infix <symbol> <prec> <left|right|none>'" + where());
      InfixDecl d{sym, prec, InfixDecl::Assoc::None};
      if (assoc == "left")
        d.assoc = InfixDecl::Assoc::Left;
      else if (assoc == "right")
        d.assoc = InfixDecl::Assoc::Right;
      else if (assoc != "none")
        throw InputError("bad associativity '" + assoc + "'" + where());
      ax.signature.declare_infix(d);
    } else if (kw == "axiom") {
      std::string rest;
      std::getline(ls, rest);
      auto colon = rest.find(':');
      if (colon == std::string::npos)
        throw InputError("expected 'axiom <name> : <proposition>'" + where());
      std::string name = trim(rest.substr(0, colon));
      std::string body = trim(rest.substr(colon + 1));
      if (name.empty()) throw InputError("missing axiom name" + where());
      if (!names.insert(name).second)
        throw InputError("duplicate axiom name '" + name + "'" + where());
      PropPtr p;
      try {
        p = parse_prop(body, ax.signature, ParseOptions{true});
      } catch (const ParseError& e) {
        throw InputError("in axiom '" + name + "': " + e.what());
      }
      auto fv = free_vars(p);
      bool closed = fv.empty();
      for (auto it = fv.rbegin(); it != fv.rend(); ++it) p = Prop::forall(*it, p);
      ax.axioms.push_back({name, p, closed});
    } else {
      throw InputError("unknown directive '" + kw + "'" + where());
    }
  }
  if (!named) throw InputError("axiom text has no 'axioms <name>' header");
  return ax;
}

AxiomSet load_axiom_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open axiom file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_axioms(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string print_axioms(const AxiomSet& ax) {
  std::ostringstream os;
  os << "axioms " << ax.name << "\n";
  for (const auto& [f, k] : ax.signature.funs) os << "fun " << f << " " << k << "\n";
  for (const auto& [p, k] : ax.signature.preds) os << "pred " << p << " " << k << "\n";
  for (const auto& [o, d] : ax.signature.infixes) {
    os << "infix " << o << " " << d.prec << " ";
    switch (d.assoc) {
      case InfixDecl::Assoc::Left: os << "left"; break;
      case InfixDecl::Assoc::Right: os << "right"; break;
      case InfixDecl::Assoc::None: os << "none"; break;
    }
    os << "\n";
  }
  for (const auto& a : ax.axioms)
    os << "axiom " << a.name << " : " << print_prop(a.prop, ax.signature) << "\n";
  return os.str();
}

}  // namespace dmt::theories
