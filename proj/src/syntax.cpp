#include "dmt/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>

namespace dmt {

// ---------------------------------------------------------------------------
// Construction and basic predicates
// ---------------------------------------------------------------------------

TermPtr Term::var(std::string name) {
  return std::make_shared<Term>(Term{Kind::Var, std::move(name), {}});
}

TermPtr Term::app(std::string fn, std::vector<TermPtr> args) {
  return std::make_shared<Term>(Term{Kind::App, std::move(fn), std::move(args)});
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!term_eq(a->args[i], b->args[i])) return false;
  return true;
}

TermPtr numeral(unsigned long long n) {
  TermPtr t = Term::app("0");
  for (unsigned long long i = 0; i < n; ++i) t = Term::app("S", {t});
  return t;
}

std::optional<unsigned long long> as_numeral(const TermPtr& t) {
  unsigned long long n = 0;
  const Term* cur = t.get();
  for (;;) {
    if (cur->kind != Term::Kind::App) return std::nullopt;
    if (cur->name == "0" && cur->args.empty()) return n;
    if (cur->name == "S" && cur->args.size() == 1) {
      ++n;
      cur = cur->args[0].get();
      continue;
    }
    return std::nullopt;
  }
}

static PropPtr make_prop(Prop p) { return std::make_shared<Prop>(std::move(p)); }

PropPtr Prop::atom(std::string pred, std::vector<TermPtr> args) {
  return make_prop({Kind::Atom, std::move(pred), std::move(args), nullptr, nullptr});
}
PropPtr Prop::top() { return make_prop({Kind::Top, "", {}, nullptr, nullptr}); }
PropPtr Prop::bottom() { return make_prop({Kind::Bottom, "", {}, nullptr, nullptr}); }
PropPtr Prop::conj(PropPtr a, PropPtr b) {
  return make_prop({Kind::And, "", {}, std::move(a), std::move(b)});
}
PropPtr Prop::disj(PropPtr a, PropPtr b) {
  return make_prop({Kind::Or, "", {}, std::move(a), std::move(b)});
}
PropPtr Prop::implies(PropPtr a, PropPtr b) {
  return make_prop({Kind::Implies, "", {}, std::move(a), std::move(b)});
}
PropPtr Prop::neg(PropPtr a) { return implies(std::move(a), bottom()); }
PropPtr Prop::forall(std::string x, PropPtr body) {
  return make_prop({Kind::Forall, std::move(x), {}, nullptr, std::move(body)});
}
PropPtr Prop::exists(std::string x, PropPtr body) {
  return make_prop({Kind::Exists, std::move(x), {}, nullptr, std::move(body)});
}

bool prop_eq(const PropPtr& a, const PropPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!term_eq(a->args[i], b->args[i])) return false;
  if ((a->lhs == nullptr) != (b->lhs == nullptr)) return false;
  if (a->lhs && !prop_eq(a->lhs, b->lhs)) return false;
  if ((a->rhs == nullptr) != (b->rhs == nullptr)) return false;
  if (a->rhs && !prop_eq(a->rhs, b->rhs)) return false;
  return true;
}

Polarity flip(Polarity p) {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

static void collect_occurrences(const PropPtr& p, Polarity pol, Path& path,
                                std::vector<AtomOccurrence>& out) {
  switch (p->kind) {
    case Prop::Kind::Atom:
      out.push_back({path, p, pol});
      return;
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return;
    case Prop::Kind::And:
    case Prop::Kind::Or:
      path.push_back(0);
      collect_occurrences(p->lhs, pol, path, out);
      path.back() = 1;
      collect_occurrences(p->rhs, pol, path, out);
      path.pop_back();
      return;
    case Prop::Kind::Implies:
      path.push_back(0);
      collect_occurrences(p->lhs, flip(pol), path, out);
      path.back() = 1;
      collect_occurrences(p->rhs, pol, path, out);
      path.pop_back();
      return;
    case Prop::Kind::Forall:
    case Prop::Kind::Exists:
      path.push_back(0);
      collect_occurrences(p->rhs, pol, path, out);
      path.pop_back();
      return;
  }
}

std::vector<AtomOccurrence> atom_occurrences(const PropPtr& p, Polarity base) {
  std::vector<AtomOccurrence> out;
  Path path;
  collect_occurrences(p, base, path, out);
  return out;
}

// ---------------------------------------------------------------------------
// Contexts
// ---------------------------------------------------------------------------

Context::Context(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& [name, prop] : entries_) {
    if (!seen.insert(name).second)
      throw InputError("duplicate hypothesis name '" + name + "' in context");
  }
}

Context Context::extended(const std::string& name, PropPtr p) const {
  Context out = *this;
  out.entries_.emplace_back(name, std::move(p));
  return out;
}

const PropPtr* Context::lookup(const std::string& name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Free variables, substitution, alpha-equivalence
// ---------------------------------------------------------------------------

static void term_vars(const TermPtr& t, std::set<std::string>& out) {
  if (t->kind == Term::Kind::Var) {
    out.insert(t->name);
    return;
  }
  for (const auto& a : t->args) term_vars(a, out);
}

static void prop_vars(const PropPtr& p, std::set<std::string> bound,
                      std::set<std::string>& out) {
  switch (p->kind) {
    case Prop::Kind::Atom: {
      std::set<std::string> vs;
      for (const auto& a : p->args) term_vars(a, vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies:
      prop_vars(p->lhs, bound, out);
      prop_vars(p->rhs, bound, out);
      return;
    case Prop::Kind::Forall:
    case Prop::Kind::Exists:
      bound.insert(p->name);
      prop_vars(p->rhs, std::move(bound), out);
      return;
  }
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  term_vars(t, out);
  return out;
}

std::set<std::string> free_vars(const PropPtr& p) {
  std::set<std::string> out;
  prop_vars(p, {}, out);
  return out;
}

std::set<std::string> free_vars(const Context& ctx) {
  std::set<std::string> out;
  for (const auto& [name, prop] : ctx.entries()) {
    auto vs = free_vars(prop);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string cand = base;
  while (taken.count(cand)) cand += '\'';
  return cand;
}

Subst Subst::single(const std::string& v, TermPtr t) {
  Subst s;
  s.map_[v] = std::move(t);
  return s;
}

const TermPtr* Subst::lookup(const std::string& v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

void Subst::bind(const std::string& v, TermPtr t) { map_[v] = std::move(t); }

void Subst::compose_bind(const std::string& v, const TermPtr& t) {
  Subst unit = Subst::single(v, t);
  for (auto& [k, u] : map_) u = unit.apply(u);
  map_[v] = t;
}

TermPtr Subst::apply(const TermPtr& t) const {
  if (map_.empty()) return t;
  if (t->kind == Term::Kind::Var) {
    if (const TermPtr* r = lookup(t->name)) return *r;
    return t;
  }
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    TermPtr a2 = apply(a);
    changed = changed || a2 != a;
    args.push_back(std::move(a2));
  }
  return changed ? Term::app(t->name, std::move(args)) : t;
}

PropPtr Subst::apply(const PropPtr& p) const {
  if (map_.empty()) return p;
  switch (p->kind) {
    case Prop::Kind::Atom: {
      std::vector<TermPtr> args;
      args.reserve(p->args.size());
      bool changed = false;
      for (const auto& a : p->args) {
        TermPtr a2 = apply(a);
        changed = changed || a2 != a;
        args.push_back(std::move(a2));
      }
      return changed ? Prop::atom(p->name, std::move(args)) : p;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return p;
    case Prop::Kind::And:
      return Prop::conj(apply(p->lhs), apply(p->rhs));
    case Prop::Kind::Or:
      return Prop::disj(apply(p->lhs), apply(p->rhs));
    case Prop::Kind::Implies:
      return Prop::implies(apply(p->lhs), apply(p->rhs));
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      // Restrict to bindings of variables free in the body, then rename the
      // bound variable if some range term would capture it.
      Subst inner;
      std::set<std::string> body_free = free_vars(p->rhs);
      for (const auto& [v, t] : map_)
        if (v != p->name && body_free.count(v)) inner.map_[v] = t;
      std::string x = p->name;
      PropPtr body = p->rhs;
      if (!inner.map_.empty()) {
        std::set<std::string> range_vars;
        for (const auto& [v, t] : inner.map_) term_vars(t, range_vars);
        if (range_vars.count(x)) {
          std::set<std::string> avoid = range_vars;
          avoid.insert(body_free.begin(), body_free.end());
          for (const auto& [v, t] : inner.map_) avoid.insert(v);
          std::string x2 = fresh_name(x, avoid);
          body = Subst::single(x, Term::var(x2)).apply(body);
          x = x2;
        }
        body = inner.apply(body);
      }
      if (x == p->name && body == p->rhs) return p;
      return p->kind == Prop::Kind::Forall ? Prop::forall(x, body)
                                           : Prop::exists(x, body);
    }
  }
  return p;
}

namespace {

// Stack of paired binder names; the innermost pairing wins.
struct RenamePairs {
  std::vector<std::pair<std::string, std::string>> pairs;

  bool vars_match(const std::string& a, const std::string& b) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
      if (it->first == a || it->second == b) return it->first == a && it->second == b;
    }
    return a == b;
  }
};

bool term_alpha(const TermPtr& a, const TermPtr& b, const RenamePairs& rn) {
  if (a->kind != b->kind) return false;
  if (a->kind == Term::Kind::Var) return rn.vars_match(a->name, b->name);
  if (a->name != b->name || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!term_alpha(a->args[i], b->args[i], rn)) return false;
  return true;
}

bool prop_alpha(const PropPtr& a, const PropPtr& b, RenamePairs& rn) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Prop::Kind::Atom: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!term_alpha(a->args[i], b->args[i], rn)) return false;
      return true;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return true;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies:
      return prop_alpha(a->lhs, b->lhs, rn) && prop_alpha(a->rhs, b->rhs, rn);
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      rn.pairs.emplace_back(a->name, b->name);
      bool ok = prop_alpha(a->rhs, b->rhs, rn);
      rn.pairs.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) { return term_eq(a, b); }

bool alpha_eq(const PropPtr& a, const PropPtr& b) {
  RenamePairs rn;
  return prop_alpha(a, b, rn);
}

bool alpha_eq_open(const PropPtr& a, const PropPtr& b,
                   const std::vector<std::pair<std::string, std::string>>& outer) {
  RenamePairs rn{outer};
  return prop_alpha(a, b, rn);
}

bool alpha_eq_open(const TermPtr& a, const TermPtr& b,
                   const std::vector<std::pair<std::string, std::string>>& outer) {
  RenamePairs rn{outer};
  return term_alpha(a, b, rn);
}

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

std::optional<int> Signature::fun_arity(const std::string& f) const {
  auto it = funs.find(f);
  if (it != funs.end()) return it->second;
  if (f == "0") return 0;  // numeral sugar
  if (f == "S" && !preds.count("S")) return 1;
  return std::nullopt;
}

std::optional<int> Signature::pred_arity(const std::string& p) const {
  auto it = preds.find(p);
  if (it != preds.end()) return it->second;
  return std::nullopt;
}

const InfixDecl* Signature::infix(const std::string& op) const {
  auto it = infixes.find(op);
  return it == infixes.end() ? nullptr : &it->second;
}

void Signature::declare_fun(const std::string& f, int arity) {
  if (preds.count(f))
    throw InputError("symbol '" + f + "' already declared as a predicate");
  auto [it, inserted] = funs.emplace(f, arity);
  if (!inserted && it->second != arity)
    throw InputError("function '" + f + "' redeclared with arity " +
                     std::to_string(arity) + " (was " + std::to_string(it->second) +
                     ")");
}

void Signature::declare_pred(const std::string& p, int arity) {
  if (funs.count(p))
    throw InputError("symbol '" + p + "' already declared as a function");
  auto [it, inserted] = preds.emplace(p, arity);
  if (!inserted && it->second != arity)
    throw InputError("predicate '" + p + "' redeclared with arity " +
                     std::to_string(arity) + " (was " + std::to_string(it->second) +
                     ")");
}

void Signature::declare_infix(InfixDecl d) {
  static const std::set<std::string> reserved = {"=>",  "<=>", "~",   "&", "|",
                                                 "-->", "-->+", "-->-", ":"};
  if (reserved.count(d.name))
    throw InputError("'" + d.name + "' is reserved and cannot be declared infix");
  auto [it, inserted] = infixes.emplace(d.name, d);
  if (!inserted && (it->second.prec != d.prec || it->second.assoc != d.assoc))
    throw InputError("conflicting infix declaration for '" + d.name + "'");
}

void Signature::merge(const Signature& other) {
  for (const auto& [f, k] : other.funs) declare_fun(f, k);
  for (const auto& [p, k] : other.preds) declare_pred(p, k);
  for (const auto& [o, d] : other.infixes) declare_infix(d);
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

ParseError::ParseError(const std::string& what, int line, int col)
    : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ")"),
      line(line),
      col(col) {}

namespace {

enum class Tok { Ident, Number, LParen, RParen, Comma, Dot, Op, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

bool is_ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum((unsigned char)c) || c == '_' || c == '\'';
}
bool is_op_char(char c) { return std::strchr("+-*/=<>~&|:^@!?%", c) != nullptr; }

class Lexer {
 public:
  Lexer(const std::string& text, std::vector<std::string> ops)
      : text_(text), ops_(std::move(ops)) {
    // longest known operator first when splitting symbol runs
    std::sort(ops_.begin(), ops_.end(), [](const std::string& a, const std::string& b) {
      return a.size() > b.size();
    });
    tokenize();
  }

  const Token& peek() const {
    return pos_ < tokens_.size() ? tokens_[pos_] : tokens_.back();
  }
  Token next() {
    Token t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  std::size_t mark() const { return pos_; }
  void reset(std::size_t m) { pos_ = m; }

 private:
  void tokenize() {
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k) {
        if (text_[i + k] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    while (i < text_.size()) {
      char c = text_[i];
      if (std::isspace((unsigned char)c)) {
        advance(1);
        continue;
      }
      if (c == '#') {  // comment to end of line
        while (i < text_.size() && text_[i] != '\n') advance(1);
        continue;
      }
      int tl = line, tc = col;
      if (is_ident_start(c)) {
        std::size_t j = i;
        while (j < text_.size() && is_ident_char(text_[j])) ++j;
        tokens_.push_back({Tok::Ident, text_.substr(i, j - i), tl, tc});
        advance(j - i);
        continue;
      }
      if (std::isdigit((unsigned char)c)) {
        std::size_t j = i;
        while (j < text_.size() && std::isdigit((unsigned char)text_[j])) ++j;
        tokens_.push_back({Tok::Number, text_.substr(i, j - i), tl, tc});
        advance(j - i);
        continue;
      }
      if (c == '(') { tokens_.push_back({Tok::LParen, "(", tl, tc}); advance(1); continue; }
      if (c == ')') { tokens_.push_back({Tok::RParen, ")", tl, tc}); advance(1); continue; }
      if (c == ',') { tokens_.push_back({Tok::Comma, ",", tl, tc}); advance(1); continue; }
      if (c == '.') { tokens_.push_back({Tok::Dot, ".", tl, tc}); advance(1); continue; }
      if (is_op_char(c)) {
        std::size_t j = i;
        while (j < text_.size() && is_op_char(text_[j])) ++j;
        std::string run = text_.substr(i, j - i);
        // split the run against the known operators, longest match first
        std::size_t k = 0;
        while (k < run.size()) {
          bool matched = false;
          for (const auto& op : ops_) {
            if (run.compare(k, op.size(), op) == 0) {
              tokens_.push_back({Tok::Op, op, tl, tc + (int)k});
              k += op.size();
              matched = true;
              break;
            }
          }
          if (!matched) {
            tokens_.push_back({Tok::Op, run.substr(k, 1), tl, tc + (int)k});
            k += 1;
          }
        }
        advance(j - i);
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
    }
    tokens_.push_back({Tok::End, "", line, col});
  }

  const std::string& text_;
  std::vector<std::string> ops_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class ExprParser {
 public:
  ExprParser(Lexer& lex, const Signature& sig, ParseOptions opts)
      : lex_(lex), sig_(sig), opts_(opts) {}

  TermPtr term() {
    TermPtr t = term_expr(0);
    ensure_no_pred_heads(t);
    return t;
  }

  PropPtr prop() { return prop_iff(); }

  // For rewrite-rule left/right sides: either a term or an atomic
  // proposition, decided by the head symbol.
  std::pair<TermPtr, PropPtr> term_or_atom() {
    ++relaxed_;
    TermPtr t = term_expr(0);
    --relaxed_;
    if (lex_.peek().kind == Tok::Op) {
      const std::string& op = lex_.peek().text;
      if (const InfixDecl* d = sig_.infix(op); d && sig_.pred_arity(op)) {
        Token opTok = lex_.next();
        TermPtr u = term_expr(d->prec + 1);
        check_symbol_pred(op, 2, opTok);
        ensure_no_pred_heads(t);
        ensure_no_pred_heads(u);
        return {nullptr, Prop::atom(op, {t, u})};
      }
    }
    if (t->kind == Term::Kind::App && sig_.pred_arity(t->name)) {
      check_symbol_pred(t->name, (int)t->args.size(), lex_.peek());
      for (const auto& a : t->args) ensure_no_pred_heads(a);
      return {nullptr, Prop::atom(t->name, t->args)};
    }
    if (t->kind == Term::Kind::Var && sig_.pred_arity(t->name) == 0)
      return {nullptr, Prop::atom(t->name)};
    ensure_no_pred_heads(t);
    return {t, nullptr};
  }

  void expect_end() {
    const Token& t = lex_.peek();
    if (t.kind != Tok::End)
      throw ParseError("trailing input after expression: '" + t.text + "'", t.line,
                       t.col);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = lex_.peek();
    throw ParseError(msg, t.line, t.col);
  }

  bool at_op(const char* op) const {
    const Token& t = lex_.peek();
    return t.kind == Tok::Op && t.text == op;
  }

  bool at_keyword(const char* kw) const {
    const Token& t = lex_.peek();
    return t.kind == Tok::Ident && t.text == kw;
  }

  // --- terms: precedence climbing over declared infix operators ---

  TermPtr term_expr(int min_prec) {
    TermPtr lhs = term_atom();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind != Tok::Op) break;
      const InfixDecl* d = sig_.infix(t.text);
      if (!d || d->prec < min_prec) break;
      if (sig_.pred_arity(t.text)) break;  // relational operators belong to atoms
      Token opTok = lex_.next();
      check_symbol_fun(opTok.text, 2, opTok);
      int next_min =
          d->assoc == InfixDecl::Assoc::Left ? d->prec + 1 : d->prec;
      if (d->assoc == InfixDecl::Assoc::None) next_min = d->prec + 1;
      TermPtr rhs = term_expr(next_min);
      if (d->assoc == InfixDecl::Assoc::None && lex_.peek().kind == Tok::Op &&
          lex_.peek().text == d->name)
        fail("operator '" + d->name + "' is not associative");
      lhs = Term::app(opTok.text, {lhs, rhs});
    }
    return lhs;
  }

  TermPtr term_atom() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Number: {
        Token num = lex_.next();
        return numeral(std::stoull(num.text));
      }
      case Tok::LParen: {
        lex_.next();
        TermPtr inner = term_expr(0);
        if (lex_.peek().kind != Tok::RParen) fail("expected ')'");
        lex_.next();
        return inner;
      }
      case Tok::Ident: {
        Token id = lex_.next();
        if (lex_.peek().kind == Tok::LParen) {
          std::vector<TermPtr> args = arg_list();
          if (relaxed_ > 0 && sig_.pred_arity(id.text)) {
            // possibly an atom head; the caller decides
            return Term::app(id.text, std::move(args));
          }
          check_symbol_fun(id.text, (int)args.size(), id);
          return Term::app(id.text, std::move(args));
        }
        if (auto a = sig_.fun_arity(id.text)) {
          if (*a == 0) return Term::app(id.text);
          throw ParseError("function '" + id.text + "' expects " + std::to_string(*a) +
                               " arguments",
                           id.line, id.col);
        }
        auto it = seen_funs_.find(id.text);
        if (it != seen_funs_.end() && it->second == 0) return Term::app(id.text);
        return Term::var(id.text);
      }
      default:
        fail("expected a term");
    }
  }

  std::vector<TermPtr> arg_list() {
    lex_.next();  // '('
    std::vector<TermPtr> args;
    if (lex_.peek().kind == Tok::RParen) {
      lex_.next();
      return args;
    }
    for (;;) {
      args.push_back(term_expr(0));
      if (lex_.peek().kind == Tok::Comma) {
        lex_.next();
        continue;
      }
      if (lex_.peek().kind == Tok::RParen) {
        lex_.next();
        return args;
      }
      fail("expected ',' or ')'");
    }
  }

  void ensure_no_pred_heads(const TermPtr& t) {
    if (t->kind == Term::Kind::App && sig_.pred_arity(t->name) &&
        !sig_.fun_arity(t->name)) {
      const Token& at = lex_.peek();
      throw ParseError("predicate '" + t->name + "' used in term position", at.line,
                       at.col);
    }
    for (const auto& a : t->args) ensure_no_pred_heads(a);
  }

  void check_symbol_fun(const std::string& f, int arity, const Token& at) {
    if (auto a = sig_.fun_arity(f)) {
      if (*a != arity)
        throw ParseError("function '" + f + "' has arity " + std::to_string(*a) +
                             ", applied to " + std::to_string(arity) + " arguments",
                         at.line, at.col);
      return;
    }
    if (sig_.pred_arity(f))
      throw ParseError("predicate '" + f + "' used in term position", at.line, at.col);
    if (opts_.strict)
      throw ParseError("unknown function symbol '" + f + "'", at.line, at.col);
    auto [it, inserted] = seen_funs_.emplace(f, arity);
    if (!inserted && it->second != arity)
      throw ParseError("symbol '" + f + "' used with arities " +
                           std::to_string(it->second) + " and " + std::to_string(arity),
                       at.line, at.col);
  }

  void check_symbol_pred(const std::string& p, int arity, const Token& at) {
    if (auto a = sig_.pred_arity(p)) {
      if (*a != arity)
        throw ParseError("predicate '" + p + "' has arity " + std::to_string(*a) +
                             ", applied to " + std::to_string(arity) + " arguments",
                         at.line, at.col);
      return;
    }
    if (sig_.fun_arity(p))
      throw ParseError("function '" + p + "' used as a predicate", at.line, at.col);
    if (opts_.strict)
      throw ParseError("unknown predicate symbol '" + p + "'", at.line, at.col);
    auto [it, inserted] = seen_preds_.emplace(p, arity);
    if (!inserted && it->second != arity)
      throw ParseError("predicate '" + p + "' used with arities " +
                           std::to_string(it->second) + " and " +
                           std::to_string(arity),
                       at.line, at.col);
  }

  // --- propositions ---

  PropPtr prop_iff() {
    PropPtr a = prop_implies();
    if (at_op("<=>")) {
      lex_.next();
      PropPtr b = prop_implies();
      if (at_op("<=>")) fail("'<=>' is not associative");
      // surface sugar; there is no biconditional node
      return Prop::conj(Prop::implies(a, b), Prop::implies(b, a));
    }
    return a;
  }

  PropPtr prop_implies() {
    PropPtr a = prop_or();
    if (at_op("=>")) {
      lex_.next();
      return Prop::implies(a, prop_implies());  // right-associative
    }
    return a;
  }

  PropPtr prop_or() {
    PropPtr a = prop_and();
    while (at_op("|")) {
      lex_.next();
      a = Prop::disj(a, prop_and());
    }
    return a;
  }

  PropPtr prop_and() {
    PropPtr a = prop_unary();
    while (at_op("&")) {
      lex_.next();
      a = Prop::conj(a, prop_unary());
    }
    return a;
  }

  PropPtr prop_unary() {
    if (at_op("~")) {
      lex_.next();
      return Prop::neg(prop_unary());
    }
    if (at_keyword("forall") || at_keyword("exists")) return quantifier();
    if (at_keyword("true")) {
      lex_.next();
      return Prop::top();
    }
    if (at_keyword("false")) {
      lex_.next();
      return Prop::bottom();
    }
    if (lex_.peek().kind == Tok::LParen) {
      // Either a parenthesized proposition or a parenthesized term starting
      // an atom; try the proposition reading first and fall back.
      std::size_t m = lex_.mark();
      try {
        lex_.next();
        PropPtr inner = prop_iff();
        if (lex_.peek().kind != Tok::RParen) fail("expected ')'");
        lex_.next();
        return inner;
      } catch (const ParseError&) {
        lex_.reset(m);
        return atom_prop();
      }
    }
    return atom_prop();
  }

  PropPtr quantifier() {
    Token q = lex_.next();
    if (lex_.peek().kind != Tok::Ident) fail("expected a bound variable name");
    Token x = lex_.next();
    if (lex_.peek().kind != Tok::Dot) fail("expected '.' after the bound variable");
    lex_.next();
    PropPtr body = prop_iff();
    return q.text == "forall" ? Prop::forall(x.text, body)
                              : Prop::exists(x.text, body);
  }

  // A relational infix between two terms, a predicate application, or a bare
  // 0-ary predicate.
  PropPtr atom_prop() {
    const Token at = lex_.peek();
    ++relaxed_;
    TermPtr t = term_expr(0);
    --relaxed_;
    if (lex_.peek().kind == Tok::Op) {
      const std::string& op = lex_.peek().text;
      if (const InfixDecl* d = sig_.infix(op);
          d && (sig_.pred_arity(op) || (!opts_.strict && !sig_.fun_arity(op)))) {
        Token opTok = lex_.next();
        TermPtr u = term_expr(d->prec + 1);
        check_symbol_pred(op, 2, opTok);
        ensure_no_pred_heads(t);
        ensure_no_pred_heads(u);
        return Prop::atom(op, {t, u});
      }
    }
    if (t->kind == Term::Kind::Var) {
      check_symbol_pred(t->name, 0, at);
      return Prop::atom(t->name);
    }
    if (as_numeral(t))
      throw ParseError("expected a proposition, found a term", at.line, at.col);
    if (sig_.fun_arity(t->name))
      throw ParseError("expected a proposition, found a term headed by function '" +
                           t->name + "'",
                       at.line, at.col);
    check_symbol_pred(t->name, (int)t->args.size(), at);
    for (const auto& a : t->args) ensure_no_pred_heads(a);
    return Prop::atom(t->name, t->args);
  }

  Lexer& lex_;
  const Signature& sig_;
  ParseOptions opts_;
  int relaxed_ = 0;
  std::map<std::string, int> seen_funs_;
  std::map<std::string, int> seen_preds_;
};

std::vector<std::string> known_ops(const Signature& sig) {
  std::vector<std::string> ops = {"<=>", "=>", "-->+", "-->-", "-->",
                                  "~",   "&",  "|",    ":"};
  for (const auto& [name, d] : sig.infixes) ops.push_back(name);
  return ops;
}

}  // namespace

TermPtr parse_term(const std::string& text, const Signature& sig, ParseOptions opts) {
  Lexer lex(text, known_ops(sig));
  ExprParser p(lex, sig, opts);
  TermPtr t = p.term();
  p.expect_end();
  return t;
}

PropPtr parse_prop(const std::string& text, const Signature& sig, ParseOptions opts) {
  Lexer lex(text, known_ops(sig));
  ExprParser p(lex, sig, opts);
  PropPtr q = p.prop();
  p.expect_end();
  return q;
}

std::pair<TermPtr, PropPtr> parse_term_or_atom(const std::string& text,
                                               const Signature& sig,
                                               ParseOptions opts) {
  Lexer lex(text, known_ops(sig));
  ExprParser p(lex, sig, opts);
  auto result = p.term_or_atom();
  p.expect_end();
  return result;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Connective binding strength, loosest first: => then | then & then ~.
constexpr int kPrecImplies = 2;
constexpr int kPrecOr = 3;
constexpr int kPrecAnd = 4;
constexpr int kPrecTop = 1;

void print_term_rec(std::ostringstream& os, const TermPtr& t, const Signature& sig,
                    int min_prec) {
  if (auto n = as_numeral(t)) {
    os << *n;
    return;
  }
  if (t->kind == Term::Kind::Var) {
    os << t->name;
    return;
  }
  const InfixDecl* d = t->args.size() == 2 ? sig.infix(t->name) : nullptr;
  if (d) {
    bool parens = d->prec < min_prec;
    if (parens) os << '(';
    int lp = d->assoc == InfixDecl::Assoc::Left ? d->prec : d->prec + 1;
    int rp = d->assoc == InfixDecl::Assoc::Right ? d->prec : d->prec + 1;
    print_term_rec(os, t->args[0], sig, lp);
    os << ' ' << t->name << ' ';
    print_term_rec(os, t->args[1], sig, rp);
    if (parens) os << ')';
    return;
  }
  os << t->name;
  if (!t->args.empty()) {
    os << '(';
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) os << ", ";
      print_term_rec(os, t->args[i], sig, 0);
    }
    os << ')';
  }
}

bool is_negation(const PropPtr& p) {
  return p->kind == Prop::Kind::Implies && p->rhs->kind == Prop::Kind::Bottom;
}

void print_prop_rec(std::ostringstream& os, const PropPtr& p, const Signature& sig,
                    int min_prec) {
  switch (p->kind) {
    case Prop::Kind::Atom: {
      const InfixDecl* d = p->args.size() == 2 ? sig.infix(p->name) : nullptr;
      if (d) {
        print_term_rec(os, p->args[0], sig, d->prec + 1);
        os << ' ' << p->name << ' ';
        print_term_rec(os, p->args[1], sig, d->prec + 1);
        return;
      }
      os << p->name;
      if (!p->args.empty()) {
        os << '(';
        for (std::size_t i = 0; i < p->args.size(); ++i) {
          if (i) os << ", ";
          print_term_rec(os, p->args[i], sig, 0);
        }
        os << ')';
      }
      return;
    }
    case Prop::Kind::Top:
      os << "true";
      return;
    case Prop::Kind::Bottom:
      os << "false";
      return;
    case Prop::Kind::And:
    case Prop::Kind::Or: {
      int prec = p->kind == Prop::Kind::And ? kPrecAnd : kPrecOr;
      const char* op = p->kind == Prop::Kind::And ? " & " : " | ";
      bool parens = prec < min_prec;
      if (parens) os << '(';
      print_prop_rec(os, p->lhs, sig, prec);  // left-assoc chains stay flat
      os << op;
      print_prop_rec(os, p->rhs, sig, prec + 1);
      if (parens) os << ')';
      return;
    }
    case Prop::Kind::Implies: {
      if (is_negation(p)) {
        os << '~';
        print_prop_rec(os, p->lhs, sig, kPrecAnd + 1);
        return;
      }
      bool parens = kPrecImplies < min_prec;
      if (parens) os << '(';
      print_prop_rec(os, p->lhs, sig, kPrecImplies + 1);
      os << " => ";
      print_prop_rec(os, p->rhs, sig, kPrecImplies);  // right-associative
      if (parens) os << ')';
      return;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      bool parens = min_prec > kPrecTop;
      if (parens) os << '(';
      os << (p->kind == Prop::Kind::Forall ? "forall " : "exists ") << p->name << ". ";
      print_prop_rec(os, p->rhs, sig, kPrecTop);
      if (parens) os << ')';
      return;
    }
  }
}

}  // namespace

std::string print_term(const TermPtr& t, const Signature& sig) {
  std::ostringstream os;
  print_term_rec(os, t, sig, 0);
  return os.str();
}

std::string print_prop(const PropPtr& p, const Signature& sig) {
  std::ostringstream os;
  print_prop_rec(os, p, sig, kPrecTop);
  return os.str();
}

}  // namespace dmt
