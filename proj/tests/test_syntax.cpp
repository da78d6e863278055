#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"

using namespace dmt;
using testkit::gen_prop;
using testkit::gen_term;
using testkit::test_signature;

TEST_CASE("terms parse") {
  const Signature& sig = test_signature();
  SUBCASE("a constant") {
    TermPtr t = parse_term("0", sig);
    CHECK(t->kind == Term::Kind::App);
    CHECK(t->name == "0");
    CHECK(t->args.empty());
  }
  SUBCASE("numerals are towers of S over 0") {
    CHECK(term_eq(parse_term("4", sig), numeral(4)));
    CHECK(term_eq(parse_term("S(S(0)) + S(S(0))", sig),
                  Term::app("+", {numeral(2), numeral(2)})));
  }
  SUBCASE("infix is left-associative at one level") {
    CHECK(term_eq(parse_term("x + y + z", sig),
                  Term::app("+", {Term::app("+", {Term::var("x"), Term::var("y")}),
                                  Term::var("z")})));
  }
  SUBCASE("malformed input raises a located error") {
    CHECK_THROWS_AS(parse_term("S(x,", sig), ParseError);
    try {
      parse_term("S(x,", sig);
    } catch (const ParseError& e) {
      CHECK(e.line == 1);
      CHECK(e.col > 1);
    }
  }
  SUBCASE("arity mismatches are rejected") {
    CHECK_THROWS_AS(parse_term("S(x, y)", sig), ParseError);
    CHECK_THROWS_AS(parse_term("f()", sig), ParseError);
  }
  SUBCASE("strict mode rejects unknown symbols") {
    CHECK_THROWS_AS(parse_term("h(x)", sig, ParseOptions{true}), ParseError);
    CHECK(parse_term("h(x)", sig, ParseOptions{false}) != nullptr);
  }
  SUBCASE("inconsistent inferred arity is rejected even leniently") {
    CHECK_THROWS_AS(parse_term("g(h(x), h(x, y))", sig, ParseOptions{false}),
                    ParseError);
  }
}

TEST_CASE("propositions parse") {
  const Signature& sig = test_signature();
  SUBCASE("constants") {
    CHECK(parse_prop("true", sig)->kind == Prop::Kind::Top);
    CHECK(parse_prop("false", sig)->kind == Prop::Kind::Bottom);
  }
  SUBCASE("negation is sugar for implication into false") {
    PropPtr n = parse_prop("~p", sig);
    CHECK(n->kind == Prop::Kind::Implies);
    CHECK(n->lhs->kind == Prop::Kind::Atom);
    CHECK(n->lhs->name == "p");
    CHECK(n->rhs->kind == Prop::Kind::Bottom);
  }
  SUBCASE("quantified implication") {
    Signature s2 = sig;
    s2.declare_pred("in", 2);
    PropPtr f = parse_prop("forall z. (in(z,x) => in(z,y))", s2);
    REQUIRE(f->kind == Prop::Kind::Forall);
    CHECK(f->name == "z");
    REQUIRE(f->rhs->kind == Prop::Kind::Implies);
    CHECK(prop_eq(f->rhs->lhs, Prop::atom("in", {Term::var("z"), Term::var("x")})));
  }
  SUBCASE("precedence: & over | over =>, right-assoc =>") {
    PropPtr a = parse_prop("p & q(x) | r(x,y) => p", sig);
    REQUIRE(a->kind == Prop::Kind::Implies);
    CHECK(a->lhs->kind == Prop::Kind::Or);
    CHECK(a->lhs->lhs->kind == Prop::Kind::And);
    PropPtr b = parse_prop("p => q(x) => p", sig);
    CHECK(b->rhs->kind == Prop::Kind::Implies);
  }
  SUBCASE("<=> desugars to a conjunction of implications") {
    PropPtr e = parse_prop("p <=> q(x)", sig);
    REQUIRE(e->kind == Prop::Kind::And);
    CHECK(e->lhs->kind == Prop::Kind::Implies);
    CHECK(e->rhs->kind == Prop::Kind::Implies);
    CHECK(prop_eq(e->lhs->lhs, e->rhs->rhs));
  }
  SUBCASE("relational infix atoms") {
    PropPtr a = parse_prop("x + y = z & p", sig);
    REQUIRE(a->kind == Prop::Kind::And);
    CHECK(a->lhs->name == "=");
    CHECK(term_eq(a->lhs->args[0], Term::app("+", {Term::var("x"), Term::var("y")})));
  }
  SUBCASE("a parenthesized term can open an atom") {
    PropPtr a = parse_prop("(x + y) = z", sig);
    CHECK(a->name == "=");
  }
  SUBCASE("a bare term is not a proposition") {
    CHECK_THROWS_AS(parse_prop("S(x)", sig), ParseError);
    CHECK_THROWS_AS(parse_prop("4", sig), ParseError);
  }
}

TEST_CASE("substitution") {
  const Signature& sig = test_signature();
  SUBCASE("plain replacement") {
    PropPtr a = Prop::atom("=", {Term::var("x"), Term::var("x")});
    PropPtr b = Subst::single("x", numeral(1)).apply(a);
    CHECK(prop_eq(b, Prop::atom("=", {numeral(1), numeral(1)})));
  }
  SUBCASE("capture forces a rename") {
    // [y/x] (forall y. x = y)  ~>  forall y'. y = y'
    PropPtr a = Prop::forall("y", Prop::atom("=", {Term::var("x"), Term::var("y")}));
    PropPtr b = Subst::single("x", Term::var("y")).apply(a);
    REQUIRE(b->kind == Prop::Kind::Forall);
    CHECK(b->name != "y");
    CHECK(alpha_eq(b, Prop::forall("w", Prop::atom("=", {Term::var("y"),
                                                         Term::var("w")}))));
  }
  SUBCASE("substitution into an atom argument") {
    Signature s2 = sig;
    s2.declare_pred("in", 2);
    PropPtr a = parse_prop("in(z, x)", s2);
    PropPtr b = Subst::single("z", numeral(0)).apply(a);
    CHECK(prop_eq(b, Prop::atom("in", {numeral(0), Term::var("x")})));
  }
  SUBCASE("composition on variable-disjoint substitutions") {
    for (int i = 0; i < 200; ++i) {
      PropPtr a = gen_prop(3);
      // t's range is ground and s's domain is disjoint from t's, so applying
      // t then s equals applying the composed simultaneous map
      Subst t = Subst::single("y", numeral(testkit::pick(3)));
      TermPtr s_range = testkit::pick(2)
                            ? Term::app("g", {Term::var("z"), Term::var("w")})
                            : Term::app("S", {Term::var("z")});
      Subst s = Subst::single("x", s_range);
      PropPtr lhs = s.apply(t.apply(a));
      Subst composed;
      composed.bind("y", s.apply(*t.lookup("y")));
      composed.bind("x", s_range);
      PropPtr rhs = composed.apply(a);
      CHECK(alpha_eq(lhs, rhs));
    }
  }
}

TEST_CASE("alpha equivalence") {
  PropPtr px = Prop::forall("x", Prop::atom("q", {Term::var("x")}));
  PropPtr py = Prop::forall("y", Prop::atom("q", {Term::var("y")}));
  PropPtr pz = Prop::forall("y", Prop::atom("q", {Term::var("z")}));
  CHECK(alpha_eq(px, py));
  CHECK_FALSE(alpha_eq(px, pz));
  // shadowing binders
  PropPtr a = Prop::exists("x", Prop::forall("x", Prop::atom("q", {Term::var("x")})));
  PropPtr b = Prop::exists("y", Prop::forall("z", Prop::atom("q", {Term::var("z")})));
  CHECK(alpha_eq(a, b));
  PropPtr c = Prop::exists("y", Prop::forall("z", Prop::atom("q", {Term::var("y")})));
  CHECK_FALSE(alpha_eq(a, c));
}

TEST_CASE("free variables") {
  const Signature& sig = test_signature();
  CHECK(free_vars(Prop::forall("x", Prop::atom("r", {Term::var("x"), Term::var("y")}))) ==
        std::set<std::string>{"y"});
  CHECK(free_vars(parse_term("x + S(y)", sig)) == std::set<std::string>{"x", "y"});
  Signature s2 = sig;
  s2.declare_pred("in", 2);
  Context ctx({{"h", parse_prop("in(z, s)", s2)}});
  CHECK(free_vars(ctx) == std::set<std::string>{"z", "s"});
}

TEST_CASE("atom occurrence polarity") {
  PropPtr p = Prop::atom("p");
  PropPtr q = Prop::atom("q", {Term::var("x")});
  SUBCASE("implication flips its left side") {
    auto occs = atom_occurrences(Prop::implies(p, q), Polarity::Positive);
    REQUIRE(occs.size() == 2);
    CHECK(occs[0].polarity == Polarity::Negative);
    CHECK(occs[0].atom->name == "p");
    CHECK(occs[1].polarity == Polarity::Positive);
  }
  SUBCASE("double flip restores polarity") {
    PropPtr d = Prop::implies(Prop::implies(p, Prop::bottom()), Prop::bottom());
    auto occs = atom_occurrences(d, Polarity::Positive);
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].polarity == Polarity::Positive);
  }
  SUBCASE("a bare atom keeps the base polarity") {
    auto occs = atom_occurrences(q, Polarity::Negative);
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].polarity == Polarity::Negative);
  }
  SUBCASE("flipping the base negates every reported polarity") {
    for (int i = 0; i < 200; ++i) {
      PropPtr a = gen_prop(4);
      auto pos = atom_occurrences(a, Polarity::Positive);
      auto neg = atom_occurrences(a, Polarity::Negative);
      REQUIRE(pos.size() == neg.size());
      for (std::size_t k = 0; k < pos.size(); ++k) {
        CHECK(pos[k].path == neg[k].path);
        CHECK(pos[k].polarity == flip(neg[k].polarity));
      }
    }
  }
}

TEST_CASE("print / parse round trip") {
  const Signature& sig = test_signature();
  for (int i = 0; i < 200; ++i) {
    TermPtr t = gen_term(4);
    CHECK(term_eq(parse_term(print_term(t, sig), sig), t));
  }
  for (int i = 0; i < 200; ++i) {
    PropPtr p = gen_prop(4);
    CAPTURE(print_prop(p, sig));
    CHECK(prop_eq(parse_prop(print_prop(p, sig), sig), p));
  }
}

TEST_CASE("contexts reject duplicate hypothesis names") {
  CHECK_THROWS_AS(Context({{"h", Prop::top()}, {"h", Prop::bottom()}}), InputError);
  Context ctx({{"h", Prop::top()}});
  Context ext = ctx.extended("h", Prop::bottom());  // shadowing is fine
  REQUIRE(ext.lookup("h") != nullptr);
  CHECK((*ext.lookup("h"))->kind == Prop::Kind::Bottom);
}

TEST_CASE("the parser survives arbitrary input") {
  const Signature& sig = test_signature();
  std::mt19937 gen(0xfacade);
  const std::string alphabet = "abxyzSPQ01479 ()+=&|~<>.,'_#\"\\\t";
  for (int i = 0; i < 500; ++i) {
    std::string text;
    int len = 1 + (int)(gen() % 30);
    for (int k = 0; k < len; ++k) text += alphabet[gen() % alphabet.size()];
    try {
      parse_prop(text, sig);
    } catch (const ParseError&) {
    }
    try {
      parse_term(text, sig);
    } catch (const ParseError&) {
    }
  }
  CHECK(true);  // no crash, no non-ParseError escape
}
