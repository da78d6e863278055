#include "dmt/ndproof.hpp"

#include <fstream>
#include <sstream>

namespace dmt::ndproof {

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace {

ProofPtr mk(Proof p) { return std::make_shared<Proof>(std::move(p)); }

}  // namespace

ProofPtr Proof::axiom(std::string hyp) {
  return mk({Kind::Axiom, std::move(hyp), "", "", nullptr, nullptr, {}});
}
ProofPtr Proof::top_intro() {
  return mk({Kind::TopIntro, "", "", "", nullptr, nullptr, {}});
}
ProofPtr Proof::bot_elim(PropPtr target, ProofPtr major) {
  return mk({Kind::BotElim, "", "", "", std::move(target), nullptr, {std::move(major)}});
}
ProofPtr Proof::and_intro(ProofPtr l, ProofPtr r) {
  return mk({Kind::AndIntro, "", "", "", nullptr, nullptr, {std::move(l), std::move(r)}});
}
ProofPtr Proof::and_elim_l(PropPtr stated, ProofPtr major) {
  return mk({Kind::AndElimL, "", "", "", std::move(stated), nullptr, {std::move(major)}});
}
ProofPtr Proof::and_elim_r(PropPtr stated, ProofPtr major) {
  return mk({Kind::AndElimR, "", "", "", std::move(stated), nullptr, {std::move(major)}});
}
ProofPtr Proof::or_intro_l(PropPtr stated, ProofPtr premise) {
  return mk({Kind::OrIntroL, "", "", "", std::move(stated), nullptr, {std::move(premise)}});
}
ProofPtr Proof::or_intro_r(PropPtr stated, ProofPtr premise) {
  return mk({Kind::OrIntroR, "", "", "", std::move(stated), nullptr, {std::move(premise)}});
}
ProofPtr Proof::or_elim(ProofPtr major, std::string hypL, ProofPtr left,
                        std::string hypR, ProofPtr right) {
  return mk({Kind::OrElim, std::move(hypL), std::move(hypR), "", nullptr, nullptr,
             {std::move(major), std::move(left), std::move(right)}});
}
ProofPtr Proof::imp_intro(std::string hyp, PropPtr ante, ProofPtr body) {
  return mk({Kind::ImpIntro, std::move(hyp), "", "", std::move(ante), nullptr,
             {std::move(body)}});
}
ProofPtr Proof::imp_elim(ProofPtr major, ProofPtr arg) {
  return mk({Kind::ImpElim, "", "", "", nullptr, nullptr,
             {std::move(major), std::move(arg)}});
}
ProofPtr Proof::all_intro(std::string var, PropPtr body, ProofPtr premise) {
  return mk({Kind::AllIntro, "", "", std::move(var), std::move(body), nullptr,
             {std::move(premise)}});
}
ProofPtr Proof::all_elim(std::string var, PropPtr body, TermPtr witness,
                         ProofPtr major) {
  return mk({Kind::AllElim, "", "", std::move(var), std::move(body),
             std::move(witness), {std::move(major)}});
}
ProofPtr Proof::ex_intro(std::string var, PropPtr body, TermPtr witness,
                         ProofPtr premise) {
  return mk({Kind::ExIntro, "", "", std::move(var), std::move(body),
             std::move(witness), {std::move(premise)}});
}
ProofPtr Proof::ex_elim(ProofPtr major, std::string hyp, std::string var,
                        PropPtr body, ProofPtr branch) {
  return mk({Kind::ExElim, std::move(hyp), "", std::move(var), std::move(body),
             nullptr, {std::move(major), std::move(branch)}});
}

std::string last_rule(const ProofPtr& p) {
  switch (p->kind) {
    case Proof::Kind::Axiom: return "axiom";
    case Proof::Kind::TopIntro: return "⊤-intro";
    case Proof::Kind::BotElim: return "⊥-elim";
    case Proof::Kind::AndIntro: return "∧-intro";
    case Proof::Kind::AndElimL:
    case Proof::Kind::AndElimR: return "∧-elim";
    case Proof::Kind::OrIntroL:
    case Proof::Kind::OrIntroR: return "∨-intro";
    case Proof::Kind::OrElim: return "∨-elim";
    case Proof::Kind::ImpIntro: return "⇒-intro";
    case Proof::Kind::ImpElim: return "⇒-elim";
    case Proof::Kind::AllIntro: return "∀-intro";
    case Proof::Kind::AllElim: return "∀-elim";
    case Proof::Kind::ExIntro: return "∃-intro";
    case Proof::Kind::ExElim: return "∃-elim";
  }
  return "?";
}

bool is_intro(const ProofPtr& p) {
  switch (p->kind) {
    case Proof::Kind::TopIntro:
    case Proof::Kind::AndIntro:
    case Proof::Kind::OrIntroL:
    case Proof::Kind::OrIntroR:
    case Proof::Kind::ImpIntro:
    case Proof::Kind::AllIntro:
    case Proof::Kind::ExIntro:
      return true;
    default:
      return false;
  }
}

bool is_elim(const ProofPtr& p) {
  switch (p->kind) {
    case Proof::Kind::BotElim:
    case Proof::Kind::AndElimL:
    case Proof::Kind::AndElimR:
    case Proof::Kind::OrElim:
    case Proof::Kind::ImpElim:
    case Proof::Kind::AllElim:
    case Proof::Kind::ExElim:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Free names
// ---------------------------------------------------------------------------

std::set<std::string> free_hyps(const ProofPtr& p) {
  std::set<std::string> out;
  switch (p->kind) {
    case Proof::Kind::Axiom:
      out.insert(p->hyp);
      return out;
    case Proof::Kind::ImpIntro: {
      out = free_hyps(p->subs[0]);
      out.erase(p->hyp);
      return out;
    }
    case Proof::Kind::OrElim: {
      out = free_hyps(p->subs[0]);
      auto l = free_hyps(p->subs[1]);
      l.erase(p->hyp);
      auto r = free_hyps(p->subs[2]);
      r.erase(p->hyp2);
      out.insert(l.begin(), l.end());
      out.insert(r.begin(), r.end());
      return out;
    }
    case Proof::Kind::ExElim: {
      out = free_hyps(p->subs[0]);
      auto b = free_hyps(p->subs[1]);
      b.erase(p->hyp);
      out.insert(b.begin(), b.end());
      return out;
    }
    default: {
      for (const auto& s : p->subs) {
        auto f = free_hyps(s);
        out.insert(f.begin(), f.end());
      }
      return out;
    }
  }
}

std::set<std::string> free_proof_vars(const ProofPtr& p) {
  std::set<std::string> out;
  auto add_prop = [&](const PropPtr& q) {
    if (!q) return;
    auto f = free_vars(q);
    out.insert(f.begin(), f.end());
  };
  auto add_term = [&](const TermPtr& t) {
    if (!t) return;
    auto f = free_vars(t);
    out.insert(f.begin(), f.end());
  };
  switch (p->kind) {
    case Proof::Kind::AllIntro: {
      add_prop(p->prop);
      auto f = free_proof_vars(p->subs[0]);
      out.insert(f.begin(), f.end());
      out.erase(p->var);
      return out;
    }
    case Proof::Kind::AllElim:
    case Proof::Kind::ExIntro: {
      add_prop(p->prop);
      out.erase(p->var);
      add_term(p->term);
      auto f = free_proof_vars(p->subs[0]);
      out.insert(f.begin(), f.end());
      return out;
    }
    case Proof::Kind::ExElim: {
      add_prop(p->prop);
      auto b = free_proof_vars(p->subs[1]);
      out.insert(b.begin(), b.end());
      out.erase(p->var);
      auto m = free_proof_vars(p->subs[0]);
      out.insert(m.begin(), m.end());
      return out;
    }
    default: {
      add_prop(p->prop);
      add_term(p->term);
      for (const auto& s : p->subs) {
        auto f = free_proof_vars(s);
        out.insert(f.begin(), f.end());
      }
      return out;
    }
  }
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

namespace {

ProofPtr with_subs(const ProofPtr& p, std::vector<ProofPtr> subs) {
  Proof q = *p;
  q.subs = std::move(subs);
  return std::make_shared<Proof>(std::move(q));
}

}  // namespace

ProofPtr subst_var(const ProofPtr& p, const std::string& x, const TermPtr& t) {
  if (!free_proof_vars(p).count(x)) return p;
  Subst s = Subst::single(x, t);
  std::set<std::string> tfv = free_vars(t);

  auto rec = [&](const ProofPtr& q) { return subst_var(q, x, t); };

  switch (p->kind) {
    case Proof::Kind::Axiom:
    case Proof::Kind::TopIntro:
      return p;
    case Proof::Kind::AllIntro: {
      if (p->var == x) return p;
      if (tfv.count(p->var)) {
        std::set<std::string> avoid = tfv;
        auto pv = free_proof_vars(p);
        avoid.insert(pv.begin(), pv.end());
        avoid.insert(x);
        std::string v2 = fresh_name(p->var, avoid);
        TermPtr v2t = Term::var(v2);
        ProofPtr renamed = Proof::all_intro(
            v2, Subst::single(p->var, v2t).apply(p->prop),
            subst_var(p->subs[0], p->var, v2t));
        return subst_var(renamed, x, t);
      }
      return Proof::all_intro(p->var, s.apply(p->prop), rec(p->subs[0]));
    }
    case Proof::Kind::AllElim:
    case Proof::Kind::ExIntro: {
      PropPtr body = p->prop;
      std::string v = p->var;
      if (v != x) {
        if (tfv.count(v)) {
          std::set<std::string> avoid = tfv;
          auto bf = free_vars(body);
          avoid.insert(bf.begin(), bf.end());
          avoid.insert(x);
          std::string v2 = fresh_name(v, avoid);
          body = Subst::single(v, Term::var(v2)).apply(body);
          v = v2;
        }
        body = s.apply(body);
      }
      TermPtr w = s.apply(p->term);
      ProofPtr sub = rec(p->subs[0]);
      return p->kind == Proof::Kind::AllElim ? Proof::all_elim(v, body, w, sub)
                                             : Proof::ex_intro(v, body, w, sub);
    }
    case Proof::Kind::ExElim: {
      if (p->var == x)
        return Proof::ex_elim(rec(p->subs[0]), p->hyp, p->var, p->prop, p->subs[1]);
      if (tfv.count(p->var)) {
        // rename the bound variable out of the way, then substitute
        std::set<std::string> avoid = tfv;
        auto pv = free_proof_vars(p->subs[1]);
        avoid.insert(pv.begin(), pv.end());
        auto bf = free_vars(p->prop);
        avoid.insert(bf.begin(), bf.end());
        avoid.insert(x);
        std::string v2 = fresh_name(p->var, avoid);
        TermPtr v2t = Term::var(v2);
        ProofPtr renamed = Proof::ex_elim(
            p->subs[0], p->hyp, v2, Subst::single(p->var, v2t).apply(p->prop),
            subst_var(p->subs[1], p->var, v2t));
        return subst_var(renamed, x, t);
      }
      return Proof::ex_elim(rec(p->subs[0]), p->hyp, p->var, s.apply(p->prop),
                            rec(p->subs[1]));
    }
    default: {
      Proof q = *p;
      if (q.prop) q.prop = s.apply(q.prop);
      if (q.term) q.term = s.apply(q.term);
      q.subs.clear();
      for (const auto& sub : p->subs) q.subs.push_back(rec(sub));
      return std::make_shared<Proof>(std::move(q));
    }
  }
}

ProofPtr subst_hyp(const ProofPtr& p, const std::string& h, const ProofPtr& r) {
  if (!free_hyps(p).count(h)) return p;
  std::set<std::string> rhyps = free_hyps(r);
  std::set<std::string> rvars = free_proof_vars(r);

  auto rec = [&](const ProofPtr& q) { return subst_hyp(q, h, r); };

  // Renames a hypothesis binder out of the way of r's free hypotheses.
  auto fresh_hyp = [&](const std::string& name, const ProofPtr& scope) {
    std::set<std::string> avoid = rhyps;
    auto sh = free_hyps(scope);
    avoid.insert(sh.begin(), sh.end());
    avoid.insert(h);
    return fresh_name(name, avoid);
  };

  switch (p->kind) {
    case Proof::Kind::Axiom:
      return p->hyp == h ? r : p;
    case Proof::Kind::TopIntro:
      return p;
    case Proof::Kind::ImpIntro: {
      if (p->hyp == h) return p;
      if (rhyps.count(p->hyp)) {
        std::string h2 = fresh_hyp(p->hyp, p->subs[0]);
        ProofPtr body2 = subst_hyp(p->subs[0], p->hyp, Proof::axiom(h2));
        return Proof::imp_intro(h2, p->prop, rec(body2));
      }
      return Proof::imp_intro(p->hyp, p->prop, rec(p->subs[0]));
    }
    case Proof::Kind::OrElim: {
      ProofPtr major = rec(p->subs[0]);
      std::string hl = p->hyp;
      ProofPtr left = p->subs[1];
      if (hl != h) {
        if (rhyps.count(hl) && free_hyps(left).count(h)) {
          std::string h2 = fresh_hyp(hl, left);
          left = subst_hyp(left, hl, Proof::axiom(h2));
          hl = h2;
        }
        left = rec(left);
      }
      std::string hr = p->hyp2;
      ProofPtr right = p->subs[2];
      if (hr != h) {
        if (rhyps.count(hr) && free_hyps(right).count(h)) {
          std::string h2 = fresh_hyp(hr, right);
          right = subst_hyp(right, hr, Proof::axiom(h2));
          hr = h2;
        }
        right = rec(right);
      }
      return Proof::or_elim(major, hl, left, hr, right);
    }
    case Proof::Kind::ExElim: {
      ProofPtr major = rec(p->subs[0]);
      if (p->hyp == h)
        return Proof::ex_elim(major, p->hyp, p->var, p->prop, p->subs[1]);
      std::string hb = p->hyp;
      std::string v = p->var;
      PropPtr body = p->prop;
      ProofPtr branch = p->subs[1];
      if (free_hyps(branch).count(h)) {
        // r lands inside the branch: keep its free variables out of v's scope
        if (rvars.count(v)) {
          std::set<std::string> avoid = rvars;
          auto bv = free_proof_vars(branch);
          avoid.insert(bv.begin(), bv.end());
          auto bf = free_vars(body);
          avoid.insert(bf.begin(), bf.end());
          std::string v2 = fresh_name(v, avoid);
          TermPtr v2t = Term::var(v2);
          body = Subst::single(v, v2t).apply(body);
          branch = subst_var(branch, v, v2t);
          v = v2;
        }
        if (rhyps.count(hb)) {
          std::string h2 = fresh_hyp(hb, branch);
          branch = subst_hyp(branch, hb, Proof::axiom(h2));
          hb = h2;
        }
        branch = rec(branch);
      }
      return Proof::ex_elim(major, hb, v, body, branch);
    }
    case Proof::Kind::AllIntro: {
      ProofPtr sub = p->subs[0];
      std::string v = p->var;
      PropPtr body = p->prop;
      if (free_hyps(sub).count(h) && rvars.count(v)) {
        std::set<std::string> avoid = rvars;
        auto sv = free_proof_vars(sub);
        avoid.insert(sv.begin(), sv.end());
        auto bf = free_vars(body);
        avoid.insert(bf.begin(), bf.end());
        std::string v2 = fresh_name(v, avoid);
        TermPtr v2t = Term::var(v2);
        body = Subst::single(v, v2t).apply(body);
        sub = subst_var(sub, v, v2t);
        v = v2;
      }
      return Proof::all_intro(v, body, rec(sub));
    }
    default: {
      std::vector<ProofPtr> subs;
      for (const auto& sub : p->subs) subs.push_back(rec(sub));
      return with_subs(p, std::move(subs));
    }
  }
}

// ---------------------------------------------------------------------------
// Alpha-equivalence of proofs
// ---------------------------------------------------------------------------

namespace {

using Pairs = std::vector<std::pair<std::string, std::string>>;

bool names_match(const std::string& a, const std::string& b, const Pairs& pairs) {
  for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
    if (it->first == a || it->second == b) return it->first == a && it->second == b;
  }
  return a == b;
}

bool proof_alpha(const ProofPtr& a, const ProofPtr& b, Pairs& hyps, Pairs& vars) {
  if (a->kind != b->kind) return false;
  auto props_eq = [&](const PropPtr& x, const PropPtr& y) {
    if (!x || !y) return x == y;
    return alpha_eq_open(x, y, vars);
  };
  auto terms_eq = [&](const TermPtr& x, const TermPtr& y) {
    if (!x || !y) return x == y;
    return alpha_eq_open(x, y, vars);
  };
  switch (a->kind) {
    case Proof::Kind::Axiom:
      return names_match(a->hyp, b->hyp, hyps);
    case Proof::Kind::TopIntro:
      return true;
    case Proof::Kind::ImpIntro: {
      if (!props_eq(a->prop, b->prop)) return false;
      hyps.emplace_back(a->hyp, b->hyp);
      bool ok = proof_alpha(a->subs[0], b->subs[0], hyps, vars);
      hyps.pop_back();
      return ok;
    }
    case Proof::Kind::OrElim: {
      if (!proof_alpha(a->subs[0], b->subs[0], hyps, vars)) return false;
      hyps.emplace_back(a->hyp, b->hyp);
      bool okl = proof_alpha(a->subs[1], b->subs[1], hyps, vars);
      hyps.pop_back();
      if (!okl) return false;
      hyps.emplace_back(a->hyp2, b->hyp2);
      bool okr = proof_alpha(a->subs[2], b->subs[2], hyps, vars);
      hyps.pop_back();
      return okr;
    }
    case Proof::Kind::AllIntro: {
      vars.emplace_back(a->var, b->var);
      bool ok = props_eq(a->prop, b->prop) &&
                proof_alpha(a->subs[0], b->subs[0], hyps, vars);
      vars.pop_back();
      return ok;
    }
    case Proof::Kind::AllElim:
    case Proof::Kind::ExIntro: {
      if (!terms_eq(a->term, b->term)) return false;
      vars.emplace_back(a->var, b->var);
      bool ok = props_eq(a->prop, b->prop);
      vars.pop_back();
      return ok && proof_alpha(a->subs[0], b->subs[0], hyps, vars);
    }
    case Proof::Kind::ExElim: {
      if (!proof_alpha(a->subs[0], b->subs[0], hyps, vars)) return false;
      vars.emplace_back(a->var, b->var);
      bool ok = props_eq(a->prop, b->prop);
      if (ok) {
        hyps.emplace_back(a->hyp, b->hyp);
        ok = proof_alpha(a->subs[1], b->subs[1], hyps, vars);
        hyps.pop_back();
      }
      vars.pop_back();
      return ok;
    }
    default: {
      if (!props_eq(a->prop, b->prop)) return false;
      if (!terms_eq(a->term, b->term)) return false;
      if (a->subs.size() != b->subs.size()) return false;
      for (std::size_t i = 0; i < a->subs.size(); ++i)
        if (!proof_alpha(a->subs[i], b->subs[i], hyps, vars)) return false;
      return true;
    }
  }
}

}  // namespace

bool alpha_eq_proof(const ProofPtr& a, const ProofPtr& b) {
  Pairs hyps, vars;
  return proof_alpha(a, b, hyps, vars);
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

namespace {

struct Reject {
  std::string reason;
  Path path;
};

struct OutOfFuel {
  Path path;
};

class Checker {
 public:
  Checker(const rewrite::Theory& th, long long fuel) : th_(th), fuel_(fuel) {}

  long long used = 0;

  PropPtr synth(const Context& ctx, const ProofPtr& p, Path& path) {
    switch (p->kind) {
      case Proof::Kind::Axiom: {
        const PropPtr* q = ctx.lookup(p->hyp);
        if (!q) throw Reject{"unknown hypothesis '" + p->hyp + "'", path};
        return *q;
      }
      case Proof::Kind::TopIntro:
        return Prop::top();
      case Proof::Kind::BotElim: {
        PropPtr b = child(ctx, p, 0, path);
        PropPtr w = expose(b, path);
        if (w->kind != Prop::Kind::Bottom)
          throw Reject{"major premise does not reduce to false", path};
        return p->prop;
      }
      case Proof::Kind::AndIntro:
        return Prop::conj(child(ctx, p, 0, path), child(ctx, p, 1, path));
      case Proof::Kind::AndElimL:
      case Proof::Kind::AndElimR: {
        PropPtr c = child(ctx, p, 0, path);
        require_congruent(c, p->prop, path,
                          "major premise is not congruent to the stated conjunction");
        PropPtr w = expose(p->prop, path);
        if (w->kind != Prop::Kind::And)
          throw Reject{"stated proposition does not reduce to a conjunction", path};
        return p->kind == Proof::Kind::AndElimL ? w->lhs : w->rhs;
      }
      case Proof::Kind::OrIntroL:
      case Proof::Kind::OrIntroR: {
        PropPtr w = expose(p->prop, path);
        if (w->kind != Prop::Kind::Or)
          throw Reject{"stated proposition does not reduce to a disjunction", path};
        PropPtr c = child(ctx, p, 0, path);
        require_congruent(c, p->kind == Proof::Kind::OrIntroL ? w->lhs : w->rhs, path,
                          "premise is not congruent to the chosen disjunct");
        return p->prop;
      }
      case Proof::Kind::OrElim: {
        PropPtr d = child(ctx, p, 0, path);
        PropPtr w = expose(d, path);
        if (w->kind != Prop::Kind::Or)
          throw Reject{"major premise does not reduce to a disjunction", path};
        PropPtr cl = child(ctx.extended(p->hyp, w->lhs), p, 1, path);
        PropPtr cr = child(ctx.extended(p->hyp2, w->rhs), p, 2, path);
        require_congruent(cl, cr, path, "branches prove incongruent propositions");
        return cl;
      }
      case Proof::Kind::ImpIntro: {
        PropPtr b = child(ctx.extended(p->hyp, p->prop), p, 0, path);
        return Prop::implies(p->prop, b);
      }
      case Proof::Kind::ImpElim: {
        PropPtr c = child(ctx, p, 0, path);
        PropPtr w = expose(c, path);
        if (w->kind != Prop::Kind::Implies)
          throw Reject{"major premise does not reduce to an implication", path};
        PropPtr a = child(ctx, p, 1, path);
        require_congruent(a, w->lhs, path,
                          "argument is not congruent to the antecedent");
        return w->rhs;
      }
      case Proof::Kind::AllIntro: {
        if (free_vars(ctx).count(p->var))
          throw Reject{"variable '" + p->var + "' occurs free in the context", path};
        PropPtr c = child(ctx, p, 0, path);
        require_congruent(c, p->prop, path,
                          "premise is not congruent to the quantified body");
        return Prop::forall(p->var, p->prop);
      }
      case Proof::Kind::AllElim: {
        PropPtr c = child(ctx, p, 0, path);
        require_congruent(c, Prop::forall(p->var, p->prop), path,
                          "major premise is not congruent to the stated universal");
        return Subst::single(p->var, p->term).apply(p->prop);
      }
      case Proof::Kind::ExIntro: {
        PropPtr c = child(ctx, p, 0, path);
        require_congruent(c, Subst::single(p->var, p->term).apply(p->prop), path,
                          "premise is not congruent to the instantiated body");
        return Prop::exists(p->var, p->prop);
      }
      case Proof::Kind::ExElim: {
        PropPtr c = child(ctx, p, 0, path);
        require_congruent(c, Prop::exists(p->var, p->prop), path,
                          "major premise is not congruent to the stated existential");
        PropPtr b = child(ctx.extended(p->hyp, p->prop), p, 1, path);
        auto fv = free_vars(ctx);
        auto bfv = free_vars(b);
        if (fv.count(p->var) || bfv.count(p->var))
          throw Reject{"variable '" + p->var +
                           "' occurs free in the context or conclusion",
                       path};
        return b;
      }
    }
    throw Reject{"malformed proof node", path};
  }

 private:
  PropPtr child(const Context& ctx, const ProofPtr& p, int i, Path& path) {
    path.push_back(i);
    PropPtr r = synth(ctx, p->subs[i], path);
    path.pop_back();
    return r;
  }

  void require_congruent(const PropPtr& a, const PropPtr& b, const Path& path,
                         const char* msg) {
    auto r = rewrite::congruent(a, b, th_, fuel_);
    used += r.steps;
    if (r.exhausted()) throw OutOfFuel{path};
    if (!*r.value) throw Reject{msg, path};
  }

  PropPtr expose(const PropPtr& p, const Path& path) {
    auto r = rewrite::whnf(p, th_, Polarity::Positive, fuel_);
    used += r.steps;
    if (r.exhausted()) throw OutOfFuel{path};
    return *r.value;
  }

  const rewrite::Theory& th_;
  long long fuel_;
};

}  // namespace

CheckReport check(const rewrite::Theory& th, const Context& ctx, const PropPtr& goal,
                  const ProofPtr& proof, long long fuel) {
  if (th.polarized())
    throw InputError("proof checking requires an unpolarized theory");
  Checker ck(th, fuel);
  CheckReport rep;
  Path path;
  try {
    PropPtr s = ck.synth(ctx, proof, path);
    rep.synthesized = s;
    auto r = rewrite::congruent(s, goal, th, fuel);
    ck.used += r.steps;
    if (r.exhausted()) throw OutOfFuel{path};
    if (*r.value) {
      rep.status = CheckReport::Status::Accepted;
    } else {
      rep.status = CheckReport::Status::Rejected;
      rep.reason = "synthesized proposition is not congruent to the goal";
    }
  } catch (const Reject& rj) {
    rep.status = CheckReport::Status::Rejected;
    rep.reason = rj.reason;
    rep.path = rj.path;
  } catch (const OutOfFuel& of) {
    rep.status = CheckReport::Status::FuelExhausted;
    rep.reason = "congruence fuel exhausted";
    rep.path = of.path;
  }
  rep.congruence_steps = ck.used;
  return rep;
}

// ---------------------------------------------------------------------------
// Redexes and contraction
// ---------------------------------------------------------------------------

namespace {

bool is_beta_redex(const ProofPtr& p) {
  if (p->subs.empty()) return false;
  const ProofPtr& m = p->subs[0];
  switch (p->kind) {
    case Proof::Kind::ImpElim:
      return m->kind == Proof::Kind::ImpIntro;
    case Proof::Kind::AndElimL:
    case Proof::Kind::AndElimR:
      return m->kind == Proof::Kind::AndIntro;
    case Proof::Kind::OrElim:
      return m->kind == Proof::Kind::OrIntroL || m->kind == Proof::Kind::OrIntroR;
    case Proof::Kind::AllElim:
      return m->kind == Proof::Kind::AllIntro;
    case Proof::Kind::ExElim:
      return m->kind == Proof::Kind::ExIntro;
    default:
      return false;
  }
}

bool is_perm_redex(const ProofPtr& p) {
  if (!is_elim(p) || p->subs.empty()) return false;
  const ProofPtr& m = p->subs[0];
  return m->kind == Proof::Kind::OrElim || m->kind == Proof::Kind::ExElim;
}

bool is_redex(const ProofPtr& p) { return is_beta_redex(p) || is_perm_redex(p); }

void collect_redexes_pre(const ProofPtr& p, Path& cur, std::vector<Path>& out) {
  if (is_redex(p)) out.push_back(cur);
  for (std::size_t i = 0; i < p->subs.size(); ++i) {
    cur.push_back((int)i);
    collect_redexes_pre(p->subs[i], cur, out);
    cur.pop_back();
  }
}

void collect_redexes_post(const ProofPtr& p, Path& cur, std::vector<Path>& out) {
  for (std::size_t i = 0; i < p->subs.size(); ++i) {
    cur.push_back((int)i);
    collect_redexes_post(p->subs[i], cur, out);
    cur.pop_back();
  }
  if (is_redex(p)) out.push_back(cur);
}

ProofPtr rebuild_with_major(const ProofPtr& p, ProofPtr major) {
  Proof q = *p;
  q.subs[0] = std::move(major);
  return std::make_shared<Proof>(std::move(q));
}

ProofPtr contract(const ProofPtr& p) {
  const ProofPtr& m = p->subs[0];
  if (is_beta_redex(p)) {
    switch (p->kind) {
      case Proof::Kind::ImpElim:
        return subst_hyp(m->subs[0], m->hyp, p->subs[1]);
      case Proof::Kind::AndElimL:
        return m->subs[0];
      case Proof::Kind::AndElimR:
        return m->subs[1];
      case Proof::Kind::OrElim:
        return m->kind == Proof::Kind::OrIntroL
                   ? subst_hyp(p->subs[1], p->hyp, m->subs[0])
                   : subst_hyp(p->subs[2], p->hyp2, m->subs[0]);
      case Proof::Kind::AllElim:
        return subst_var(m->subs[0], m->var, p->term);
      case Proof::Kind::ExElim:
        return subst_hyp(subst_var(p->subs[1], p->var, m->term), p->hyp, m->subs[0]);
      default:
        break;
    }
  }
  if (is_perm_redex(p)) {
    // names free in the elimination context being pushed inside
    std::set<std::string> ctx_hyps, ctx_vars;
    for (std::size_t i = 1; i < p->subs.size(); ++i) {
      auto h = free_hyps(p->subs[i]);
      ctx_hyps.insert(h.begin(), h.end());
      auto v = free_proof_vars(p->subs[i]);
      ctx_vars.insert(v.begin(), v.end());
    }
    if (p->prop) {
      auto v = free_vars(p->prop);
      ctx_vars.insert(v.begin(), v.end());
    }
    if (p->term) {
      auto v = free_vars(p->term);
      ctx_vars.insert(v.begin(), v.end());
    }
    if (m->kind == Proof::Kind::OrElim) {
      std::string hl = m->hyp, hr = m->hyp2;
      ProofPtr left = m->subs[1], right = m->subs[2];
      if (ctx_hyps.count(hl)) {
        std::set<std::string> avoid = ctx_hyps;
        auto fh = free_hyps(left);
        avoid.insert(fh.begin(), fh.end());
        std::string h2 = fresh_name(hl, avoid);
        left = subst_hyp(left, hl, Proof::axiom(h2));
        hl = h2;
      }
      if (ctx_hyps.count(hr)) {
        std::set<std::string> avoid = ctx_hyps;
        auto fh = free_hyps(right);
        avoid.insert(fh.begin(), fh.end());
        std::string h2 = fresh_name(hr, avoid);
        right = subst_hyp(right, hr, Proof::axiom(h2));
        hr = h2;
      }
      return Proof::or_elim(m->subs[0], hl, rebuild_with_major(p, left), hr,
                            rebuild_with_major(p, right));
    }
    if (m->kind == Proof::Kind::ExElim) {
      std::string h = m->hyp, v = m->var;
      PropPtr body = m->prop;
      ProofPtr branch = m->subs[1];
      if (ctx_vars.count(v)) {
        std::set<std::string> avoid = ctx_vars;
        auto fv = free_proof_vars(branch);
        avoid.insert(fv.begin(), fv.end());
        auto bf = free_vars(body);
        avoid.insert(bf.begin(), bf.end());
        std::string v2 = fresh_name(v, avoid);
        TermPtr v2t = Term::var(v2);
        body = Subst::single(v, v2t).apply(body);
        branch = subst_var(branch, v, v2t);
        v = v2;
      }
      if (ctx_hyps.count(h)) {
        std::set<std::string> avoid = ctx_hyps;
        auto fh = free_hyps(branch);
        avoid.insert(fh.begin(), fh.end());
        std::string h2 = fresh_name(h, avoid);
        branch = subst_hyp(branch, h, Proof::axiom(h2));
        h = h2;
      }
      return Proof::ex_elim(m->subs[0], h, v, body, rebuild_with_major(p, branch));
    }
  }
  throw InputError("path does not index a redex");
}

ProofPtr replace_at(const ProofPtr& p, const Path& path, std::size_t depth,
                    const std::function<ProofPtr(const ProofPtr&)>& f) {
  if (depth == path.size()) return f(p);
  int i = path[depth];
  if (i < 0 || (std::size_t)i >= p->subs.size())
    throw InputError("invalid proof path");
  Proof q = *p;
  q.subs[i] = replace_at(p->subs[i], path, depth + 1, f);
  return std::make_shared<Proof>(std::move(q));
}

}  // namespace

std::vector<Path> find_redexes(const ProofPtr& p) {
  std::vector<Path> out;
  Path cur;
  collect_redexes_pre(p, cur, out);
  return out;
}

ProofPtr reduce_step(const ProofPtr& p, const Path& path) {
  return replace_at(p, path, 0, [](const ProofPtr& node) { return contract(node); });
}

NormalizeProofResult normalize_proof(const rewrite::Theory& th, const Context& ctx,
                                     const PropPtr& goal, const ProofPtr& proof,
                                     long long fuel) {
  CheckReport rep = check(th, ctx, goal, proof, fuel);
  if (!rep.accepted())
    throw InputError("proof does not check before reduction: " + rep.reason);
  NormalizeProofResult out;
  ProofPtr cur = proof;
  for (;;) {
    std::vector<Path> redexes;
    Path tmp;
    collect_redexes_post(cur, tmp, redexes);
    if (redexes.empty()) {
      out.proof = cur;
      return out;
    }
    if (out.steps >= fuel) return out;  // exhausted
    const Path& target = redexes.front();
    ProofPtr node = cur;
    for (int i : target) node = node->subs[i];
    out.trace.push_back({target, last_rule(node)});
    cur = reduce_step(cur, target);
    ++out.steps;
  }
}

// ---------------------------------------------------------------------------
// Proof files: s-expressions
// ---------------------------------------------------------------------------

namespace {

struct Sexp {
  bool list = false;
  std::string atom;
  std::vector<Sexp> items;
};

struct SexpReader {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size()) {
      if (std::isspace((unsigned char)text[pos])) {
        ++pos;
      } else if (text[pos] == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  Sexp read() {
    skip_ws();
    if (pos >= text.size()) throw InputError("unexpected end of proof text");
    if (text[pos] == '(') {
      ++pos;
      Sexp s;
      s.list = true;
      for (;;) {
        skip_ws();
        if (pos >= text.size()) throw InputError("missing ')' in proof text");
        if (text[pos] == ')') {
          ++pos;
          return s;
        }
        s.items.push_back(read());
      }
    }
    if (text[pos] == ')') throw InputError("unexpected ')' in proof text");
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace((unsigned char)text[pos]) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != '#')
      ++pos;
    Sexp s;
    s.atom = text.substr(start, pos - start);
    return s;
  }
};

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit((unsigned char)c)) return false;
  return true;
}

TermPtr sexp_term(const Sexp& s, const Signature& sig) {
  if (!s.list) {
    if (all_digits(s.atom)) return numeral(std::stoull(s.atom));
    if (sig.fun_arity(s.atom) == 0) return Term::app(s.atom);
    return Term::var(s.atom);
  }
  if (s.items.empty() || s.items[0].list)
    throw InputError("malformed term in proof text");
  const std::string& f = s.items[0].atom;
  if (auto a = sig.fun_arity(f); a && *a != (int)s.items.size() - 1)
    throw InputError("function '" + f + "' has arity " + std::to_string(*a));
  std::vector<TermPtr> args;
  for (std::size_t i = 1; i < s.items.size(); ++i)
    args.push_back(sexp_term(s.items[i], sig));
  return Term::app(f, std::move(args));
}

PropPtr sexp_prop(const Sexp& s, const Signature& sig) {
  if (!s.list) {
    if (s.atom == "true") return Prop::top();
    if (s.atom == "false") return Prop::bottom();
    return Prop::atom(s.atom);
  }
  if (s.items.empty() || s.items[0].list)
    throw InputError("malformed proposition in proof text");
  const std::string& h = s.items[0].atom;
  auto need = [&](std::size_t n) {
    if (s.items.size() != n + 1)
      throw InputError("'" + h + "' expects " + std::to_string(n) + " arguments");
  };
  if (h == "=>") {
    need(2);
    return Prop::implies(sexp_prop(s.items[1], sig), sexp_prop(s.items[2], sig));
  }
  if (h == "&") {
    need(2);
    return Prop::conj(sexp_prop(s.items[1], sig), sexp_prop(s.items[2], sig));
  }
  if (h == "|") {
    need(2);
    return Prop::disj(sexp_prop(s.items[1], sig), sexp_prop(s.items[2], sig));
  }
  if (h == "~") {
    need(1);
    return Prop::neg(sexp_prop(s.items[1], sig));
  }
  if (h == "forall" || h == "exists") {
    need(2);
    if (s.items[1].list) throw InputError("'" + h + "' expects a variable name");
    PropPtr body = sexp_prop(s.items[2], sig);
    return h == "forall" ? Prop::forall(s.items[1].atom, body)
                         : Prop::exists(s.items[1].atom, body);
  }
  if (auto a = sig.pred_arity(h); a && *a != (int)s.items.size() - 1)
    throw InputError("predicate '" + h + "' has arity " + std::to_string(*a));
  std::vector<TermPtr> args;
  for (std::size_t i = 1; i < s.items.size(); ++i)
    args.push_back(sexp_term(s.items[i], sig));
  return Prop::atom(h, std::move(args));
}

ProofPtr sexp_proof(const Sexp& s, const Signature& sig) {
  if (!s.list || s.items.empty() || s.items[0].list)
    throw InputError("malformed proof node");
  const std::string& h = s.items[0].atom;
  auto need = [&](std::size_t n) {
    if (s.items.size() != n + 1)
      throw InputError("proof node '" + h + "' expects " + std::to_string(n) +
                       " arguments");
  };
  auto name_at = [&](std::size_t i) -> const std::string& {
    if (s.items[i].list)
      throw InputError("proof node '" + h + "' expects a name at position " +
                       std::to_string(i));
    return s.items[i].atom;
  };
  if (h == "axiom") {
    need(1);
    return Proof::axiom(name_at(1));
  }
  if (h == "top_intro") {
    need(0);
    return Proof::top_intro();
  }
  if (h == "bot_elim") {
    need(2);
    return Proof::bot_elim(sexp_prop(s.items[1], sig), sexp_proof(s.items[2], sig));
  }
  if (h == "and_intro") {
    need(2);
    return Proof::and_intro(sexp_proof(s.items[1], sig), sexp_proof(s.items[2], sig));
  }
  if (h == "and_elim_l" || h == "and_elim_r") {
    need(2);
    PropPtr st = sexp_prop(s.items[1], sig);
    ProofPtr m = sexp_proof(s.items[2], sig);
    return h == "and_elim_l" ? Proof::and_elim_l(st, m) : Proof::and_elim_r(st, m);
  }
  if (h == "or_intro_l" || h == "or_intro_r") {
    need(2);
    PropPtr st = sexp_prop(s.items[1], sig);
    ProofPtr m = sexp_proof(s.items[2], sig);
    return h == "or_intro_l" ? Proof::or_intro_l(st, m) : Proof::or_intro_r(st, m);
  }
  if (h == "or_elim") {
    need(5);
    return Proof::or_elim(sexp_proof(s.items[1], sig), name_at(2),
                          sexp_proof(s.items[3], sig), name_at(4),
                          sexp_proof(s.items[5], sig));
  }
  if (h == "imp_intro") {
    need(3);
    return Proof::imp_intro(name_at(1), sexp_prop(s.items[2], sig),
                            sexp_proof(s.items[3], sig));
  }
  if (h == "imp_elim") {
    need(2);
    return Proof::imp_elim(sexp_proof(s.items[1], sig), sexp_proof(s.items[2], sig));
  }
  if (h == "all_intro") {
    need(3);
    return Proof::all_intro(name_at(1), sexp_prop(s.items[2], sig),
                            sexp_proof(s.items[3], sig));
  }
  if (h == "all_elim") {
    need(4);
    return Proof::all_elim(name_at(1), sexp_prop(s.items[2], sig),
                           sexp_term(s.items[3], sig), sexp_proof(s.items[4], sig));
  }
  if (h == "ex_intro") {
    need(4);
    return Proof::ex_intro(name_at(1), sexp_prop(s.items[2], sig),
                           sexp_term(s.items[3], sig), sexp_proof(s.items[4], sig));
  }
  if (h == "ex_elim") {
    need(5);
    return Proof::ex_elim(sexp_proof(s.items[1], sig), name_at(2), name_at(3),
                          sexp_prop(s.items[4], sig), sexp_proof(s.items[5], sig));
  }
  throw InputError("unknown proof node '" + h + "'");
}

void term_sexp(std::ostringstream& os, const TermPtr& t) {
  if (auto n = as_numeral(t)) {
    os << *n;
    return;
  }
  if (t->args.empty()) {
    os << t->name;
    return;
  }
  os << '(' << t->name;
  for (const auto& a : t->args) {
    os << ' ';
    term_sexp(os, a);
  }
  os << ')';
}

void prop_sexp(std::ostringstream& os, const PropPtr& p) {
  switch (p->kind) {
    case Prop::Kind::Atom:
      if (p->args.empty()) {
        os << p->name;
        return;
      }
      os << '(' << p->name;
      for (const auto& a : p->args) {
        os << ' ';
        term_sexp(os, a);
      }
      os << ')';
      return;
    case Prop::Kind::Top:
      os << "true";
      return;
    case Prop::Kind::Bottom:
      os << "false";
      return;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies: {
      const char* op = p->kind == Prop::Kind::And   ? "&"
                       : p->kind == Prop::Kind::Or ? "|"
                                                    : "=>";
      os << '(' << op << ' ';
      prop_sexp(os, p->lhs);
      os << ' ';
      prop_sexp(os, p->rhs);
      os << ')';
      return;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists:
      os << (p->kind == Prop::Kind::Forall ? "(forall " : "(exists ") << p->name
         << ' ';
      prop_sexp(os, p->rhs);
      os << ')';
      return;
  }
}

void proof_sexp(std::ostringstream& os, const ProofPtr& p) {
  switch (p->kind) {
    case Proof::Kind::Axiom:
      os << "(axiom " << p->hyp << ')';
      return;
    case Proof::Kind::TopIntro:
      os << "(top_intro)";
      return;
    case Proof::Kind::BotElim:
      os << "(bot_elim ";
      prop_sexp(os, p->prop);
      os << ' ';
      proof_sexp(os, p->subs[0]);
      os << ')';
      return;
    case Proof::Kind::AndIntro:
      os << "(and_intro ";
      proof_sexp(os, p->subs[0]);
      os << ' ';
      proof_sexp(os, p->subs[1]);
      os << ')';
      return;
    case Proof::Kind::AndElimL:
    case Proof::Kind::AndElimR:
      os << (p->kind == Proof::Kind::AndElimL ? "(and_elim_l " : "(and_elim_r ");
      prop_sexp(os, p->prop);
      os << ' ';
      proof_sexp(os, p->subs[0]);
      os << ')';
      return;
    case Proof::Kind::OrIntroL:
    case Proof::Kind::OrIntroR:
      os << (p->kind == Proof::Kind::OrIntroL ? "(or_intro_l " : "(or_intro_r ");
      prop_sexp(os, p->prop);
      os << ' ';
      proof_sexp(os, p->subs[0]);
      os << ')';
      return;
    case Proof::Kind::OrElim:
      os << "(or_elim ";
      proof_sexp(os, p->subs[0]);
      os << ' ' << p->hyp << ' ';
      proof_sexp(os, p->subs[1]);
      os << ' ' << p->hyp2 << ' ';
      proof_sexp(os, p->subs[2]);
      os << ')';
      return;
    case Proof::Kind::ImpIntro:
      os << "(imp_intro " << p->hyp << ' ';
      prop_sexp(os, p->prop);
      os << ' ';
      proof_sexp(os, p->subs[0]);
      os << ')';
      return;
    case Proof::Kind::ImpElim:
      os << "(imp_elim ";
      proof_sexp(os, p->subs[0]);
      os << ' ';
      proof_sexp(os, p->subs[1]);
      os << ')';
      return;
    case Proof::Kind::AllIntro:
      os << "(all_intro " << p->var << ' ';
      prop_sexp(os, p->prop);
      os << ' ';
      proof_sexp(os, p->subs[0]);
      os << ')';
      return;
    case Proof::Kind::AllElim:
    case Proof::Kind::ExIntro:
      os << (p->kind == Proof::Kind::AllElim ? "(all_elim " : "(ex_intro ") << p->var
         << ' ';
      prop_sexp(os, p->prop);
      os << ' ';
      term_sexp(os, p->term);
      os << ' ';
      proof_sexp(os, p->subs[0]);
      os << ')';
      return;
    case Proof::Kind::ExElim:
      os << "(ex_elim ";
      proof_sexp(os, p->subs[0]);
      os << ' ' << p->hyp << ' ' << p->var << ' ';
      prop_sexp(os, p->prop);
      os << ' ';
      proof_sexp(os, p->subs[1]);
      os << ')';
      return;
  }
}

}  // namespace

ProofPtr parse_proof(const std::string& text, const Signature& sig) {
  SexpReader rd{text};
  Sexp s = rd.read();
  if (!rd.at_end()) throw InputError("trailing input after the proof expression");
  return sexp_proof(s, sig);
}

ProofPtr load_proof_file(const std::string& path, const Signature& sig) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open proof file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_proof(buf.str(), sig);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string print_proof(const ProofPtr& p, const Signature&) {
  std::ostringstream os;
  proof_sexp(os, p);
  return os.str();
}

}  // namespace dmt::ndproof
