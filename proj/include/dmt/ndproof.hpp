#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dmt/rewrite.hpp"

namespace dmt::ndproof {

struct Proof;
using ProofPtr = std::shared_ptr<const Proof>;

/// Proof term for natural deduction modulo a rewrite theory. One constructor
/// per deduction rule; quantifier nodes carry the <x, A> / <x, A, t>
/// annotations of their rules, hypothesis binders carry explicit names.
struct Proof {
  enum class Kind {
    Axiom,     // hyp
    TopIntro,
    BotElim,   // prop = concluded target, subs = {major}
    AndIntro,  // subs = {left, right}
    AndElimL,  // prop = stated conjunction, subs = {major}
    AndElimR,
    OrIntroL,  // prop = stated disjunction, subs = {premise}
    OrIntroR,
    OrElim,    // hyp/hyp2 = branch hypotheses, subs = {major, left, right}
    ImpIntro,  // hyp, prop = antecedent, subs = {body}
    ImpElim,   // subs = {major, argument}
    AllIntro,  // var, prop = body, subs = {premise}
    AllElim,   // var, prop = body, term = witness, subs = {major}
    ExIntro,   // var, prop = body, term = witness, subs = {premise}
    ExElim,    // hyp, var, prop = body, subs = {major, branch}
  };

  Kind kind;
  std::string hyp;
  std::string hyp2;
  std::string var;
  PropPtr prop;
  TermPtr term;
  std::vector<ProofPtr> subs;

  static ProofPtr axiom(std::string hyp);
  static ProofPtr top_intro();
  static ProofPtr bot_elim(PropPtr target, ProofPtr major);
  static ProofPtr and_intro(ProofPtr l, ProofPtr r);
  static ProofPtr and_elim_l(PropPtr stated, ProofPtr major);
  static ProofPtr and_elim_r(PropPtr stated, ProofPtr major);
  static ProofPtr or_intro_l(PropPtr stated, ProofPtr premise);
  static ProofPtr or_intro_r(PropPtr stated, ProofPtr premise);
  static ProofPtr or_elim(ProofPtr major, std::string hypL, ProofPtr left,
                          std::string hypR, ProofPtr right);
  static ProofPtr imp_intro(std::string hyp, PropPtr ante, ProofPtr body);
  static ProofPtr imp_elim(ProofPtr major, ProofPtr arg);
  static ProofPtr all_intro(std::string var, PropPtr body, ProofPtr premise);
  static ProofPtr all_elim(std::string var, PropPtr body, TermPtr witness,
                           ProofPtr major);
  static ProofPtr ex_intro(std::string var, PropPtr body, TermPtr witness,
                           ProofPtr premise);
  static ProofPtr ex_elim(ProofPtr major, std::string hyp, std::string var,
                          PropPtr body, ProofPtr branch);
};

/// The deduction-rule name of the root constructor, e.g. "∀-intro".
std::string last_rule(const ProofPtr& p);
bool is_intro(const ProofPtr& p);
bool is_elim(const ProofPtr& p);

/// Hypothesis names used by axiom leaves and not bound by an enclosing
/// ImpIntro / OrElim / ExElim.
std::set<std::string> free_hyps(const ProofPtr& p);

/// Term variables free in the proof's annotations (AllIntro and ExElim bind
/// their variable over the respective subproofs).
std::set<std::string> free_proof_vars(const ProofPtr& p);

/// Capture-avoiding substitution of a proof for a hypothesis name.
ProofPtr subst_hyp(const ProofPtr& p, const std::string& h, const ProofPtr& r);

/// Capture-avoiding substitution of a term for a variable throughout the
/// proof's annotations.
ProofPtr subst_var(const ProofPtr& p, const std::string& x, const TermPtr& t);

/// Equality up to renaming of bound hypothesis names and bound variables.
bool alpha_eq_proof(const ProofPtr& a, const ProofPtr& b);

struct CheckReport {
  enum class Status { Accepted, Rejected, FuelExhausted };

  Status status = Status::Rejected;
  std::string reason;            // empty when accepted
  Path path;                     // proof node the verdict refers to
  PropPtr synthesized;           // root synthesis when it was reached
  long long congruence_steps = 0;  // rewrite steps spent across all congruence checks

  bool accepted() const { return status == Status::Accepted; }
};

/// Checks a proof bottom-up: every node synthesizes its conclusion,
/// eliminations expose the required head connective with whnf, annotated
/// nodes compare against their annotation with the congruence, and the root
/// synthesis must be congruent to the goal. `fuel` bounds each individual
/// congruence / head-exposure computation. The theory must be unpolarized.
CheckReport check(const rewrite::Theory& th, const Context& ctx, const PropPtr& goal,
                  const ProofPtr& proof, long long fuel);

/// Paths of every cut: an elimination whose major premise is the matching
/// introduction, plus the permutative positions where an OrElim / ExElim is
/// itself the major premise of an elimination. Pre-order.
std::vector<Path> find_redexes(const ProofPtr& p);

/// Contracts the redex at `path` (Prawitz-style; permutative redexes push
/// the outer elimination into the branches). Throws InputError if the path
/// does not index a redex.
ProofPtr reduce_step(const ProofPtr& p, const Path& path);

struct ContractionStep {
  Path path;
  std::string rule;  // root rule of the contracted redex
};

struct NormalizeProofResult {
  std::optional<ProofPtr> proof;  // empty: fuel exhausted
  long long steps = 0;
  std::vector<ContractionStep> trace;

  bool exhausted() const { return !proof.has_value(); }
};

/// Repeatedly contracts the leftmost-innermost redex. The proof must check
/// against (ctx, goal) first; proof reduction in a rewrite theory need not
/// terminate, so fuel bounds the number of contractions.
NormalizeProofResult normalize_proof(const rewrite::Theory& th, const Context& ctx,
                                     const PropPtr& goal, const ProofPtr& proof,
                                     long long fuel);

// --- proof files (.dmp), s-expression syntax ---

ProofPtr parse_proof(const std::string& text, const Signature& sig);
ProofPtr load_proof_file(const std::string& path, const Signature& sig);
std::string print_proof(const ProofPtr& p, const Signature& sig);

}  // namespace dmt::ndproof
