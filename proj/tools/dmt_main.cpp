#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dmt/ndproof.hpp"
#include "dmt/resolution.hpp"
#include "dmt/rewrite.hpp"
#include "dmt/syntax.hpp"
#include "dmt/theories.hpp"
#include "json.hpp"

using json = nlohmann::json;

namespace {

// exit codes: 0 success/accepted/refutation, 1 rejected/saturated,
// 2 resource exhausted, 3 input error
constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kResource = 2;
constexpr int kInputError = 3;

struct Options {
  std::vector<std::string> theories;
  long long fuel = 10000;
  long long max_clauses = 50000;
  int max_depth = 0;
  std::string format = "human";
  int jobs = 1;
};

bool records(const Options& o) { return o.format == "records"; }

void emit(const Options& o, const json& j, const std::string& human) {
  if (records(o))
    std::cout << j.dump() << "\n";
  else
    std::cout << human;
}

dmt::rewrite::Theory load_theories(const Options& o) {
  if (o.theories.empty()) {
    // bare expressions still get the two standard infix operators
    dmt::rewrite::Theory th;
    th.name = "default";
    th.signature.declare_fun("+", 2);
    th.signature.declare_infix({"+", 6, dmt::InfixDecl::Assoc::Left});
    th.signature.declare_pred("=", 2);
    th.signature.declare_infix({"=", 4, dmt::InfixDecl::Assoc::None});
    return th;
  }
  std::vector<dmt::rewrite::Theory> parts;
  for (const auto& name : o.theories) {
    if (dmt::theories::is_builtin(name))
      parts.push_back(dmt::theories::builtin(name));
    else
      parts.push_back(dmt::rewrite::load_theory_file(name));
  }
  return dmt::rewrite::merge_theories(parts);
}

dmt::rewrite::Theory load_validated(const Options& o) {
  auto th = load_theories(o);
  auto violations = dmt::rewrite::validate_theory(th);
  if (!violations.empty())
    throw dmt::InputError("theory '" + th.name + "': " + violations.front());
  return th;
}

// Expressions on the command line may be propositions or terms.
struct Expr {
  dmt::PropPtr prop;
  dmt::TermPtr term;
};

Expr parse_expr(const std::string& text, const dmt::Signature& sig) {
  try {
    return {dmt::parse_prop(text, sig), nullptr};
  } catch (const dmt::ParseError&) {
    return {nullptr, dmt::parse_term(text, sig)};
  }
}

dmt::Context parse_context(const std::vector<std::string>& hyps,
                           const dmt::Signature& sig) {
  std::vector<dmt::Context::Entry> entries;
  for (const auto& h : hyps) {
    auto colon = h.find(':');
    if (colon == std::string::npos)
      throw dmt::InputError("hypothesis must look like 'name: proposition': " + h);
    std::string name = h.substr(0, colon);
    name.erase(name.find_last_not_of(" \t") + 1);
    entries.emplace_back(name, dmt::parse_prop(h.substr(colon + 1), sig));
  }
  return dmt::Context(entries);
}

json path_json(const dmt::Path& p) {
  json a = json::array();
  for (int i : p) a.push_back(i);
  return a;
}

// --- commands ---

int cmd_normalize(const Options& o, const std::string& text,
                  const std::string& polarity, bool head_only) {
  auto th = load_validated(o);
  dmt::Polarity base =
      polarity == "negative" ? dmt::Polarity::Negative : dmt::Polarity::Positive;
  Expr e = parse_expr(text, th.signature);
  const char* cmd = head_only ? "whnf" : "normalize";
  if (e.prop) {
    auto r = head_only ? dmt::rewrite::whnf(e.prop, th, base, o.fuel)
                       : dmt::rewrite::normalize(e.prop, th, base, o.fuel);
    if (r.exhausted()) {
      emit(o, {{"cmd", cmd}, {"input", text}, {"status", "fuel_exhausted"}, {"steps", r.steps}},
           "fuel exhausted after " + std::to_string(r.steps) + " steps\n");
      return kResource;
    }
    std::string nf = dmt::print_prop(*r.value, th.signature);
    emit(o,
         {{"cmd", cmd}, {"input", text}, {"status", "ok"}, {"normal_form", nf}, {"steps", r.steps}},
         nf + "\n" + std::to_string(r.steps) + " steps\n");
    return kOk;
  }
  if (head_only) throw dmt::InputError("whnf expects a proposition");
  auto r = dmt::rewrite::normalize(e.term, th, o.fuel);
  if (r.exhausted()) {
    emit(o, {{"cmd", cmd}, {"input", text}, {"status", "fuel_exhausted"}, {"steps", r.steps}},
         "fuel exhausted after " + std::to_string(r.steps) + " steps\n");
    return kResource;
  }
  std::string nf = dmt::print_term(*r.value, th.signature);
  emit(o,
       {{"cmd", cmd}, {"input", text}, {"status", "ok"}, {"normal_form", nf}, {"steps", r.steps}},
       nf + "\n" + std::to_string(r.steps) + " steps\n");
  return kOk;
}

int cmd_congruent(const Options& o, const std::string& ta, const std::string& tb) {
  auto th = load_validated(o);
  Expr a = parse_expr(ta, th.signature);
  Expr b = parse_expr(tb, th.signature);
  if ((a.prop == nullptr) != (b.prop == nullptr))
    throw dmt::InputError("cannot compare a proposition with a term");
  dmt::rewrite::Bounded<bool> r =
      a.prop ? dmt::rewrite::congruent(a.prop, b.prop, th, o.fuel)
             : dmt::rewrite::congruent(a.term, b.term, th, o.fuel);
  if (r.exhausted()) {
    emit(o, {{"cmd", "congruent"}, {"status", "fuel_exhausted"}, {"steps", r.steps}},
         "fuel exhausted after " + std::to_string(r.steps) + " steps\n");
    return kResource;
  }
  emit(o,
       {{"cmd", "congruent"}, {"status", "ok"}, {"congruent", *r.value}, {"steps", r.steps}},
       std::string(*r.value ? "congruent" : "not congruent") + "\n");
  return *r.value ? kOk : kNo;
}

int cmd_check(const Options& o, const std::string& proof_file,
              const std::string& goal_text, const std::vector<std::string>& hyps) {
  auto th = load_validated(o);
  auto proof = dmt::ndproof::load_proof_file(proof_file, th.signature);
  auto goal = dmt::parse_prop(goal_text, th.signature);
  auto ctx = parse_context(hyps, th.signature);
  auto rep = dmt::ndproof::check(th, ctx, goal, proof, o.fuel);
  json j = {{"cmd", "check"},
            {"goal", goal_text},
            {"congruence_steps", rep.congruence_steps},
            {"path", path_json(rep.path)}};
  switch (rep.status) {
    case dmt::ndproof::CheckReport::Status::Accepted: {
      std::string rule = dmt::ndproof::last_rule(proof);
      j["status"] = "accepted";
      j["last_rule"] = rule;
      j["synthesized"] = dmt::print_prop(rep.synthesized, th.signature);
      emit(o, j, "accepted; last rule: " + rule + "\n");
      return kOk;
    }
    case dmt::ndproof::CheckReport::Status::Rejected: {
      j["status"] = "rejected";
      j["reason"] = rep.reason;
      std::string at;
      for (int i : rep.path) at += (at.empty() ? "" : ".") + std::to_string(i);
      emit(o, j, "rejected: " + rep.reason + (at.empty() ? "" : " (at " + at + ")") + "\n");
      return kNo;
    }
    default: {
      j["status"] = "fuel_exhausted";
      emit(o, j, "fuel exhausted during congruence checking\n");
      return kResource;
    }
  }
}

int cmd_reduce(const Options& o, const std::string& proof_file,
               const std::string& goal_text, const std::vector<std::string>& hyps) {
  auto th = load_validated(o);
  auto proof = dmt::ndproof::load_proof_file(proof_file, th.signature);
  auto goal = dmt::parse_prop(goal_text, th.signature);
  auto ctx = parse_context(hyps, th.signature);
  auto rep = dmt::ndproof::check(th, ctx, goal, proof, o.fuel);
  if (rep.status == dmt::ndproof::CheckReport::Status::FuelExhausted) {
    emit(o, {{"cmd", "reduce"}, {"status", "fuel_exhausted"}},
         "fuel exhausted while checking the proof\n");
    return kResource;
  }
  if (!rep.accepted()) {
    emit(o, {{"cmd", "reduce"}, {"status", "rejected"}, {"reason", rep.reason}},
         "rejected: " + rep.reason + "\n");
    return kNo;
  }
  auto r = dmt::ndproof::normalize_proof(th, ctx, goal, proof, o.fuel);
  json trace = json::array();
  std::string human;
  for (const auto& step : r.trace) {
    trace.push_back({{"path", path_json(step.path)}, {"rule", step.rule}});
    std::string at;
    for (int i : step.path) at += (at.empty() ? "" : ".") + std::to_string(i);
    human += "contract " + step.rule + " at [" + at + "]\n";
  }
  if (r.exhausted()) {
    emit(o, {{"cmd", "reduce"}, {"status", "fuel_exhausted"}, {"steps", r.steps}, {"trace", trace}},
         human + "fuel exhausted after " + std::to_string(r.steps) + " contractions\n");
    return kResource;
  }
  std::string out = dmt::ndproof::print_proof(*r.proof, th.signature);
  emit(o,
       {{"cmd", "reduce"}, {"status", "ok"}, {"steps", r.steps}, {"trace", trace}, {"proof", out}},
       human + out + "\n");
  return kOk;
}

int prove_one(const Options& o, const dmt::rewrite::Theory& th,
              const std::string& file, std::string& out_text, json& out_json) {
  auto problem = dmt::resolution::load_problem_file(file, th.signature);
  dmt::resolution::Limits limits;
  limits.fuel = o.fuel;
  limits.max_clauses = o.max_clauses;
  limits.max_depth = o.max_depth;
  auto r = dmt::resolution::refute(th, problem.clauses, limits);
  out_json = {{"cmd", "prove"}, {"file", file}, {"generated", r.generated}};
  switch (r.status) {
    case dmt::resolution::RefuteResult::Status::Refutation: {
      std::string steps = dmt::resolution::print_steps(r, problem.signature);
      out_json["status"] = "refutation";
      json lines = json::array();
      std::istringstream ss(steps);
      std::string line;
      while (std::getline(ss, line)) lines.push_back(line);
      out_json["steps"] = lines;
      out_text = file + ": refutation (" + std::to_string(r.generated) +
                 " clauses generated)\n" + steps;
      return kOk;
    }
    case dmt::resolution::RefuteResult::Status::Saturated:
      out_json["status"] = "saturated";
      out_text = file + ": saturated (" + std::to_string(r.generated) +
                 " clauses generated)\n";
      return kNo;
    default:
      out_json["status"] = "resource_out";
      out_json["resource"] = r.resource;
      out_text = file + ": resource limit hit (" + r.resource + ")\n";
      return kResource;
  }
}

int cmd_prove(const Options& o, const std::vector<std::string>& files) {
  auto th = load_validated(o);
  std::vector<std::string> texts(files.size());
  std::vector<json> jsons(files.size());
  std::vector<int> codes(files.size(), kInputError);

  int jobs = std::max(1, std::min<int>(o.jobs, (int)files.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < files.size(); ++i) {
      try {
        codes[i] = prove_one(o, th, files[i], texts[i], jsons[i]);
      } catch (const std::exception& e) {
        jsons[i] = {{"cmd", "prove"}, {"file", files[i]}, {"status", "input_error"}, {"error", e.what()}};
        texts[i] = files[i] + ": error: " + std::string(e.what()) + "\n";
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= files.size()) return;
          try {
            codes[i] = prove_one(o, th, files[i], texts[i], jsons[i]);
          } catch (const std::exception& e) {
            jsons[i] = {{"cmd", "prove"},
                        {"file", files[i]},
                        {"status", "input_error"},
                        {"error", e.what()}};
            texts[i] = files[i] + ": error: " + std::string(e.what()) + "\n";
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  int worst = kOk;
  for (std::size_t i = 0; i < files.size(); ++i) {
    emit(o, jsons[i], texts[i]);
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int cmd_clausify(const Options& o, const std::string& text) {
  auto th = load_theories(o);
  auto p = dmt::parse_prop(text, th.signature);
  auto clauses = dmt::resolution::clausify(p);
  json arr = json::array();
  std::string human;
  for (const auto& c : clauses) {
    std::string s = dmt::resolution::print_clause(c, th.signature);
    arr.push_back(s);
    human += s + "\n";
  }
  if (clauses.empty()) human = "(no clauses: the proposition is valid)\n";
  emit(o, {{"cmd", "clausify"}, {"input", text}, {"clauses", arr}}, human);
  return kOk;
}

int cmd_orient(const Options& o, const std::string& axiom_file,
               std::string theory_out, std::string residual_out) {
  auto ax = dmt::theories::load_axiom_file(axiom_file);
  auto r = dmt::theories::orient(ax);
  if (theory_out.empty()) theory_out = ax.name + ".dmt";
  if (residual_out.empty()) residual_out = ax.name + "_residual.dma";
  {
    std::ofstream out(theory_out);
    if (!out) throw dmt::InputError("cannot write '" + theory_out + "'");
    out << dmt::rewrite::print_theory(r.theory);
  }
  {
    std::ofstream out(residual_out);
    if (!out) throw dmt::InputError("cannot write '" + residual_out + "'");
    out << dmt::theories::print_axioms(r.residual);
  }
  emit(o,
       {{"cmd", "orient"},
        {"axioms", axiom_file},
        {"theory_file", theory_out},
        {"residual_file", residual_out},
        {"rules", r.theory.rules.size()},
        {"residual", r.residual.axioms.size()}},
       "oriented " + std::to_string(r.theory.rules.size()) + " rule(s) into " +
           theory_out + "; " + std::to_string(r.residual.axioms.size()) +
           " axiom(s) left in " + residual_out + "\n");
  return kOk;
}

int cmd_validate(const Options& o) {
  auto th = load_theories(o);
  auto violations = dmt::rewrite::validate_theory(th);
  if (violations.empty()) {
    emit(o, {{"cmd", "validate"}, {"theory", th.name}, {"status", "ok"}},
         "theory '" + th.name + "': ok\n");
    return kOk;
  }
  json arr = json::array();
  std::string human = "theory '" + th.name + "': " +
                      std::to_string(violations.size()) + " violation(s)\n";
  for (const auto& v : violations) {
    arr.push_back(v);
    human += "  " + v + "\n";
  }
  emit(o, {{"cmd", "validate"}, {"theory", th.name}, {"status", "violations"}, {"violations", arr}},
       human);
  return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dmt: rewriting, proof checking, and resolution for first-order "
               "logic modulo a rewrite theory"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("-t,--theory", opt.theories,
                 "theory: builtin name (arith, subset, union_unpolarized, "
                 "union_polarized, loopPQ) or .dmt file; repeatable")
      ->allow_extra_args(false);
  app.add_option("--fuel", opt.fuel, "rewrite fuel per bounded computation");
  app.add_option("--max-clauses", opt.max_clauses, "clause limit for prove");
  app.add_option("--max-depth", opt.max_depth, "term depth limit for prove (0: off)");
  app.add_option("--format", opt.format, "output format: human or records")
      ->check(CLI::IsMember({"human", "records"}));

  std::string expr, expr2, polarity = "positive";
  std::string proof_file, goal;
  std::vector<std::string> hyps, problem_files;
  std::string axiom_file, theory_out, residual_out;

  auto* normalize = app.add_subcommand("normalize", "rewrite to normal form");
  normalize->add_option("expr", expr, "term or proposition")->required();
  normalize->add_option("--polarity", polarity, "base polarity: positive or negative")
      ->check(CLI::IsMember({"positive", "negative"}));

  auto* whnf = app.add_subcommand("whnf", "reduce at the root until a head appears");
  whnf->add_option("expr", expr, "proposition")->required();
  whnf->add_option("--polarity", polarity, "base polarity")
      ->check(CLI::IsMember({"positive", "negative"}));

  auto* congruent = app.add_subcommand("congruent", "decide the congruence");
  congruent->add_option("a", expr, "first expression")->required();
  congruent->add_option("b", expr2, "second expression")->required();

  auto* check = app.add_subcommand("check", "check a natural deduction proof");
  check->add_option("proof", proof_file, "proof file (.dmp)")->required();
  check->add_option("-g,--goal", goal, "goal proposition")->required();
  check->add_option("-H,--hyp", hyps, "hypothesis 'name: proposition'; repeatable")->allow_extra_args(false);

  auto* reduce = app.add_subcommand("reduce", "normalize a proof (cut elimination)");
  reduce->add_option("proof", proof_file, "proof file (.dmp)")->required();
  reduce->add_option("-g,--goal", goal, "goal proposition")->required();
  reduce->add_option("-H,--hyp", hyps, "hypothesis 'name: proposition'; repeatable")->allow_extra_args(false);

  auto* prove = app.add_subcommand("prove", "search for a refutation");
  prove->add_option("problems", problem_files, "problem files (.dmc)")->required();
  prove->add_option("-j,--jobs", opt.jobs, "run problem files concurrently");

  auto* clausify = app.add_subcommand("clausify", "convert to clausal form");
  clausify->add_option("expr", expr, "proposition")->required();

  auto* orient = app.add_subcommand("orient", "turn axioms into rewrite rules");
  orient->add_option("axioms", axiom_file, "axiom file (.dma)")->required();
  orient->add_option("-o,--theory-out", theory_out, "output theory file");
  orient->add_option("--residual", residual_out, "output residual axiom file");

  app.add_subcommand("validate", "check theory well-formedness");

  CLI11_PARSE(app, argc, argv);

  try {
    if (normalize->parsed()) return cmd_normalize(opt, expr, polarity, false);
    if (whnf->parsed()) return cmd_normalize(opt, expr, polarity, true);
    if (congruent->parsed()) return cmd_congruent(opt, expr, expr2);
    if (check->parsed()) return cmd_check(opt, proof_file, goal, hyps);
    if (reduce->parsed()) return cmd_reduce(opt, proof_file, goal, hyps);
    if (prove->parsed()) return cmd_prove(opt, problem_files);
    if (clausify->parsed()) return cmd_clausify(opt, expr);
    if (orient->parsed()) return cmd_orient(opt, axiom_file, theory_out, residual_out);
    return cmd_validate(opt);
  } catch (const std::exception& e) {
    if (records(opt))
      std::cout << json{{"status", "input_error"}, {"error", e.what()}}.dump() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
