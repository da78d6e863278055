#pragma once

#include <string>
#include <vector>

#include "dmt/rewrite.hpp"

namespace dmt::theories {

/// Named axioms over a signature. Axioms are stored closed: the universal
/// closure is taken on ingest and `was_closed` remembers whether the source
/// text already was.
struct AxiomSet {
  struct Axiom {
    std::string name;
    PropPtr prop;
    bool was_closed = true;
  };

  std::string name;
  Signature signature;
  std::vector<Axiom> axioms;
};

/// Bundled example theories: arith, subset, union_unpolarized,
/// union_polarized, loopPQ.
rewrite::Theory builtin(const std::string& name);
bool is_builtin(const std::string& name);
std::vector<std::string> builtin_names();

struct OrientResult {
  rewrite::Theory theory;
  AxiomSet residual;
};

/// Turns axioms into rewrite rules where a safe orientation is apparent:
/// atomic biconditionals become unpolarized rules, atomic implications
/// become polarized rules (hypothesis side negative, goal side positive),
/// and equations orient by a size / subterm measure. Everything else lands
/// in the residual unchanged.
OrientResult orient(const AxiomSet& axioms);

// --- axiom files (.dma) ---

AxiomSet parse_axioms(const std::string& text);
AxiomSet load_axiom_file(const std::string& path);
std::string print_axioms(const AxiomSet& ax);

}  // namespace dmt::theories
