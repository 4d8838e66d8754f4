#pragma once

#include "cohesion/formula.hpp"
#include "cohesion/network.hpp"

namespace cohesion {

// Caps on the rewriting output. The disjunction produced for a group modality
// ranges over all admissible networks, which grows double-exponentially in
// the group size under the unrestricted class, so runaway expansions abort
// with BudgetError instead of truncating.
struct ExpansionBudget {
  std::size_t max_output_nodes = 1'000'000;
  std::size_t max_disjuncts_per_group = 10'000;
};

// True when no assistance modality occurs and every E/A coalition is a
// singleton: the individual-agent fragment the solver accepts.
bool is_biat(const FormulaPtr& f);

// Eliminates group modalities:
//   H{C1}>{C2} b   ->  expansion of E{C1}(A{C2} b -> b) & A{C2} b
//   E{G} b, |G|>1  ->  disjunction over the class's networks for G of the
//                      conjunction over edges of the expanded assistance
//   A{G} b, |G|>1  ->  conjunction over members i of A{i} (expanded b)
// and acts homomorphically everywhere else. An empty class yields 'false'.
// Conjuncts inside each disjunct are deduplicated and sorted by rendered
// text; duplicate disjuncts are dropped.
FormulaPtr expand(const FormulaPtr& f, const NetworkClass& cls,
                  const ExpansionBudget& budget = {},
                  const EnumerationOptions& opts = {});

// Same as expand but the disjunction ranges over minimal_members only.
// Logically equivalent for edge-monotone classes: any larger edge set's
// conjunction entails the conjunction of a minimal subset it contains.
FormulaPtr expand_minimal(const FormulaPtr& f, const NetworkClass& cls,
                          const ExpansionBudget& budget = {},
                          const EnumerationOptions& opts = {});

}  // namespace cohesion
