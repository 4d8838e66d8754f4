#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

#include "cohesion/errors.hpp"
#include "cohesion/formula.hpp"
#include "cohesion/model.hpp"
#include "cohesion/network.hpp"
#include "cohesion/reduction.hpp"

namespace cohesion {

struct SolverStats {
  std::uint64_t labelings_tried = 0;
  std::uint64_t sat_queries = 0;
  double elapsed_ms = 0.0;
};

struct TimeoutError : Error {
  SolverStats stats;
  TimeoutError(const std::string& msg, SolverStats s)
      : Error(msg), stats(s) {}
};

struct Witness {
  NeighborhoodModel model;
  WorldId world;
};

struct SatResult {
  bool satisfiable = false;
  std::optional<Witness> witness;  // present iff satisfiable and requested
  SolverStats stats;
};

struct SolverOptions {
  std::chrono::milliseconds timeout{30'000};
  ExpansionBudget budget;
  EnumerationOptions enumeration;
  bool build_witness = true;
};

// Satisfiability for the individual-agent fragment (congruence rules for E
// and A, success and no-tautology for E), and the full-language decisions
// obtained by expanding against a network class first.
//
// sat searches boolean- and success-coherent labelings of the subformula
// closure. A labeling is accepted when every positively labeled E body is
// falsifiable somewhere (no-tautology), and same-agent modal atoms labeled
// differently have non-equivalent bodies; both conditions recurse into sat on
// strictly smaller modal depth. Witness models are assembled from the
// accepted labeling plus one auxiliary labeling per recursive witness, then
// re-validated with the model checker before being returned.
class Solver {
 public:
  explicit Solver(SolverOptions opts = {}) : opts_(std::move(opts)) {}

  // Requires is_biat(f). Deterministic: fixed labeling enumeration order.
  SatResult sat(const FormulaPtr& f) const;

  // True iff expand(~f) is unsatisfiable.
  bool valid(const FormulaPtr& f, const NetworkClass& cls) const;

  bool equivalent(const FormulaPtr& f, const FormulaPtr& g,
                  const NetworkClass& cls) const;

  // A validated model of ~f (expanded), absent iff f is valid.
  std::optional<Witness> countermodel(const FormulaPtr& f,
                                      const NetworkClass& cls) const;

  const SolverOptions& options() const { return opts_; }

 private:
  SolverOptions opts_;
};

}  // namespace cohesion
