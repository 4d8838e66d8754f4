#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cohesion/formula.hpp"

namespace cohesion {

using WorldId = std::string;
using WorldSet = std::set<WorldId>;
// A family of necessitated world sets, one family per (agent, world).
using NeighborhoodMap = std::map<AgentId, std::map<WorldId, std::set<WorldSet>>>;

// Finite neighborhood model for the individual-agent fragment. `nbhd_e`
// carries the agency neighborhoods (subject to the frame conditions below),
// `nbhd_a` the attempt neighborhoods (unconstrained). Treat instances as
// immutable once built.
struct NeighborhoodModel {
  std::vector<WorldId> worlds;  // sorted, unique, nonempty
  std::map<std::string, WorldSet> valuation;
  NeighborhoodMap nbhd_e;
  NeighborhoodMap nbhd_a;

  friend bool operator==(const NeighborhoodModel&, const NeighborhoodModel&) = default;
};

struct FrameViolation {
  std::string condition;  // "T", "no-unit", "unknown-world", "empty"
  AgentId agent;
  WorldId world;
  WorldSet neighborhood;
  std::string detail;
};

// Empty result means the frame conditions hold: every agency neighborhood of
// w contains w (validating E{i} b -> b) and never equals the full world set
// (validating ~E{i} true), and every referenced world exists.
std::vector<FrameViolation> validate(const NeighborhoodModel& m);

// Standard clauses; E{i} b holds at w iff the truth set of b is one of i's
// agency neighborhoods at w, A{i} b likewise over the attempt neighborhoods.
// Throws ModelError for unknown worlds/agents/atoms and std::invalid_argument
// for non-BIAT formulas.
bool model_check(const NeighborhoodModel& m, const WorldId& w, const FormulaPtr& f);

WorldSet truth_set(const NeighborhoodModel& m, const FormulaPtr& f);

// Seeded generator of validated models: candidate agency neighborhoods that
// would break a frame condition are never drawn. Deterministic in all
// arguments; density 0 yields empty neighborhoods everywhere.
NeighborhoodModel random_model(std::uint64_t seed, std::size_t n_worlds,
                               const std::vector<std::string>& atoms,
                               const std::vector<AgentId>& agents,
                               double density);

// JSON wire format:
//   {"worlds":["w0","w1"],"valuation":{"p":["w0"]},
//    "E":{"1":{"w0":[["w0"]],"w1":[]}},"A":{"1":{"w0":[]}}}
// Worlds listed under valuation/E/A must exist; world entries missing from an
// agent's map default to the empty family; unknown keys are rejected.
// Serialization sorts every set for byte-stable output.
NeighborhoodModel model_from_json_text(const std::string& text);
std::string model_to_json_text(const NeighborhoodModel& m);
NeighborhoodModel load_model_file(const std::string& path);
void save_model_file(const NeighborhoodModel& m, const std::string& path);

}  // namespace cohesion
