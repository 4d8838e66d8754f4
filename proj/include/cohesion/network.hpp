#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cohesion/formula.hpp"

namespace cohesion {

// Directed tie between two coalitions: benefactor first, beneficiary second.
using Edge = std::pair<Group, Group>;

// The social fabric of a group: a digraph on strict subgroups of the carrier.
// Construction is permissive; admissibility is checked by check_c0.
struct CohesionNetwork {
  Group carrier;
  std::set<Group> vertices;
  std::set<Edge> edges;

  friend bool operator==(const CohesionNetwork&, const CohesionNetwork&) = default;
};

// Admissibility rules. 1-5 match the defining constraints; NoSelfLoop is the
// adopted irreflexivity reading (togglable via allow_self_edges).
enum class C0Rule {
  VerticesWithinCarrier = 1,
  EdgesWithinVertices = 2,
  CarrierNotVertex = 3,
  EmptyNotVertex = 4,
  Coverage = 5,
  NoSelfLoop = 6,
};

struct C0Violation {
  C0Rule rule;
  std::string detail;
};

// Empty result means the network is admissible for its carrier.
std::vector<C0Violation> check_c0(const CohesionNetwork& net,
                                  bool allow_self_edges = false);

// Shrinks the vertex set to the edge endpoints. Idempotent; edges unchanged.
CohesionNetwork canonicalize(const CohesionNetwork& net);

// Per-edge and per-network restrictions used to refine the base class.
struct Filters {
  bool disjoint_endpoints = false;
  bool singleton_benefactors = false;
  bool singleton_beneficiaries = false;
  std::optional<std::size_t> max_edges;

  bool edge_ok(const Edge& e) const;
  bool network_ok(const CohesionNetwork& net) const;
  bool any() const;
  std::vector<std::string> to_strings() const;
  // "disjoint-endpoints", "singleton-benefactors", "singleton-beneficiaries",
  // "max-edges:N"
  static Filters from_strings(const std::vector<std::string>& names);
};

struct EnumerationOptions {
  std::size_t max_group_size = 4;
  bool allow_self_edges = false;
  // Keep explicit-class vertex sets as written instead of canonicalizing.
  bool raw_vertices = false;
  // Cap on raw candidates examined per enumeration before giving up.
  std::uint64_t max_scan = std::uint64_t{1} << 24;
};

// A per-group selection of admissible networks: one of the two builtins,
// optionally filtered, or an explicit listing.
class NetworkClass {
 public:
  enum class Base { C0, AllHelpRest, Explicit };

  static NetworkClass c0();
  static NetworkClass all_help_rest();
  static NetworkClass builtin(const std::string& name);
  static NetworkClass explicit_networks(
      std::map<Group, std::vector<CohesionNetwork>> networks);
  NetworkClass filtered(const Filters& extra) const;

  // "c0" or "all-help-rest", otherwise a path to a class file.
  static NetworkClass from_spec(const std::string& spec);
  static NetworkClass from_json_text(const std::string& text);
  static NetworkClass load_file(const std::string& path);
  std::string to_json_text() const;

  Base base() const { return base_; }
  const Filters& filters() const { return filters_; }
  const std::map<Group, std::vector<CohesionNetwork>>& explicit_map() const {
    return explicit_;
  }
  std::string describe() const;

 private:
  Base base_ = Base::C0;
  Filters filters_;
  std::map<Group, std::vector<CohesionNetwork>> explicit_;
};

// Lazy stream over the admissible networks of a class for one group, in
// increasing edge-bitmask order over the ordered edge universe.
class NetworkEnumerator {
 public:
  std::optional<CohesionNetwork> next();

 private:
  friend NetworkEnumerator members(const NetworkClass&, const Group&,
                                   const EnumerationOptions&);
  friend std::vector<CohesionNetwork> minimal_members(const NetworkClass&,
                                                      const Group&,
                                                      const EnumerationOptions&);
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Throws BoundError for degenerate groups, groups above max_group_size, and
// exhausted scan budgets; ClassSpecError for inadmissible explicit networks.
NetworkEnumerator members(const NetworkClass& cls, const Group& g,
                          const EnumerationOptions& opts = {});

// Collects at most `limit` networks (0 = no limit).
std::vector<CohesionNetwork> collect_members(const NetworkClass& cls,
                                             const Group& g,
                                             const EnumerationOptions& opts = {},
                                             std::size_t limit = 0);

// The subset-minimal edge sets among the class members. Requires the class to
// be closed under coverage-preserving edge deletion; explicit classes are
// verified exhaustively and rejected with ClassSpecError when not monotone.
std::vector<CohesionNetwork> minimal_members(const NetworkClass& cls,
                                             const Group& g,
                                             const EnumerationOptions& opts = {});

}  // namespace cohesion
