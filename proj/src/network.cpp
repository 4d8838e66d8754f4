#include "cohesion/network.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cohesion/errors.hpp"

namespace cohesion {

namespace {

using nlohmann::json;

std::string edge_text(const Edge& e) {
  return e.first.render() + " => " + e.second.render();
}

// All nonempty strict subsets of g in (size, lexicographic) order.
std::vector<Group> strict_subsets(const Group& g) {
  const auto& agents = g.members();
  const std::size_t n = agents.size();
  std::vector<Group> out;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    std::vector<AgentId> part;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) part.push_back(agents[i]);
    }
    out.emplace_back(std::move(part));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t agent_mask(const Group& g, const Group& carrier) {
  std::uint64_t m = 0;
  const auto& agents = carrier.members();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (g.contains(agents[i])) m |= std::uint64_t{1} << i;
  }
  return m;
}

}  // namespace

std::vector<C0Violation> check_c0(const CohesionNetwork& net,
                                  bool allow_self_edges) {
  std::vector<C0Violation> out;
  for (const auto& v : net.vertices) {
    if (!v.subset_of(net.carrier)) {
      out.push_back({C0Rule::VerticesWithinCarrier,
                     "vertex " + v.render() + " is not a subset of the carrier " +
                         net.carrier.render()});
    }
    if (v == net.carrier) {
      out.push_back({C0Rule::CarrierNotVertex,
                     "the carrier " + net.carrier.render() + " is a vertex"});
    }
  }
  for (const auto& e : net.edges) {
    if (!net.vertices.contains(e.first) || !net.vertices.contains(e.second)) {
      out.push_back({C0Rule::EdgesWithinVertices,
                     "edge " + edge_text(e) + " has an endpoint outside the vertex set"});
    }
    if (!allow_self_edges && e.first == e.second) {
      out.push_back({C0Rule::NoSelfLoop, "self-loop edge " + edge_text(e)});
    }
  }
  for (const auto& agent : net.carrier.members()) {
    bool covered = false;
    for (const auto& e : net.edges) {
      if (e.first.contains(agent) || e.second.contains(agent)) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      out.push_back({C0Rule::Coverage,
                     "agent " + agent + " occurs in no edge endpoint"});
    }
  }
  return out;
}

CohesionNetwork canonicalize(const CohesionNetwork& net) {
  CohesionNetwork out{net.carrier, {}, net.edges};
  for (const auto& e : net.edges) {
    out.vertices.insert(e.first);
    out.vertices.insert(e.second);
  }
  return out;
}

bool Filters::edge_ok(const Edge& e) const {
  if (disjoint_endpoints && e.first.intersects(e.second)) return false;
  if (singleton_benefactors && !e.first.degenerate()) return false;
  if (singleton_beneficiaries && !e.second.degenerate()) return false;
  return true;
}

bool Filters::network_ok(const CohesionNetwork& net) const {
  if (max_edges && net.edges.size() > *max_edges) return false;
  return std::all_of(net.edges.begin(), net.edges.end(),
                     [&](const Edge& e) { return edge_ok(e); });
}

bool Filters::any() const {
  return disjoint_endpoints || singleton_benefactors ||
         singleton_beneficiaries || max_edges.has_value();
}

std::vector<std::string> Filters::to_strings() const {
  std::vector<std::string> out;
  if (disjoint_endpoints) out.push_back("disjoint-endpoints");
  if (singleton_benefactors) out.push_back("singleton-benefactors");
  if (singleton_beneficiaries) out.push_back("singleton-beneficiaries");
  if (max_edges) out.push_back("max-edges:" + std::to_string(*max_edges));
  return out;
}

Filters Filters::from_strings(const std::vector<std::string>& names) {
  Filters f;
  for (const auto& name : names) {
    if (name == "disjoint-endpoints") {
      f.disjoint_endpoints = true;
    } else if (name == "singleton-benefactors") {
      f.singleton_benefactors = true;
    } else if (name == "singleton-beneficiaries") {
      f.singleton_beneficiaries = true;
    } else if (name.starts_with("max-edges:")) {
      const std::string num = name.substr(10);
      std::size_t parsed = 0;
      try {
        parsed = std::stoull(num);
      } catch (const std::exception&) {
        throw ClassSpecError("bad max-edges filter: " + name);
      }
      if (parsed == 0) throw ClassSpecError("max-edges must be positive");
      f.max_edges = f.max_edges ? std::min(*f.max_edges, parsed) : parsed;
    } else {
      throw ClassSpecError("unknown filter: " + name);
    }
  }
  return f;
}

NetworkClass NetworkClass::c0() { return NetworkClass{}; }

NetworkClass NetworkClass::all_help_rest() {
  NetworkClass c;
  c.base_ = Base::AllHelpRest;
  return c;
}

NetworkClass NetworkClass::builtin(const std::string& name) {
  if (name == "c0") return c0();
  if (name == "all-help-rest") return all_help_rest();
  throw ClassSpecError("unknown builtin class: " + name);
}

NetworkClass NetworkClass::explicit_networks(
    std::map<Group, std::vector<CohesionNetwork>> networks) {
  NetworkClass c;
  c.base_ = Base::Explicit;
  c.explicit_ = std::move(networks);
  return c;
}

NetworkClass NetworkClass::filtered(const Filters& extra) const {
  NetworkClass c = *this;
  c.filters_.disjoint_endpoints |= extra.disjoint_endpoints;
  c.filters_.singleton_benefactors |= extra.singleton_benefactors;
  c.filters_.singleton_beneficiaries |= extra.singleton_beneficiaries;
  if (extra.max_edges) {
    c.filters_.max_edges = c.filters_.max_edges
                               ? std::min(*c.filters_.max_edges, *extra.max_edges)
                               : extra.max_edges;
  }
  return c;
}

namespace {

Group group_from_json(const json& arr) {
  if (!arr.is_array() || arr.empty()) {
    throw ClassSpecError("groups must be nonempty arrays of agent names");
  }
  std::vector<AgentId> members;
  for (const auto& a : arr) {
    if (!a.is_string()) throw ClassSpecError("agent names must be strings");
    members.push_back(a.get<std::string>());
  }
  return Group(std::move(members));
}

json group_to_json(const Group& g) {
  json arr = json::array();
  for (const auto& a : g.members()) arr.push_back(a);
  return arr;
}

Group group_from_key(const std::string& key) {
  std::vector<AgentId> members;
  std::stringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) members.push_back(item);
  }
  if (members.empty()) throw ClassSpecError("empty group key: '" + key + "'");
  return Group(std::move(members));
}

CohesionNetwork network_from_json(const Group& carrier, const json& obj) {
  if (!obj.is_object()) throw ClassSpecError("networks must be objects");
  for (const auto& [key, _] : obj.items()) {
    if (key != "edges" && key != "vertices") {
      throw ClassSpecError("unknown network key: " + key);
    }
  }
  if (!obj.contains("edges") || !obj.at("edges").is_array()) {
    throw ClassSpecError("networks need an 'edges' array");
  }
  CohesionNetwork net{carrier, {}, {}};
  for (const auto& pair : obj.at("edges")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ClassSpecError("edges must be [benefactor, beneficiary] pairs");
    }
    net.edges.emplace(group_from_json(pair.at(0)), group_from_json(pair.at(1)));
  }
  if (obj.contains("vertices")) {
    for (const auto& v : obj.at("vertices")) net.vertices.insert(group_from_json(v));
  } else {
    net = canonicalize(net);
  }
  return net;
}

}  // namespace

NetworkClass NetworkClass::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ClassSpecError(std::string("bad class file JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ClassSpecError("class files must hold an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "kind" && key != "name" && key != "filters" && key != "networks") {
      throw ClassSpecError("unknown class file key: " + key);
    }
  }
  if (!doc.contains("kind") || !doc.at("kind").is_string()) {
    throw ClassSpecError("class files need a 'kind' string");
  }
  const std::string kind = doc.at("kind").get<std::string>();
  NetworkClass cls;
  if (kind == "builtin") {
    if (!doc.contains("name") || !doc.at("name").is_string()) {
      throw ClassSpecError("builtin classes need a 'name'");
    }
    cls = builtin(doc.at("name").get<std::string>());
  } else if (kind == "explicit") {
    if (!doc.contains("networks") || !doc.at("networks").is_object()) {
      throw ClassSpecError("explicit classes need a 'networks' object");
    }
    std::map<Group, std::vector<CohesionNetwork>> map;
    for (const auto& [key, list] : doc.at("networks").items()) {
      Group g = group_from_key(key);
      if (g.degenerate()) {
        throw ClassSpecError("explicit classes may not map the degenerate group " +
                             g.render());
      }
      if (!list.is_array()) {
        throw ClassSpecError("explicit class entries must be arrays");
      }
      std::vector<CohesionNetwork> nets;
      for (const auto& obj : list) nets.push_back(network_from_json(g, obj));
      map.emplace(std::move(g), std::move(nets));
    }
    cls = explicit_networks(std::move(map));
  } else {
    throw ClassSpecError("unknown class kind: " + kind);
  }
  if (doc.contains("filters")) {
    if (!doc.at("filters").is_array()) {
      throw ClassSpecError("'filters' must be an array of strings");
    }
    std::vector<std::string> names;
    for (const auto& f : doc.at("filters")) {
      if (!f.is_string()) throw ClassSpecError("filters must be strings");
      names.push_back(f.get<std::string>());
    }
    cls = cls.filtered(Filters::from_strings(names));
  }
  return cls;
}

NetworkClass NetworkClass::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ClassSpecError("cannot open class file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

NetworkClass NetworkClass::from_spec(const std::string& spec) {
  if (spec == "c0" || spec == "all-help-rest") return builtin(spec);
  return load_file(spec);
}

std::string NetworkClass::to_json_text() const {
  json doc;
  if (base_ == Base::Explicit) {
    doc["kind"] = "explicit";
    json nets = json::object();
    for (const auto& [g, list] : explicit_) {
      json arr = json::array();
      for (const auto& net : list) {
        json edges = json::array();
        for (const auto& e : net.edges) {
          edges.push_back(json::array({group_to_json(e.first), group_to_json(e.second)}));
        }
        json vertices = json::array();
        for (const auto& v : net.vertices) vertices.push_back(group_to_json(v));
        arr.push_back(json{{"edges", edges}, {"vertices", vertices}});
      }
      nets[g.key()] = arr;
    }
    doc["networks"] = nets;
  } else {
    doc["kind"] = "builtin";
    doc["name"] = base_ == Base::C0 ? "c0" : "all-help-rest";
  }
  if (filters_.any()) doc["filters"] = filters_.to_strings();
  return doc.dump(2);
}

std::string NetworkClass::describe() const {
  std::string out;
  switch (base_) {
    case Base::C0: out = "c0"; break;
    case Base::AllHelpRest: out = "all-help-rest"; break;
    case Base::Explicit:
      out = "explicit(" + std::to_string(explicit_.size()) + " groups)";
      break;
  }
  for (const auto& f : filters_.to_strings()) out += " +" + f;
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

// Fixed-size index combinations of [0, universe) in colexicographic order,
// which is exactly increasing order of the corresponding bitmasks.
struct ComboStream {
  std::vector<std::size_t> idx;
  std::size_t universe = 0;
  bool done = false;

  ComboStream(std::size_t size, std::size_t universe_) : universe(universe_) {
    if (size > universe) {
      done = true;
      return;
    }
    idx.resize(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  }

  void advance() {
    const std::size_t s = idx.size();
    for (std::size_t i = 0; i < s; ++i) {
      const std::size_t limit = (i + 1 < s) ? idx[i + 1] : universe;
      if (idx[i] + 1 < limit) {
        ++idx[i];
        for (std::size_t j = 0; j < i; ++j) idx[j] = j;
        return;
      }
    }
    done = true;
  }
};

bool colex_less(const std::vector<std::size_t>& a,
                const std::vector<std::size_t>& b) {
  auto i = a.rbegin();
  auto j = b.rbegin();
  for (; i != a.rend() && j != b.rend(); ++i, ++j) {
    if (*i != *j) return *i < *j;
  }
  return a.size() < b.size();
}

}  // namespace

struct NetworkEnumerator::Impl {
  // Prepared output (all-help-rest, explicit).
  std::vector<CohesionNetwork> prepared;
  std::size_t prepared_pos = 0;
  bool use_prepared = false;

  // Streamed c0-based enumeration.
  Group carrier{{"?"}};
  std::vector<Edge> universe;
  std::vector<std::uint64_t> edge_masks;
  std::uint64_t full_mask = 0;
  std::vector<ComboStream> streams;
  bool minimal_only = false;
  std::uint64_t scanned = 0;
  std::uint64_t max_scan = 0;

  std::optional<CohesionNetwork> next() {
    if (use_prepared) {
      if (prepared_pos >= prepared.size()) return std::nullopt;
      return prepared[prepared_pos++];
    }
    while (true) {
      ComboStream* best = nullptr;
      for (auto& s : streams) {
        if (s.done) continue;
        if (!best || colex_less(s.idx, best->idx)) best = &s;
      }
      if (!best) return std::nullopt;
      if (++scanned > max_scan) {
        throw BoundError("enumeration scan budget exhausted (bound " +
                         std::to_string(max_scan) +
                         " candidates); refine the class");
      }
      const std::vector<std::size_t> pick = best->idx;
      best->advance();
      std::uint64_t cover = 0;
      for (const auto k : pick) cover |= edge_masks[k];
      if (cover != full_mask) continue;
      if (minimal_only) {
        bool every_edge_needed = true;
        for (std::size_t drop = 0; drop < pick.size() && every_edge_needed;
             ++drop) {
          std::uint64_t rest = 0;
          for (std::size_t k = 0; k < pick.size(); ++k) {
            if (k != drop) rest |= edge_masks[pick[k]];
          }
          if (rest == full_mask) every_edge_needed = false;
        }
        if (!every_edge_needed) continue;
      }
      CohesionNetwork net{carrier, {}, {}};
      for (const auto k : pick) net.edges.insert(universe[k]);
      return canonicalize(net);
    }
  }
};

std::optional<CohesionNetwork> NetworkEnumerator::next() {
  return impl_->next();
}

namespace {

void check_enumeration_pre(const Group& g, const EnumerationOptions& opts) {
  if (g.degenerate()) {
    throw BoundError("degenerate group " + g.render() +
                     ": cohesion networks need at least two agents");
  }
  if (g.size() > opts.max_group_size) {
    throw BoundError("group size " + std::to_string(g.size()) +
                     " exceeds the enumeration bound " +
                     std::to_string(opts.max_group_size));
  }
}

std::vector<Edge> edge_universe(const Group& g, const Filters& filters,
                                const EnumerationOptions& opts) {
  const auto vertices = strict_subsets(g);
  std::vector<Edge> out;
  for (const auto& c1 : vertices) {
    for (const auto& c2 : vertices) {
      if (c1 == c2 && !opts.allow_self_edges) continue;
      Edge e{c1, c2};
      if (filters.edge_ok(e)) out.push_back(std::move(e));
    }
  }
  return out;
}

std::optional<CohesionNetwork> all_help_rest_network(const Group& g,
                                                     const Filters& filters) {
  CohesionNetwork net{g, {}, {}};
  for (const auto& agent : g.members()) {
    net.edges.emplace(Group{agent}, g.without(agent));
  }
  net = canonicalize(net);
  if (!filters.network_ok(net)) return std::nullopt;
  return net;
}

// Deterministic order for prepared lists: increasing edge-bitmask over the
// ordered edge universe, matching the streamed enumeration.
void sort_by_universe_order(std::vector<CohesionNetwork>& nets, const Group& g,
                            const EnumerationOptions& opts) {
  const auto universe = edge_universe(g, Filters{}, opts);
  std::map<Edge, std::size_t> index;
  for (std::size_t i = 0; i < universe.size(); ++i) index[universe[i]] = i;
  auto key_of = [&](const CohesionNetwork& net) {
    std::vector<std::size_t> key;
    for (const auto& e : net.edges) {
      auto it = index.find(e);
      key.push_back(it == index.end() ? universe.size() : it->second);
    }
    std::sort(key.begin(), key.end());
    return key;
  };
  std::stable_sort(nets.begin(), nets.end(),
                   [&](const CohesionNetwork& a, const CohesionNetwork& b) {
                     return colex_less(key_of(a), key_of(b));
                   });
}

std::vector<CohesionNetwork> explicit_members(const NetworkClass& cls,
                                              const Group& g,
                                              const EnumerationOptions& opts) {
  std::vector<CohesionNetwork> out;
  const auto it = cls.explicit_map().find(g);
  if (it == cls.explicit_map().end()) return out;
  for (const auto& raw : it->second) {
    CohesionNetwork net = opts.raw_vertices ? raw : canonicalize(raw);
    const auto violations = check_c0(net, opts.allow_self_edges);
    if (!violations.empty()) {
      throw ClassSpecError("explicit class lists an inadmissible network for " +
                           g.render() + ": " + violations.front().detail);
    }
    if (!cls.filters().network_ok(net)) continue;
    if (std::find(out.begin(), out.end(), net) == out.end()) {
      out.push_back(std::move(net));
    }
  }
  sort_by_universe_order(out, g, opts);
  return out;
}

}  // namespace

NetworkEnumerator members(const NetworkClass& cls, const Group& g,
                          const EnumerationOptions& opts) {
  check_enumeration_pre(g, opts);
  NetworkEnumerator e;
  e.impl_ = std::make_shared<NetworkEnumerator::Impl>();
  auto& impl = *e.impl_;
  switch (cls.base()) {
    case NetworkClass::Base::AllHelpRest: {
      impl.use_prepared = true;
      if (auto net = all_help_rest_network(g, cls.filters())) {
        impl.prepared.push_back(std::move(*net));
      }
      break;
    }
    case NetworkClass::Base::Explicit: {
      impl.use_prepared = true;
      impl.prepared = explicit_members(cls, g, opts);
      break;
    }
    case NetworkClass::Base::C0: {
      impl.carrier = g;
      impl.universe = edge_universe(g, cls.filters(), opts);
      impl.full_mask =
          (std::uint64_t{1} << g.size()) - 1;
      impl.edge_masks.reserve(impl.universe.size());
      for (const auto& edge : impl.universe) {
        impl.edge_masks.push_back(agent_mask(edge.first, g) |
                                  agent_mask(edge.second, g));
      }
      impl.max_scan = opts.max_scan;
      const std::size_t cap =
          cls.filters().max_edges
              ? std::min(*cls.filters().max_edges, impl.universe.size())
              : impl.universe.size();
      for (std::size_t s = 1; s <= cap; ++s) {
        impl.streams.emplace_back(s, impl.universe.size());
      }
      break;
    }
  }
  return e;
}

std::vector<CohesionNetwork> collect_members(const NetworkClass& cls,
                                             const Group& g,
                                             const EnumerationOptions& opts,
                                             std::size_t limit) {
  auto stream = members(cls, g, opts);
  std::vector<CohesionNetwork> out;
  while (auto net = stream.next()) {
    out.push_back(std::move(*net));
    if (limit != 0 && out.size() >= limit) break;
  }
  return out;
}

namespace {

bool covers(const std::set<Edge>& edges, const Group& g) {
  std::uint64_t cover = 0;
  for (const auto& e : edges) {
    cover |= agent_mask(e.first, g) | agent_mask(e.second, g);
  }
  return cover == (std::uint64_t{1} << g.size()) - 1;
}

std::vector<CohesionNetwork> minimal_explicit(const NetworkClass& cls,
                                              const Group& g,
                                              const EnumerationOptions& opts) {
  const auto all = explicit_members(cls, g, opts);
  // Monotonicity: deleting any edge while preserving coverage must land back
  // in the class.
  for (const auto& net : all) {
    for (const auto& e : net.edges) {
      std::set<Edge> rest = net.edges;
      rest.erase(e);
      if (rest.empty() || !covers(rest, g)) continue;
      const CohesionNetwork shrunk = canonicalize({g, {}, rest});
      const bool listed =
          std::any_of(all.begin(), all.end(), [&](const CohesionNetwork& m) {
            return canonicalize(m).edges == shrunk.edges;
          });
      if (!listed) {
        throw ClassSpecError(
            "explicit class is not edge-monotone: dropping " + edge_text(e) +
            " from a member of " + g.render() + " leaves the class");
      }
    }
  }
  std::vector<CohesionNetwork> out;
  for (const auto& net : all) {
    const bool minimal =
        std::none_of(all.begin(), all.end(), [&](const CohesionNetwork& m) {
          return m.edges != net.edges &&
                 std::includes(net.edges.begin(), net.edges.end(),
                               m.edges.begin(), m.edges.end());
        });
    if (minimal) out.push_back(net);
  }
  return out;
}

}  // namespace

std::vector<CohesionNetwork> minimal_members(const NetworkClass& cls,
                                             const Group& g,
                                             const EnumerationOptions& opts) {
  check_enumeration_pre(g, opts);
  switch (cls.base()) {
    case NetworkClass::Base::AllHelpRest:
      // Singleton class: its lone member is trivially the minimal cover set.
      return collect_members(cls, g, opts);
    case NetworkClass::Base::Explicit:
      return minimal_explicit(cls, g, opts);
    case NetworkClass::Base::C0:
      break;
  }
  // Per-edge filters and max-edges are closed under edge deletion, so minimal
  // members are exactly the covers in which every edge contributes an agent;
  // such covers have at most |G| edges.
  NetworkEnumerator e;
  e.impl_ = std::make_shared<NetworkEnumerator::Impl>();
  auto& impl = *e.impl_;
  impl.carrier = g;
  impl.universe = edge_universe(g, cls.filters(), opts);
  impl.full_mask = (std::uint64_t{1} << g.size()) - 1;
  for (const auto& edge : impl.universe) {
    impl.edge_masks.push_back(agent_mask(edge.first, g) |
                              agent_mask(edge.second, g));
  }
  impl.max_scan = opts.max_scan;
  impl.minimal_only = true;
  std::size_t cap = std::min<std::size_t>(g.size(), impl.universe.size());
  if (cls.filters().max_edges) cap = std::min(cap, *cls.filters().max_edges);
  for (std::size_t s = 1; s <= cap; ++s) {
    impl.streams.emplace_back(s, impl.universe.size());
  }
  std::vector<CohesionNetwork> out;
  while (auto net = e.next()) out.push_back(std::move(*net));
  return out;
}

}  // namespace cohesion
