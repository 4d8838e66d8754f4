#include "cohesion/model.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cohesion/errors.hpp"

namespace cohesion {

namespace {

using nlohmann::json;

std::string set_text(const WorldSet& s) {
  std::string out = "{";
  for (const auto& w : s) {
    if (out.size() > 1) out += ',';
    out += w;
  }
  return out + "}";
}

bool world_exists(const NeighborhoodModel& m, const WorldId& w) {
  return std::binary_search(m.worlds.begin(), m.worlds.end(), w);
}

void validate_neighborhoods(const NeighborhoodModel& m, const NeighborhoodMap& map,
                            bool agency, std::vector<FrameViolation>& out) {
  const WorldSet all(m.worlds.begin(), m.worlds.end());
  for (const auto& [agent, per_world] : map) {
    for (const auto& [w, family] : per_world) {
      if (!world_exists(m, w)) {
        out.push_back({"unknown-world", agent, w, {},
                       "neighborhood map mentions unknown world " + w});
        continue;
      }
      for (const auto& x : family) {
        for (const auto& u : x) {
          if (!world_exists(m, u)) {
            out.push_back({"unknown-world", agent, w, x,
                           "neighborhood contains unknown world " + u});
          }
        }
        if (!agency) continue;
        if (!x.contains(w)) {
          out.push_back({"T", agent, w, x,
                         "agency neighborhood " + set_text(x) +
                             " of world " + w + " does not contain it"});
        }
        if (x == all) {
          out.push_back({"no-unit", agent, w, x,
                         "agency neighborhood of world " + w +
                             " is the full world set"});
        }
      }
    }
  }
}

}  // namespace

std::vector<FrameViolation> validate(const NeighborhoodModel& m) {
  std::vector<FrameViolation> out;
  if (m.worlds.empty()) {
    out.push_back({"empty", "", "", {}, "models need at least one world"});
    return out;
  }
  if (!std::is_sorted(m.worlds.begin(), m.worlds.end()) ||
      std::adjacent_find(m.worlds.begin(), m.worlds.end()) != m.worlds.end()) {
    out.push_back({"unknown-world", "", "", {},
                   "world list must be sorted and duplicate-free"});
    return out;
  }
  for (const auto& [atom, worlds] : m.valuation) {
    for (const auto& w : worlds) {
      if (!world_exists(m, w)) {
        out.push_back({"unknown-world", "", w, {},
                       "valuation of " + atom + " mentions unknown world " + w});
      }
    }
  }
  validate_neighborhoods(m, m.nbhd_e, true, out);
  validate_neighborhoods(m, m.nbhd_a, false, out);
  return out;
}

namespace {

bool check_at(const NeighborhoodModel& m, const WorldId& w, const FormulaPtr& f);

WorldSet truth_set_of(const NeighborhoodModel& m, const FormulaPtr& f) {
  WorldSet out;
  for (const auto& w : m.worlds) {
    if (check_at(m, w, f)) out.insert(w);
  }
  return out;
}

const std::set<WorldSet>& family_at(const NeighborhoodMap& map, const AgentId& agent,
                                    const WorldId& w, const char* modality) {
  static const std::set<WorldSet> empty;
  const auto it = map.find(agent);
  if (it == map.end()) {
    throw ModelError(std::string("unknown agent ") + agent + " for modality " +
                     modality);
  }
  const auto jt = it->second.find(w);
  return jt == it->second.end() ? empty : jt->second;
}

bool check_at(const NeighborhoodModel& m, const WorldId& w, const FormulaPtr& f) {
  switch (f->kind()) {
    case Formula::Kind::Top:
      return true;
    case Formula::Kind::Bottom:
      return false;
    case Formula::Kind::Atom: {
      const auto it = m.valuation.find(f->name());
      if (it == m.valuation.end()) {
        throw ModelError("unknown atom " + f->name());
      }
      return it->second.contains(w);
    }
    case Formula::Kind::Not:
      return !check_at(m, w, f->body());
    case Formula::Kind::And:
      return check_at(m, w, f->left()) && check_at(m, w, f->right());
    case Formula::Kind::Or:
      return check_at(m, w, f->left()) || check_at(m, w, f->right());
    case Formula::Kind::Implies:
      return !check_at(m, w, f->left()) || check_at(m, w, f->right());
    case Formula::Kind::Iff:
      return check_at(m, w, f->left()) == check_at(m, w, f->right());
    case Formula::Kind::Brings:
    case Formula::Kind::Attempts: {
      if (!f->group().degenerate()) {
        throw std::invalid_argument(
            "model checking handles only singleton coalitions; expand group "
            "modalities against a network class first");
      }
      const AgentId& agent = f->group().members().front();
      const bool agency = f->kind() == Formula::Kind::Brings;
      const auto& family = family_at(agency ? m.nbhd_e : m.nbhd_a, agent, w,
                                     agency ? "E" : "A");
      return family.contains(truth_set_of(m, f->body()));
    }
    case Formula::Kind::Assists:
      throw std::invalid_argument(
          "model checking handles no assistance modality; expand it first");
  }
  return false;
}

}  // namespace

bool model_check(const NeighborhoodModel& m, const WorldId& w, const FormulaPtr& f) {
  if (!world_exists(m, w)) throw ModelError("unknown world " + w);
  return check_at(m, w, f);
}

WorldSet truth_set(const NeighborhoodModel& m, const FormulaPtr& f) {
  return truth_set_of(m, f);
}

NeighborhoodModel random_model(std::uint64_t seed, std::size_t n_worlds,
                               const std::vector<std::string>& atoms,
                               const std::vector<AgentId>& agents,
                               double density) {
  if (n_worlds < 1) throw Error("random_model needs at least one world");
  if (n_worlds > 10) {
    throw Error("random_model supports at most 10 worlds (extensional "
                "neighborhoods grow exponentially)");
  }
  if (density < 0.0 || density > 1.0) {
    throw Error("density must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  // Distribution-free draws keep output identical across standard libraries.
  const auto flip = [&rng]() { return (rng() & 1) != 0; };
  const auto with_density = [&rng, density]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < density;
  };

  NeighborhoodModel m;
  for (std::size_t i = 0; i < n_worlds; ++i) m.worlds.push_back("w" + std::to_string(i));
  std::sort(m.worlds.begin(), m.worlds.end());

  std::vector<std::string> sorted_atoms = atoms;
  std::sort(sorted_atoms.begin(), sorted_atoms.end());
  sorted_atoms.erase(std::unique(sorted_atoms.begin(), sorted_atoms.end()),
                     sorted_atoms.end());
  for (const auto& atom : sorted_atoms) {
    WorldSet trues;
    for (const auto& w : m.worlds) {
      if (flip()) trues.insert(w);
    }
    m.valuation[atom] = std::move(trues);
  }

  std::vector<AgentId> sorted_agents = agents;
  std::sort(sorted_agents.begin(), sorted_agents.end());
  sorted_agents.erase(std::unique(sorted_agents.begin(), sorted_agents.end()),
                      sorted_agents.end());

  const std::uint64_t n_subsets = std::uint64_t{1} << n_worlds;
  for (const auto& agent : sorted_agents) {
    for (std::size_t wi = 0; wi < n_worlds; ++wi) {
      const WorldId& w = m.worlds[wi];
      std::set<WorldSet> family_e, family_a;
      for (std::uint64_t mask = 0; mask < n_subsets; ++mask) {
        WorldSet x;
        for (std::size_t k = 0; k < n_worlds; ++k) {
          if (mask & (std::uint64_t{1} << k)) x.insert(m.worlds[k]);
        }
        // Agency candidates violating T or no-unit are skipped, not drawn.
        const bool frame_ok = x.contains(w) && mask + 1 != n_subsets;
        if (frame_ok && with_density()) family_e.insert(x);
        if (with_density()) family_a.insert(std::move(x));
      }
      m.nbhd_e[agent][w] = std::move(family_e);
      m.nbhd_a[agent][w] = std::move(family_a);
    }
  }
  return m;
}

namespace {

WorldSet world_set_from_json(const NeighborhoodModel& m, const json& arr,
                             const std::string& where) {
  if (!arr.is_array()) throw ModelError(where + " must be an array of worlds");
  WorldSet out;
  for (const auto& w : arr) {
    if (!w.is_string()) throw ModelError(where + " must contain world names");
    const auto id = w.get<std::string>();
    if (!world_exists(m, id)) {
      throw ModelError(where + " mentions unknown world " + id);
    }
    out.insert(id);
  }
  return out;
}

NeighborhoodMap neighborhoods_from_json(const NeighborhoodModel& m, const json& obj,
                                        const std::string& modality) {
  if (!obj.is_object()) throw ModelError(modality + " must be an object");
  NeighborhoodMap out;
  for (const auto& [agent, per_world] : obj.items()) {
    if (!per_world.is_object()) {
      throw ModelError(modality + "." + agent + " must map worlds to families");
    }
    std::map<WorldId, std::set<WorldSet>> worlds;
    for (const auto& [w, family] : per_world.items()) {
      if (!world_exists(m, w)) {
        throw ModelError(modality + "." + agent + " mentions unknown world " + w);
      }
      if (!family.is_array()) {
        throw ModelError(modality + "." + agent + "." + w + " must be an array");
      }
      std::set<WorldSet> sets;
      for (const auto& x : family) {
        sets.insert(world_set_from_json(m, x, modality + "." + agent + "." + w));
      }
      worlds.emplace(w, std::move(sets));
    }
    out.emplace(agent, std::move(worlds));
  }
  return out;
}

}  // namespace

NeighborhoodModel model_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("bad model JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError("model files must hold an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "worlds" && key != "valuation" && key != "E" && key != "A") {
      throw ModelError("unknown model key: " + key);
    }
  }
  if (!doc.contains("worlds") || !doc.at("worlds").is_array() ||
      doc.at("worlds").empty()) {
    throw ModelError("models need a nonempty 'worlds' array");
  }
  NeighborhoodModel m;
  for (const auto& w : doc.at("worlds")) {
    if (!w.is_string()) throw ModelError("world names must be strings");
    m.worlds.push_back(w.get<std::string>());
  }
  std::sort(m.worlds.begin(), m.worlds.end());
  if (std::adjacent_find(m.worlds.begin(), m.worlds.end()) != m.worlds.end()) {
    throw ModelError("duplicate world names");
  }
  if (doc.contains("valuation")) {
    if (!doc.at("valuation").is_object()) {
      throw ModelError("'valuation' must map atoms to world arrays");
    }
    for (const auto& [atom, arr] : doc.at("valuation").items()) {
      m.valuation[atom] = world_set_from_json(m, arr, "valuation." + atom);
    }
  }
  if (doc.contains("E")) m.nbhd_e = neighborhoods_from_json(m, doc.at("E"), "E");
  if (doc.contains("A")) m.nbhd_a = neighborhoods_from_json(m, doc.at("A"), "A");
  return m;
}

std::string model_to_json_text(const NeighborhoodModel& m) {
  json doc;
  doc["worlds"] = m.worlds;
  json val = json::object();
  for (const auto& [atom, worlds] : m.valuation) {
    val[atom] = std::vector<WorldId>(worlds.begin(), worlds.end());
  }
  doc["valuation"] = val;
  const auto dump_map = [](const NeighborhoodMap& map) {
    json out = json::object();
    for (const auto& [agent, per_world] : map) {
      json worlds = json::object();
      for (const auto& [w, family] : per_world) {
        json fam = json::array();
        for (const auto& x : family) {
          fam.push_back(std::vector<WorldId>(x.begin(), x.end()));
        }
        worlds[w] = fam;
      }
      out[agent] = worlds;
    }
    return out;
  };
  doc["E"] = dump_map(m.nbhd_e);
  doc["A"] = dump_map(m.nbhd_a);
  return doc.dump(2);
}

NeighborhoodModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json_text(buf.str());
}

void save_model_file(const NeighborhoodModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write model file: " + path);
  out << model_to_json_text(m) << "\n";
}

}  // namespace cohesion
