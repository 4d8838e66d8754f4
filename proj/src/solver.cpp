#include "cohesion/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

namespace cohesion {

namespace {

constexpr std::size_t kMaxAtomics = 62;

struct Node {
  Formula::Kind kind;
  int child_a = -1;      // Not body / And left / modal body
  int child_b = -1;      // And right
  int bit = -1;          // atomic index for Atom/Brings/Attempts
  FormulaPtr formula;    // the subformula this node stands for
  AgentId agent;         // modal nodes only
};

// Subformula closure of a desugared goal, children before parents, with one
// free bit per propositional atom and per modal atom.
struct NodeTable {
  std::vector<Node> nodes;
  int root = -1;
  std::size_t n_bits = 0;
  std::vector<int> modal_e;  // node indices of E atoms
  std::vector<int> modal_a;  // node indices of A atoms

  explicit NodeTable(const FormulaPtr& g) {
    std::unordered_map<FormulaPtr, int, FormulaHash, FormulaEq> index;
    const auto subs = subformulas(g);
    nodes.reserve(subs.size());
    for (const auto& f : subs) {
      Node n;
      n.kind = f->kind();
      n.formula = f;
      switch (f->kind()) {
        case Formula::Kind::Top:
          break;
        case Formula::Kind::Atom:
          break;
        case Formula::Kind::Not:
          n.child_a = index.at(f->body());
          break;
        case Formula::Kind::And:
          n.child_a = index.at(f->left());
          n.child_b = index.at(f->right());
          break;
        case Formula::Kind::Brings:
        case Formula::Kind::Attempts:
          n.child_a = index.at(f->body());
          n.agent = f->group().members().front();
          break;
        default:
          throw std::logic_error("solver table built from undesugared formula");
      }
      index.emplace(f, static_cast<int>(nodes.size()));
      nodes.push_back(std::move(n));
    }
    root = static_cast<int>(nodes.size()) - 1;

    // Deterministic bit order: atoms by name, then modal atoms by rendering.
    std::vector<int> atom_nodes, modal_nodes;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      if (nodes[i].kind == Formula::Kind::Atom) atom_nodes.push_back(i);
      if (nodes[i].kind == Formula::Kind::Brings ||
          nodes[i].kind == Formula::Kind::Attempts) {
        modal_nodes.push_back(i);
      }
    }
    std::sort(atom_nodes.begin(), atom_nodes.end(), [&](int a, int b) {
      return nodes[a].formula->name() < nodes[b].formula->name();
    });
    std::sort(modal_nodes.begin(), modal_nodes.end(), [&](int a, int b) {
      return render(nodes[a].formula) < render(nodes[b].formula);
    });
    int bit = 0;
    for (int i : atom_nodes) nodes[i].bit = bit++;
    for (int i : modal_nodes) nodes[i].bit = bit++;
    n_bits = static_cast<std::size_t>(bit);
    if (n_bits > kMaxAtomics) {
      throw Error("formula has " + std::to_string(n_bits) +
                  " atomic subformulas; the labeling search cannot enumerate "
                  "that many");
    }
    for (int i : modal_nodes) {
      (nodes[i].kind == Formula::Kind::Brings ? modal_e : modal_a).push_back(i);
    }
  }

  void eval(std::uint64_t mask, std::vector<char>& val) const {
    val.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& n = nodes[i];
      switch (n.kind) {
        case Formula::Kind::Top:
          val[i] = 1;
          break;
        case Formula::Kind::Atom:
        case Formula::Kind::Brings:
        case Formula::Kind::Attempts:
          val[i] = (mask >> n.bit) & 1;
          break;
        case Formula::Kind::Not:
          val[i] = !val[n.child_a];
          break;
        case Formula::Kind::And:
          val[i] = val[n.child_a] && val[n.child_b];
          break;
        default:
          val[i] = 0;
          break;
      }
    }
  }

  const FormulaPtr& body_of(int modal_node) const {
    return nodes[modal_node].formula->body();
  }
};

struct Ctx {
  std::chrono::steady_clock::time_point start;
  std::chrono::steady_clock::time_point deadline;
  bool has_deadline = false;
  std::unordered_map<std::string, bool> memo;
  SolverStats stats;

  explicit Ctx(std::chrono::milliseconds timeout)
      : start(std::chrono::steady_clock::now()) {
    if (timeout.count() > 0) {
      deadline = start + timeout;
      has_deadline = true;
    }
  }

  void check_deadline() {
    if (has_deadline && std::chrono::steady_clock::now() > deadline) {
      finish();
      throw TimeoutError("solver timeout exceeded", stats);
    }
  }

  void finish() {
    stats.elapsed_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  }
};

bool decide(Ctx& ctx, const FormulaPtr& g);

// No-tautology: every positively labeled E body must be falsifiable.
bool notaut_ok(Ctx& ctx, const NodeTable& t, const std::vector<char>& val) {
  for (int i : t.modal_e) {
    if (!val[i]) continue;
    if (!decide(ctx, Formula::negate(t.body_of(i)))) return false;
  }
  return true;
}

// Congruence: same-agent modal atoms labeled apart need non-equivalent
// bodies, witnessed by a satisfiable difference in one direction.
bool pairs_ok(Ctx& ctx, const NodeTable& t, const std::vector<char>& val,
              const std::vector<int>& atoms) {
  for (int i : atoms) {
    if (!val[i]) continue;
    for (int j : atoms) {
      if (val[j] || t.nodes[i].agent != t.nodes[j].agent) continue;
      const auto& psi = t.body_of(i);
      const auto& chi = t.body_of(j);
      if (decide(ctx, Formula::conj(psi, Formula::negate(chi)))) continue;
      if (decide(ctx, Formula::conj(Formula::negate(psi), chi))) continue;
      return false;
    }
  }
  return true;
}

bool labeling_accepted(Ctx& ctx, const NodeTable& t,
                       const std::vector<char>& val) {
  for (int i : t.modal_e) {
    if (val[i] && !val[t.nodes[i].child_a]) return false;  // success coherence
  }
  return notaut_ok(ctx, t, val) && pairs_ok(ctx, t, val, t.modal_e) &&
         pairs_ok(ctx, t, val, t.modal_a);
}

bool decide(Ctx& ctx, const FormulaPtr& g) {
  const std::string key = render(g);
  if (const auto it = ctx.memo.find(key); it != ctx.memo.end()) {
    return it->second;
  }
  ctx.stats.sat_queries++;
  const NodeTable t(g);
  const std::uint64_t total = std::uint64_t{1} << t.n_bits;
  std::vector<char> val;
  bool result = false;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if ((mask & 1023) == 0) ctx.check_deadline();
    ctx.stats.labelings_tried++;
    t.eval(mask, val);
    if (!val[t.root]) continue;
    if (labeling_accepted(ctx, t, val)) {
      result = true;
      break;
    }
  }
  ctx.memo.emplace(key, result);
  return result;
}

// Assembles a concrete model from full-closure labelings: the designated one
// plus, to fixpoint, a falsifying labeling per positively labeled E body and
// a distinguishing labeling per differently labeled same-agent pair.
class WitnessBuilder {
 public:
  WitnessBuilder(Ctx& ctx, const FormulaPtr& g0) : ctx_(ctx), t_(g0) {}

  Witness build(const FormulaPtr& original) {
    add_world([&](const std::vector<char>& val) { return val[t_.root] != 0; });
    saturate();
    NeighborhoodModel m = assemble();
    const WorldId designated = world_name(0);
    if (!validate(m).empty() || !model_check(m, designated, original)) {
      throw Error("internal error: witness model failed re-validation");
    }
    return {std::move(m), designated};
  }

 private:
  void saturate() {
    std::set<int> falsified_done;
    std::set<std::pair<int, int>> distinguished_done;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t w = 0; w < world_vals_.size(); ++w) {
        for (int i : t_.modal_e) {
          if (!world_vals_[w][i]) continue;
          const int b = t_.nodes[i].child_a;
          if (falsified_done.contains(b)) continue;
          falsified_done.insert(b);
          if (!some_world([&](const std::vector<char>& val) { return !val[b]; })) {
            add_world([&](const std::vector<char>& val) { return !val[b]; });
            changed = true;
          }
        }
        changed |= distinguish_pairs(w, t_.modal_e, distinguished_done);
        changed |= distinguish_pairs(w, t_.modal_a, distinguished_done);
      }
    }
  }

  bool distinguish_pairs(std::size_t w, const std::vector<int>& atoms,
                         std::set<std::pair<int, int>>& done) {
    bool changed = false;
    // Copy: add_world below may reallocate world_vals_.
    const std::vector<char> val = world_vals_[w];
    for (int i : atoms) {
      if (!val[i]) continue;
      for (int j : atoms) {
        if (val[j] || t_.nodes[i].agent != t_.nodes[j].agent) continue;
        const int bi = t_.nodes[i].child_a;
        const int bj = t_.nodes[j].child_a;
        const auto key = std::minmax(bi, bj);
        if (done.contains(key)) continue;
        done.insert(key);
        const auto differ = [bi, bj](const std::vector<char>& v) {
          return v[bi] != v[bj];
        };
        if (!some_world(differ)) {
          add_world(differ);
          changed = true;
        }
      }
    }
    return changed;
  }

  template <typename Goal>
  bool some_world(const Goal& goal) const {
    return std::any_of(world_vals_.begin(), world_vals_.end(), goal);
  }

  template <typename Goal>
  void add_world(const Goal& goal) {
    const std::uint64_t total = std::uint64_t{1} << t_.n_bits;
    std::vector<char> val;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      if ((mask & 1023) == 0) ctx_.check_deadline();
      ctx_.stats.labelings_tried++;
      t_.eval(mask, val);
      if (!goal(val)) continue;
      if (!labeling_accepted(ctx_, t_, val)) continue;
      if (std::find(world_masks_.begin(), world_masks_.end(), mask) ==
          world_masks_.end()) {
        world_masks_.push_back(mask);
        world_vals_.push_back(val);
      }
      return;
    }
    throw Error("internal error: no labeling for a witness obligation");
  }

  WorldId world_name(std::size_t index) const {
    std::string digits = std::to_string(index);
    const std::size_t width = std::to_string(world_vals_.size() - 1).size();
    return "w" + std::string(width - digits.size(), '0') + digits;
  }

  NeighborhoodModel assemble() const {
    NeighborhoodModel m;
    for (std::size_t w = 0; w < world_vals_.size(); ++w) {
      m.worlds.push_back(world_name(w));
    }

    // Truth set of a closure node across all labelings.
    const auto label_truth_set = [&](int node) {
      WorldSet out;
      for (std::size_t w = 0; w < world_vals_.size(); ++w) {
        if (world_vals_[w][node]) out.insert(world_name(w));
      }
      return out;
    };

    for (int i = 0; i < static_cast<int>(t_.nodes.size()); ++i) {
      if (t_.nodes[i].kind == Formula::Kind::Atom) {
        m.valuation[t_.nodes[i].formula->name()] = label_truth_set(i);
      }
    }

    std::set<AgentId> agents;
    for (int i : t_.modal_e) agents.insert(t_.nodes[i].agent);
    for (int i : t_.modal_a) agents.insert(t_.nodes[i].agent);
    for (const auto& agent : agents) {
      for (std::size_t w = 0; w < world_vals_.size(); ++w) {
        m.nbhd_e[agent][world_name(w)];
        m.nbhd_a[agent][world_name(w)];
      }
    }
    for (std::size_t w = 0; w < world_vals_.size(); ++w) {
      for (int i : t_.modal_e) {
        if (world_vals_[w][i]) {
          m.nbhd_e[t_.nodes[i].agent][world_name(w)].insert(
              label_truth_set(t_.nodes[i].child_a));
        }
      }
      for (int i : t_.modal_a) {
        if (world_vals_[w][i]) {
          m.nbhd_a[t_.nodes[i].agent][world_name(w)].insert(
              label_truth_set(t_.nodes[i].child_a));
        }
      }
    }
    return m;
  }

  Ctx& ctx_;
  NodeTable t_;
  std::vector<std::uint64_t> world_masks_;
  std::vector<std::vector<char>> world_vals_;
};

}  // namespace

SatResult Solver::sat(const FormulaPtr& f) const {
  if (!is_biat(f)) {
    throw std::invalid_argument(
        "sat expects a BIAT-fragment formula (singleton coalitions, no H); "
        "expand against a network class first");
  }
  Ctx ctx(opts_.timeout);
  const auto g0 = desugar(f);
  SatResult result;
  result.satisfiable = decide(ctx, g0);
  if (result.satisfiable && opts_.build_witness) {
    result.witness = WitnessBuilder(ctx, g0).build(f);
  }
  ctx.finish();
  result.stats = ctx.stats;
  return result;
}

bool Solver::valid(const FormulaPtr& f, const NetworkClass& cls) const {
  const auto negated =
      expand(Formula::negate(f), cls, opts_.budget, opts_.enumeration);
  Ctx ctx(opts_.timeout);
  const bool satisfiable = decide(ctx, desugar(negated));
  ctx.finish();
  return !satisfiable;
}

bool Solver::equivalent(const FormulaPtr& f, const FormulaPtr& g,
                        const NetworkClass& cls) const {
  return valid(Formula::iff(f, g), cls);
}

std::optional<Witness> Solver::countermodel(const FormulaPtr& f,
                                            const NetworkClass& cls) const {
  const auto negated =
      expand(Formula::negate(f), cls, opts_.budget, opts_.enumeration);
  Solver inner(opts_);
  auto result = inner.sat(negated);
  if (!result.satisfiable) return std::nullopt;
  return std::move(result.witness);
}

}  // namespace cohesion
