#include "cohesion/reduction.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "cohesion/errors.hpp"

namespace cohesion {

bool is_biat(const FormulaPtr& f) {
  for (const auto& g : subformulas(f)) {
    switch (g->kind()) {
      case Formula::Kind::Assists:
        return false;
      case Formula::Kind::Brings:
      case Formula::Kind::Attempts:
        if (!g->group().degenerate()) return false;
        break;
      default:
        break;
    }
  }
  return true;
}

namespace {

class Expander {
 public:
  Expander(const NetworkClass& cls, const ExpansionBudget& budget,
           const EnumerationOptions& opts, bool minimal)
      : cls_(cls), budget_(budget), opts_(opts), minimal_(minimal) {}

  FormulaPtr run(const FormulaPtr& f) {
    check_group_bounds(f);
    auto out = go(f);
    check_nodes(size_of(out));
    return out;
  }

 private:
  void check_group_bounds(const FormulaPtr& f) const {
    for (const auto& g : subformulas(f)) {
      const Group* groups[2] = {nullptr, nullptr};
      switch (g->kind()) {
        case Formula::Kind::Brings:
        case Formula::Kind::Attempts:
          groups[0] = &g->group();
          break;
        case Formula::Kind::Assists:
          groups[0] = &g->benefactor();
          groups[1] = &g->beneficiary();
          break;
        default:
          continue;
      }
      for (const Group* grp : groups) {
        if (grp && grp->size() > opts_.max_group_size) {
          throw BoundError("group " + grp->render() + " of size " +
                           std::to_string(grp->size()) +
                           " exceeds the enumeration bound " +
                           std::to_string(opts_.max_group_size));
        }
      }
    }
  }

  void check_nodes(std::size_t size) const {
    if (size > budget_.max_output_nodes) {
      throw BudgetError("expansion exceeded max_output_nodes=" +
                            std::to_string(budget_.max_output_nodes) +
                            " (reached " + std::to_string(size) + " nodes)",
                        size);
    }
  }

  std::size_t size_of(const FormulaPtr& f) {
    if (auto it = sizes_.find(f); it != sizes_.end()) return it->second;
    const std::size_t n = tree_size(f);
    sizes_.emplace(f, n);
    return n;
  }

  FormulaPtr go(const FormulaPtr& f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    FormulaPtr out;
    switch (f->kind()) {
      case Formula::Kind::Top:
      case Formula::Kind::Bottom:
      case Formula::Kind::Atom:
        out = f;
        break;
      case Formula::Kind::Not:
        out = Formula::negate(go(f->body()));
        break;
      case Formula::Kind::And:
        out = Formula::conj(go(f->left()), go(f->right()));
        break;
      case Formula::Kind::Or:
        out = Formula::disj(go(f->left()), go(f->right()));
        break;
      case Formula::Kind::Implies:
        out = Formula::implies(go(f->left()), go(f->right()));
        break;
      case Formula::Kind::Iff:
        out = Formula::iff(go(f->left()), go(f->right()));
        break;
      case Formula::Kind::Brings:
        out = f->group().degenerate()
                  ? Formula::brings(f->group(), go(f->body()))
                  : group_brings(f->group(), f->body());
        break;
      case Formula::Kind::Attempts:
        out = f->group().degenerate()
                  ? Formula::attempts(f->group(), go(f->body()))
                  : group_attempts(f->group(), f->body());
        break;
      case Formula::Kind::Assists:
        out = go(assistance(f->benefactor(), f->beneficiary(), f->body()));
        break;
    }
    memo_.emplace(f, out);
    return out;
  }

  // H{C1}>{C2} b unfolds to E{C1}(A{C2} b -> b) & A{C2} b before expansion.
  static FormulaPtr assistance(const Group& benefactor, const Group& beneficiary,
                               const FormulaPtr& body) {
    auto tries = Formula::attempts(beneficiary, body);
    return Formula::conj(
        Formula::brings(benefactor, Formula::implies(tries, body)),
        Formula::attempts(beneficiary, body));
  }

  FormulaPtr group_attempts(const Group& g, const FormulaPtr& body) {
    const auto expanded = go(body);
    FormulaPtr out;
    for (const auto& agent : g.members()) {
      auto part = Formula::attempts(Group{agent}, expanded);
      out = out ? Formula::conj(std::move(out), std::move(part)) : std::move(part);
    }
    return out;
  }

  FormulaPtr group_brings(const Group& g, const FormulaPtr& body) {
    std::vector<CohesionNetwork> nets;
    if (minimal_) {
      nets = minimal_members(cls_, g, opts_);
      if (nets.size() > budget_.max_disjuncts_per_group) {
        throw BudgetError("disjunction for " + g.render() + " exceeded " +
                              std::to_string(budget_.max_disjuncts_per_group) +
                              " disjuncts",
                          nets.size());
      }
      return assemble_disjunction(g, body, nets);
    }
    auto stream = members(cls_, g, opts_);
    while (auto net = stream.next()) {
      nets.push_back(std::move(*net));
      if (nets.size() > budget_.max_disjuncts_per_group) {
        throw BudgetError("disjunction for " + g.render() + " exceeded " +
                              std::to_string(budget_.max_disjuncts_per_group) +
                              " disjuncts",
                          nets.size());
      }
    }
    return assemble_disjunction(g, body, nets);
  }

  FormulaPtr assemble_disjunction(const Group& g, const FormulaPtr& body,
                                  const std::vector<CohesionNetwork>& nets) {
    std::vector<FormulaPtr> disjuncts;
    std::size_t running = 0;
    for (const auto& net : nets) {
      auto d = disjunct_for(net, body);
      const bool dup = std::any_of(
          disjuncts.begin(), disjuncts.end(),
          [&](const FormulaPtr& seen) { return equal(seen, d); });
      if (dup) continue;
      running += size_of(d) + 1;
      check_nodes(running);
      disjuncts.push_back(std::move(d));
    }
    if (disjuncts.empty()) return Formula::bottom();
    FormulaPtr out = disjuncts.front();
    for (std::size_t i = 1; i < disjuncts.size(); ++i) {
      out = Formula::disj(std::move(out), disjuncts[i]);
    }
    return out;
  }

  // One network's conjunction over its prescribed assists, flattened,
  // deduplicated and sorted by rendered text for stable output.
  FormulaPtr disjunct_for(const CohesionNetwork& net, const FormulaPtr& body) {
    std::vector<FormulaPtr> conjuncts;
    for (const auto& e : net.edges) {
      flatten_and(go(assistance(e.first, e.second, body)), conjuncts);
    }
    std::sort(conjuncts.begin(), conjuncts.end(),
              [](const FormulaPtr& a, const FormulaPtr& b) {
                return render(a) < render(b);
              });
    conjuncts.erase(std::unique(conjuncts.begin(), conjuncts.end(),
                                [](const FormulaPtr& a, const FormulaPtr& b) {
                                  return equal(a, b);
                                }),
                    conjuncts.end());
    FormulaPtr out = conjuncts.front();
    for (std::size_t i = 1; i < conjuncts.size(); ++i) {
      out = Formula::conj(std::move(out), conjuncts[i]);
    }
    return out;
  }

  static void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (f->kind() == Formula::Kind::And) {
      flatten_and(f->left(), out);
      flatten_and(f->right(), out);
    } else {
      out.push_back(f);
    }
  }

  const NetworkClass& cls_;
  ExpansionBudget budget_;
  EnumerationOptions opts_;
  bool minimal_;
  std::unordered_map<FormulaPtr, FormulaPtr, FormulaHash, FormulaEq> memo_;
  std::unordered_map<FormulaPtr, std::size_t, FormulaHash, FormulaEq> sizes_;
};

}  // namespace

FormulaPtr expand(const FormulaPtr& f, const NetworkClass& cls,
                  const ExpansionBudget& budget, const EnumerationOptions& opts) {
  return Expander(cls, budget, opts, false).run(f);
}

FormulaPtr expand_minimal(const FormulaPtr& f, const NetworkClass& cls,
                          const ExpansionBudget& budget,
                          const EnumerationOptions& opts) {
  return Expander(cls, budget, opts, true).run(f);
}

}  // namespace cohesion
