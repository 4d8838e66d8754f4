#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cohesion {

using AgentId = std::string;

// Nonempty, duplicate-free coalition of agents. Members are kept sorted;
// ordering between groups is (size, lexicographic members), which is also the
// vertex order used by network enumeration.
class Group {
 public:
  explicit Group(std::vector<AgentId> members);
  Group(std::initializer_list<AgentId> members)
      : Group(std::vector<AgentId>(members)) {}

  const std::vector<AgentId>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool degenerate() const { return members_.size() == 1; }
  bool contains(const AgentId& a) const;
  bool subset_of(const Group& other) const;
  bool strict_subset_of(const Group& other) const;
  bool intersects(const Group& other) const;
  // Members minus `a`; throws if that would leave the group empty.
  Group without(const AgentId& a) const;

  std::string key() const;     // "1,2,3"
  std::string render() const;  // "{1,2,3}"

  friend bool operator==(const Group& a, const Group& b) {
    return a.members_ == b.members_;
  }
  friend std::strong_ordering operator<=>(const Group& a, const Group& b);

 private:
  std::vector<AgentId> members_;
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable syntax tree for the object language. Subtrees are shared; use
// structural equality (operator==), never pointer identity.
//
//   E (Brings)    "G brings about"          — group modality
//   A (Attempts)  "G tries to bring about"  — group modality
//   H (Assists)   "C1 successfully assists C2"
//
// Or/Implies/Iff/Bottom are first-class nodes so rendered output matches the
// input; the solver desugars them internally.
class Formula {
 public:
  enum class Kind {
    Top,
    Bottom,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Brings,
    Attempts,
    Assists,
  };

  static FormulaPtr top();
  static FormulaPtr bottom();
  static FormulaPtr atom(std::string name);
  static FormulaPtr negate(FormulaPtr f);
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
  static FormulaPtr iff(FormulaPtr a, FormulaPtr b);
  static FormulaPtr brings(Group g, FormulaPtr body);
  static FormulaPtr attempts(Group g, FormulaPtr body);
  static FormulaPtr assists(Group benefactor, Group beneficiary, FormulaPtr body);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }        // Atom
  const FormulaPtr& body() const { return a_; }            // Not and modalities
  const FormulaPtr& left() const { return a_; }            // binary connectives
  const FormulaPtr& right() const { return b_; }
  const Group& group() const { return *g1_; }              // Brings/Attempts
  const Group& benefactor() const { return *g1_; }         // Assists
  const Group& beneficiary() const { return *g2_; }
  std::size_t hash() const { return hash_; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  Formula(Kind kind, std::string name, FormulaPtr a, FormulaPtr b,
          std::optional<Group> g1, std::optional<Group> g2);

  Kind kind_;
  std::string name_;
  FormulaPtr a_, b_;
  std::optional<Group> g1_, g2_;
  std::size_t hash_;
};

// Structural equality on shared trees (operator== on FormulaPtr would compare
// pointers).
bool equal(const FormulaPtr& a, const FormulaPtr& b);

// Hash/equality functors for keying containers by formula structure.
struct FormulaHash {
  std::size_t operator()(const FormulaPtr& f) const { return f->hash(); }
};
struct FormulaEq {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const {
    return equal(a, b);
  }
};

// Minimally parenthesized text; parse(render(f)) reproduces f exactly.
std::string render(const FormulaPtr& f);

// All distinct subformulas including f itself, children before parents.
std::vector<FormulaPtr> subformulas(const FormulaPtr& f);

// Nesting depth of modal operators; H counts as one level.
int modal_depth(const FormulaPtr& f);

// Tree size (nodes counted as if subtrees were not shared), saturating.
std::size_t tree_size(const FormulaPtr& f);

std::set<AgentId> agents_of(const FormulaPtr& f);
std::set<std::string> atoms_of(const FormulaPtr& f);

// Rewrites to the {Top, Atom, Not, And, E, A, H} fragment preserving truth.
FormulaPtr desugar(const FormulaPtr& f);

}  // namespace cohesion
