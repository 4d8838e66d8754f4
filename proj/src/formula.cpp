#include "cohesion/formula.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "cohesion/errors.hpp"

namespace cohesion {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

std::size_t hash_group(const Group& g) {
  std::size_t h = g.size();
  for (const auto& a : g.members()) h = hash_combine(h, std::hash<std::string>{}(a));
  return h;
}

}  // namespace

Group::Group(std::vector<AgentId> members) : members_(std::move(members)) {
  for (const auto& a : members_) {
    if (a.empty()) throw Error("agent identifiers must be nonempty");
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty()) throw Error("a group must have at least one member");
}

bool Group::contains(const AgentId& a) const {
  return std::binary_search(members_.begin(), members_.end(), a);
}

bool Group::subset_of(const Group& other) const {
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

bool Group::strict_subset_of(const Group& other) const {
  return size() < other.size() && subset_of(other);
}

bool Group::intersects(const Group& other) const {
  for (const auto& a : members_) {
    if (other.contains(a)) return true;
  }
  return false;
}

Group Group::without(const AgentId& a) const {
  std::vector<AgentId> rest;
  for (const auto& m : members_) {
    if (m != a) rest.push_back(m);
  }
  return Group(std::move(rest));
}

std::string Group::key() const {
  std::string out;
  for (const auto& a : members_) {
    if (!out.empty()) out += ',';
    out += a;
  }
  return out;
}

std::string Group::render() const { return "{" + key() + "}"; }

std::strong_ordering operator<=>(const Group& a, const Group& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return a.members_ <=> b.members_;
}

Formula::Formula(Kind kind, std::string name, FormulaPtr a, FormulaPtr b,
                 std::optional<Group> g1, std::optional<Group> g2)
    : kind_(kind),
      name_(std::move(name)),
      a_(std::move(a)),
      b_(std::move(b)),
      g1_(std::move(g1)),
      g2_(std::move(g2)) {
  std::size_t h = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ull + 1;
  if (!name_.empty()) h = hash_combine(h, std::hash<std::string>{}(name_));
  if (a_) h = hash_combine(h, a_->hash_);
  if (b_) h = hash_combine(h, b_->hash_);
  if (g1_) h = hash_combine(h, hash_group(*g1_));
  if (g2_) h = hash_combine(h, hash_group(*g2_));
  hash_ = h;
}

FormulaPtr Formula::top() {
  static const FormulaPtr instance(
      new Formula(Kind::Top, {}, nullptr, nullptr, std::nullopt, std::nullopt));
  return instance;
}

FormulaPtr Formula::bottom() {
  static const FormulaPtr instance(new Formula(Kind::Bottom, {}, nullptr,
                                               nullptr, std::nullopt,
                                               std::nullopt));
  return instance;
}

FormulaPtr Formula::atom(std::string name) {
  if (name.empty()) throw Error("atom names must be nonempty");
  return FormulaPtr(new Formula(Kind::Atom, std::move(name), nullptr, nullptr,
                                std::nullopt, std::nullopt));
}

FormulaPtr Formula::negate(FormulaPtr f) {
  return FormulaPtr(new Formula(Kind::Not, {}, std::move(f), nullptr,
                                std::nullopt, std::nullopt));
}

FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Kind::And, {}, std::move(a), std::move(b),
                                std::nullopt, std::nullopt));
}

FormulaPtr Formula::disj(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Kind::Or, {}, std::move(a), std::move(b),
                                std::nullopt, std::nullopt));
}

FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Kind::Implies, {}, std::move(a), std::move(b),
                                std::nullopt, std::nullopt));
}

FormulaPtr Formula::iff(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Kind::Iff, {}, std::move(a), std::move(b),
                                std::nullopt, std::nullopt));
}

FormulaPtr Formula::brings(Group g, FormulaPtr body) {
  return FormulaPtr(new Formula(Kind::Brings, {}, std::move(body), nullptr,
                                std::move(g), std::nullopt));
}

FormulaPtr Formula::attempts(Group g, FormulaPtr body) {
  return FormulaPtr(new Formula(Kind::Attempts, {}, std::move(body), nullptr,
                                std::move(g), std::nullopt));
}

FormulaPtr Formula::assists(Group benefactor, Group beneficiary,
                            FormulaPtr body) {
  return FormulaPtr(new Formula(Kind::Assists, {}, std::move(body), nullptr,
                                std::move(benefactor), std::move(beneficiary)));
}


bool operator==(const Formula& a, const Formula& b) {
  if (&a == &b) return true;
  if (a.hash_ != b.hash_ || a.kind_ != b.kind_ || a.name_ != b.name_) {
    return false;
  }
  if (a.g1_ != b.g1_ || a.g2_ != b.g2_) return false;
  if (static_cast<bool>(a.a_) != static_cast<bool>(b.a_)) return false;
  if (static_cast<bool>(a.b_) != static_cast<bool>(b.b_)) return false;
  if (a.a_ && !(*a.a_ == *b.a_)) return false;
  if (a.b_ && !(*a.b_ == *b.b_)) return false;
  return true;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

namespace {

// Binding strength, loosest first. Unary prefixes and primaries never need
// parentheses around themselves.
int level_of(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not:
    case Formula::Kind::Brings:
    case Formula::Kind::Attempts:
    case Formula::Kind::Assists: return 5;
    default: return 6;
  }
}

void render_into(const FormulaPtr& f, int min_level, std::string& out) {
  const int level = level_of(*f);
  const bool parens = level < min_level;
  if (parens) out += '(';
  switch (f->kind()) {
    case Formula::Kind::Top:
      out += "true";
      break;
    case Formula::Kind::Bottom:
      out += "false";
      break;
    case Formula::Kind::Atom:
      out += f->name();
      break;
    case Formula::Kind::Not:
      out += '~';
      render_into(f->body(), 5, out);
      break;
    case Formula::Kind::And:
      render_into(f->left(), 4, out);
      out += " & ";
      render_into(f->right(), 5, out);
      break;
    case Formula::Kind::Or:
      render_into(f->left(), 3, out);
      out += " | ";
      render_into(f->right(), 4, out);
      break;
    case Formula::Kind::Implies:
      render_into(f->left(), 3, out);
      out += " -> ";
      render_into(f->right(), 2, out);
      break;
    case Formula::Kind::Iff:
      render_into(f->left(), 2, out);
      out += " <-> ";
      render_into(f->right(), 1, out);
      break;
    case Formula::Kind::Brings:
      out += 'E';
      out += f->group().render();
      out += ' ';
      render_into(f->body(), 5, out);
      break;
    case Formula::Kind::Attempts:
      out += 'A';
      out += f->group().render();
      out += ' ';
      render_into(f->body(), 5, out);
      break;
    case Formula::Kind::Assists:
      out += 'H';
      out += f->benefactor().render();
      out += '>';
      out += f->beneficiary().render();
      out += ' ';
      render_into(f->body(), 5, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string render(const FormulaPtr& f) {
  std::string out;
  render_into(f, 0, out);
  return out;
}

std::vector<FormulaPtr> subformulas(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  std::unordered_set<FormulaPtr, FormulaHash, FormulaEq> seen;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
    if (seen.contains(g)) return;
    if (g->left()) walk(g->left());
    if (g->right()) walk(g->right());
    if (seen.insert(g).second) out.push_back(g);
  };
  walk(f);
  return out;
}

int modal_depth(const FormulaPtr& f) {
  switch (f->kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
    case Formula::Kind::Atom:
      return 0;
    case Formula::Kind::Not:
      return modal_depth(f->body());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return std::max(modal_depth(f->left()), modal_depth(f->right()));
    case Formula::Kind::Brings:
    case Formula::Kind::Attempts:
    case Formula::Kind::Assists:
      return 1 + modal_depth(f->body());
  }
  return 0;
}

namespace {
std::size_t saturating_add(std::size_t a, std::size_t b) {
  const std::size_t cap = std::numeric_limits<std::size_t>::max();
  return a > cap - b ? cap : a + b;
}
}  // namespace

std::size_t tree_size(const FormulaPtr& f) {
  std::unordered_map<FormulaPtr, std::size_t, FormulaHash, FormulaEq> memo;
  std::function<std::size_t(const FormulaPtr&)> walk =
      [&](const FormulaPtr& g) -> std::size_t {
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    std::size_t n = 1;
    if (g->left()) n = saturating_add(n, walk(g->left()));
    if (g->right()) n = saturating_add(n, walk(g->right()));
    memo.emplace(g, n);
    return n;
  };
  return walk(f);
}

std::set<AgentId> agents_of(const FormulaPtr& f) {
  std::set<AgentId> out;
  for (const auto& g : subformulas(f)) {
    switch (g->kind()) {
      case Formula::Kind::Brings:
      case Formula::Kind::Attempts:
        out.insert(g->group().members().begin(), g->group().members().end());
        break;
      case Formula::Kind::Assists:
        out.insert(g->benefactor().members().begin(),
                   g->benefactor().members().end());
        out.insert(g->beneficiary().members().begin(),
                   g->beneficiary().members().end());
        break;
      default:
        break;
    }
  }
  return out;
}

std::set<std::string> atoms_of(const FormulaPtr& f) {
  std::set<std::string> out;
  for (const auto& g : subformulas(f)) {
    if (g->kind() == Formula::Kind::Atom) out.insert(g->name());
  }
  return out;
}

FormulaPtr desugar(const FormulaPtr& f) {
  std::unordered_map<FormulaPtr, FormulaPtr, FormulaHash, FormulaEq> memo;
  std::function<FormulaPtr(const FormulaPtr&)> walk =
      [&](const FormulaPtr& g) -> FormulaPtr {
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    FormulaPtr out;
    switch (g->kind()) {
      case Formula::Kind::Top:
      case Formula::Kind::Atom:
        out = g;
        break;
      case Formula::Kind::Bottom:
        out = Formula::negate(Formula::top());
        break;
      case Formula::Kind::Not:
        out = Formula::negate(walk(g->body()));
        break;
      case Formula::Kind::And:
        out = Formula::conj(walk(g->left()), walk(g->right()));
        break;
      case Formula::Kind::Or:
        // a | b  ==  ~(~a & ~b)
        out = Formula::negate(Formula::conj(Formula::negate(walk(g->left())),
                                            Formula::negate(walk(g->right()))));
        break;
      case Formula::Kind::Implies:
        // a -> b  ==  ~(a & ~b)
        out = Formula::negate(
            Formula::conj(walk(g->left()), Formula::negate(walk(g->right()))));
        break;
      case Formula::Kind::Iff: {
        const auto a = walk(g->left());
        const auto b = walk(g->right());
        out = Formula::conj(Formula::negate(Formula::conj(a, Formula::negate(b))),
                            Formula::negate(Formula::conj(b, Formula::negate(a))));
        break;
      }
      case Formula::Kind::Brings:
        out = Formula::brings(g->group(), walk(g->body()));
        break;
      case Formula::Kind::Attempts:
        out = Formula::attempts(g->group(), walk(g->body()));
        break;
      case Formula::Kind::Assists:
        out = Formula::assists(g->benefactor(), g->beneficiary(), walk(g->body()));
        break;
    }
    memo.emplace(g, out);
    return out;
  };
  return walk(f);
}

}  // namespace cohesion
