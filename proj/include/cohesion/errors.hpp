#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cohesion {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Formula text rejected by the lexer/parser. `position` is a byte offset.
struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

// Enumeration preconditions: degenerate group, group size over the configured
// bound, or the candidate scan budget ran out before the class was exhausted.
struct BoundError : Error {
  using Error::Error;
};

// Expansion grew past an ExpansionBudget limit. `reached` is the size at abort.
struct BudgetError : Error {
  std::size_t reached;
  BudgetError(const std::string& msg, std::size_t reached_)
      : Error(msg), reached(reached_) {}
};

// Malformed class specifications, including explicit classes whose networks
// fail admissibility.
struct ClassSpecError : Error {
  using Error::Error;
};

// Malformed model files and lookups of unknown worlds/agents/atoms.
struct ModelError : Error {
  using Error::Error;
};

}  // namespace cohesion
