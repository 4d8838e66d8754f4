#pragma once

#include <string_view>

#include "cohesion/formula.hpp"

namespace cohesion {

// Parses the concrete syntax:
//
//   formula := 'true' | 'false' | IDENT | '~' formula
//            | formula '&' formula | formula '|' formula
//            | formula '->' formula | formula '<->' formula
//            | 'E' group formula | 'A' group formula
//            | 'H' group '>' group formula | '(' formula ')'
//   group   := '{' IDENT (',' IDENT)* '}'
//
// Precedence, tightest first: '~' and modal prefixes, '&', '|', '->', '<->'.
// '->' and '<->' associate to the right, '&' and '|' to the left.
// IDENT = [A-Za-z0-9_]+ other than 'true'/'false'. 'E', 'A' and 'H' act as
// modal prefixes exactly when followed by '{', so they remain usable as atoms.
// Whitespace between tokens is ignored. Throws ParseError on bad input.
FormulaPtr parse(std::string_view text);

}  // namespace cohesion
