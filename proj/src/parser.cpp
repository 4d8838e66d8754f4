#include "cohesion/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "cohesion/errors.hpp"

namespace cohesion {

namespace {

enum class Tok {
  Ident,
  True,
  False,
  Tilde,
  Amp,
  Pipe,
  Arrow,
  DArrow,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Greater,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (ident_char(c)) {
      while (i < text.size() && ident_char(text[i])) ++i;
      std::string word(text.substr(start, i - start));
      if (word == "true") {
        out.push_back({Tok::True, std::move(word), start});
      } else if (word == "false") {
        out.push_back({Tok::False, std::move(word), start});
      } else {
        out.push_back({Tok::Ident, std::move(word), start});
      }
      continue;
    }
    switch (c) {
      case '~': out.push_back({Tok::Tilde, "~", start}); ++i; break;
      case '&': out.push_back({Tok::Amp, "&", start}); ++i; break;
      case '|': out.push_back({Tok::Pipe, "|", start}); ++i; break;
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
      case '{': out.push_back({Tok::LBrace, "{", start}); ++i; break;
      case '}': out.push_back({Tok::RBrace, "}", start}); ++i; break;
      case ',': out.push_back({Tok::Comma, ",", start}); ++i; break;
      case '>': out.push_back({Tok::Greater, ">", start}); ++i; break;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", start});
          i += 2;
          break;
        }
        throw ParseError("unknown token '-'", start);
      case '<':
        if (i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
          out.push_back({Tok::DArrow, "<->", start});
          i += 3;
          break;
        }
        throw ParseError("unknown token '<'", start);
      default:
        throw ParseError(std::string("unknown token '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  FormulaPtr run() {
    auto f = parse_iff();
    if (peek().kind != Tok::End) {
      throw ParseError("unexpected input after formula", peek().pos);
    }
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  Token take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      throw ParseError(std::string("expected ") + what, peek().pos);
    }
    ++pos_;
  }

  FormulaPtr parse_iff() {
    auto left = parse_implies();
    if (peek().kind == Tok::DArrow) {
      take();
      return Formula::iff(std::move(left), parse_iff());
    }
    return left;
  }

  FormulaPtr parse_implies() {
    auto left = parse_or();
    if (peek().kind == Tok::Arrow) {
      take();
      return Formula::implies(std::move(left), parse_implies());
    }
    return left;
  }

  FormulaPtr parse_or() {
    auto left = parse_and();
    while (peek().kind == Tok::Pipe) {
      take();
      left = Formula::disj(std::move(left), parse_and());
    }
    return left;
  }

  FormulaPtr parse_and() {
    auto left = parse_unary();
    while (peek().kind == Tok::Amp) {
      take();
      left = Formula::conj(std::move(left), parse_unary());
    }
    return left;
  }

  FormulaPtr parse_unary() {
    const Token& t = peek();
    if (t.kind == Tok::Tilde) {
      take();
      return Formula::negate(parse_unary());
    }
    // E/A/H are modal prefixes only when a group follows; otherwise they are
    // ordinary atoms handled by parse_primary.
    if (t.kind == Tok::Ident && peek(1).kind == Tok::LBrace) {
      if (t.text == "E") {
        take();
        auto g = parse_group();
        return Formula::brings(std::move(g), parse_unary());
      }
      if (t.text == "A") {
        take();
        auto g = parse_group();
        return Formula::attempts(std::move(g), parse_unary());
      }
      if (t.text == "H") {
        take();
        auto benefactor = parse_group();
        expect(Tok::Greater, "'>' between the groups of H");
        auto beneficiary = parse_group();
        return Formula::assists(std::move(benefactor), std::move(beneficiary),
                                parse_unary());
      }
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    const Token t = take();
    switch (t.kind) {
      case Tok::True: return Formula::top();
      case Tok::False: return Formula::bottom();
      case Tok::Ident: return Formula::atom(t.text);
      case Tok::LParen: {
        auto f = parse_iff();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        throw ParseError("expected a formula", t.pos);
    }
  }

  Group parse_group() {
    const std::size_t open = peek().pos;
    expect(Tok::LBrace, "'{'");
    if (peek().kind == Tok::RBrace) {
      throw ParseError("empty group", open);
    }
    std::vector<AgentId> members;
    while (true) {
      if (peek().kind != Tok::Ident) {
        throw ParseError("expected an agent identifier", peek().pos);
      }
      members.push_back(take().text);
      if (peek().kind == Tok::Comma) {
        take();
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "'}'");
    return Group(std::move(members));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse(std::string_view text) { return Parser(lex(text)).run(); }

}  // namespace cohesion
