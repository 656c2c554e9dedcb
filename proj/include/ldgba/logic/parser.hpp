#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ldgba/logic/atoms.hpp"
#include "ldgba/logic/formula.hpp"

namespace ldgba::logic {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

namespace detail {

// Precedence, loosest to tightest: | < & < U < unary.
class FormulaParser {
 public:
  FormulaParser(std::string_view text, const AtomSet* atoms) : text_(text), atoms_(atoms) {}

  Formula parse() {
    advance();
    Formula f = parse_or();
    if (tok_ != Tok::End) fail("unexpected '" + std::string(lexeme_) + "'");
    return f;
  }

 private:
  enum class Tok { End, Ident, True, Not, And, Or, Next, Until, Eventually, Always, LParen, RParen };

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_start_); }

  void advance() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
    tok_start_ = pos_;
    if (pos_ >= text_.size()) {
      tok_ = Tok::End;
      lexeme_ = {};
      return;
    }
    char c = text_[pos_];
    auto single = [&](Tok t) {
      tok_ = t;
      lexeme_ = text_.substr(pos_, 1);
      ++pos_;
    };
    switch (c) {
      case '!': return single(Tok::Not);
      case '&': return single(Tok::And);
      case '|': return single(Tok::Or);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      default: break;
    }
    auto ident_start = [](char ch) { return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_'; };
    auto ident_char = [&](char ch) { return ident_start(ch) || (ch >= '0' && ch <= '9'); };
    if (!ident_start(c)) {
      lexeme_ = text_.substr(pos_, 1);
      fail("unexpected character '" + std::string(lexeme_) + "'");
    }
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(text_[end])) ++end;
    lexeme_ = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (lexeme_ == "true") tok_ = Tok::True;
    else if (lexeme_ == "X") tok_ = Tok::Next;
    else if (lexeme_ == "U") tok_ = Tok::Until;
    else if (lexeme_ == "F") tok_ = Tok::Eventually;
    else if (lexeme_ == "G") tok_ = Tok::Always;
    else tok_ = Tok::Ident;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (tok_ == Tok::Or) {
      advance();
      f = Formula::disj(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_until();
    while (tok_ == Tok::And) {
      advance();
      f = Formula::conj(f, parse_until());
    }
    return f;
  }

  Formula parse_until() {
    Formula f = parse_unary();
    if (tok_ == Tok::Until) {
      advance();
      return Formula::until(f, parse_until());
    }
    return f;
  }

  Formula parse_unary() {
    switch (tok_) {
      case Tok::Not: advance(); return Formula::negation(parse_unary());
      case Tok::Next: advance(); return Formula::next(parse_unary());
      case Tok::Eventually: advance(); return Formula::eventually(parse_unary());
      case Tok::Always: advance(); return Formula::always(parse_unary());
      default: return parse_primary();
    }
  }

  Formula parse_primary() {
    switch (tok_) {
      case Tok::True: advance(); return Formula::truth();
      case Tok::Ident: {
        std::string name(lexeme_);
        if (atoms_ && !atoms_->contains(name)) fail("unknown atom '" + name + "'");
        advance();
        return Formula::atom(std::move(name));
      }
      case Tok::LParen: {
        advance();
        Formula f = parse_or();
        if (tok_ != Tok::RParen) fail("expected ')'");
        advance();
        return f;
      }
      case Tok::End: fail("unexpected end of input");
      default: fail("unexpected '" + std::string(lexeme_) + "'");
    }
  }

  std::string_view text_;
  const AtomSet* atoms_;
  std::size_t pos_ = 0;
  std::size_t tok_start_ = 0;
  Tok tok_ = Tok::End;
  std::string_view lexeme_;
};

inline int precedence(Op op) {
  switch (op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Until: return 3;
    case Op::Not:
    case Op::Next:
    case Op::Eventually:
    case Op::Always: return 4;
    default: return 5;
  }
}

inline void print_into(const Formula& f, std::string& out) {
  auto child = [&](const Formula& c, bool paren) {
    if (paren) out += '(';
    print_into(c, out);
    if (paren) out += ')';
  };
  const int p = precedence(f.op());
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::Atom: out += f.name(); return;
    case Op::Not: out += '!'; child(f.operand(), precedence(f.operand().op()) < p); return;
    case Op::Next: out += "X "; child(f.operand(), precedence(f.operand().op()) < p); return;
    case Op::Eventually: out += "F "; child(f.operand(), precedence(f.operand().op()) < p); return;
    case Op::Always: out += "G "; child(f.operand(), precedence(f.operand().op()) < p); return;
    case Op::And:
    case Op::Or:
      // left associative: a right operand of equal precedence needs parentheses
      child(f.lhs(), precedence(f.lhs().op()) < p);
      out += f.op() == Op::And ? " & " : " | ";
      child(f.rhs(), precedence(f.rhs().op()) <= p);
      return;
    case Op::Until:
      child(f.lhs(), precedence(f.lhs().op()) <= p);
      out += " U ";
      child(f.rhs(), precedence(f.rhs().op()) < p);
      return;
  }
}

}  // namespace detail

/// Parses LTL text. When `atoms` is given, every identifier must name one of its atoms.
inline Formula parse(std::string_view text, const AtomSet& atoms) { return detail::FormulaParser(text, &atoms).parse(); }
inline Formula parse(std::string_view text) { return detail::FormulaParser(text, nullptr).parse(); }

/// ASCII rendering with minimal parentheses; parse(to_string(f)) == f.
inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print_into(f, out);
  return out;
}

inline AtomSet atoms_of(const Formula& f) {
  std::set<std::string> names;
  f.collect_atoms(names);
  return AtomSet(std::vector<std::string>(names.begin(), names.end()));
}

}  // namespace ldgba::logic
