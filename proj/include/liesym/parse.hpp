#pragma once

// Recursive-descent parser for the expression language.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := base ('^' unary)?            (right associative)
//   base   := number | symbol | fn '(' expr (',' expr)? ')' | '(' expr ')'
//
// A '-' written directly before a number literal (and not followed by '^')
// yields a negative constant, so "y^(-3)" is Power(y, -3).

#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

#include "liesym/expr.hpp"

namespace liesym {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

inline std::optional<Fn> fn_from_name(std::string_view s) {
  if (s == "sin") return Fn::sin;
  if (s == "cos") return Fn::cos;
  if (s == "exp") return Fn::exp;
  if (s == "ln") return Fn::ln;
  if (s == "sqrt") return Fn::sqrt;
  if (s == "atan") return Fn::atan;
  if (s == "atan2") return Fn::atan2;
  return std::nullopt;
}

namespace detail {

struct Token {
  enum class Type { number, ident, op, end } type = Type::end;
  std::string text;
  double value = 0.0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src_.size()) {
      char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Token t;
      t.pos = i;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t j = i;
        while (j < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.')) ++j;
        if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
          if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
            while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
            j = k;
          }
        }
        t.type = Token::Type::number;
        t.text = std::string(src_.substr(i, j - i));
        char* end = nullptr;
        t.value = std::strtod(t.text.c_str(), &end);
        if (end != t.text.c_str() + t.text.size()) throw ParseError("malformed number '" + t.text + "'", i);
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
        t.type = Token::Type::ident;
        t.text = std::string(src_.substr(i, j - i));
        i = j;
      } else if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
        t.type = Token::Type::op;
        t.text = std::string(1, c);
        ++i;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", i);
      }
      out.push_back(std::move(t));
    }
    Token end;
    end.pos = src_.size();
    out.push_back(end);
    return out;
  }

 private:
  std::string_view src_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().type != Token::Type::end) fail("unexpected token");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool is_op(const Token& t, char c) const { return t.type == Token::Type::op && t.text[0] == c; }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string shown = t.type == Token::Type::end ? "end of input" : "token '" + t.text + "'";
    throw ParseError(what + ": " + shown, t.pos);
  }
  void expect(char c) {
    if (!is_op(peek(), c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Expr expr() {
    Expr lhs = term();
    while (is_op(peek(), '+') || is_op(peek(), '-')) {
      bool minus = is_op(peek(), '-');
      ++pos_;
      Expr rhs = term();
      lhs = Expr::make_binary(Expr::Kind::sum, lhs, minus ? Expr::make_neg(rhs) : rhs);
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (is_op(peek(), '*') || is_op(peek(), '/')) {
      auto kind = is_op(peek(), '*') ? Expr::Kind::product : Expr::Kind::quotient;
      ++pos_;
      lhs = Expr::make_binary(kind, lhs, unary());
    }
    return lhs;
  }

  Expr unary() {
    if (is_op(peek(), '-')) {
      if (peek(1).type == Token::Type::number && !is_op(peek(2), '^')) {
        double v = peek(1).value;
        pos_ += 2;
        return Expr::constant(-v);
      }
      ++pos_;
      return Expr::make_neg(unary());
    }
    return power();
  }

  Expr power() {
    Expr b = base();
    if (is_op(peek(), '^')) {
      ++pos_;
      return Expr::make_binary(Expr::Kind::power, b, unary());
    }
    return b;
  }

  Expr base() {
    const Token& t = peek();
    switch (t.type) {
      case Token::Type::number: {
        ++pos_;
        return Expr::constant(t.value);
      }
      case Token::Type::ident: {
        if (is_op(peek(1), '(')) {
          auto f = fn_from_name(t.text);
          if (!f) throw ParseError("unknown function '" + t.text + "'", t.pos);
          pos_ += 2;
          std::vector<Expr> args{expr()};
          if (is_op(peek(), ',')) {
            ++pos_;
            args.push_back(expr());
          }
          if (static_cast<int>(args.size()) != fn_arity(*f))
            throw ParseError("function '" + t.text + "' takes " + std::to_string(fn_arity(*f)) +
                                 " argument(s)",
                             t.pos);
          expect(')');
          return Expr::make_call(*f, std::move(args));
        }
        ++pos_;
        return Expr::symbol(t.text);
      }
      case Token::Type::op:
        if (is_op(t, '(')) {
          ++pos_;
          Expr inner = expr();
          expect(')');
          return inner;
        }
        fail("syntax error");
      case Token::Type::end: fail("unexpected end of input");
    }
    fail("syntax error");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses text into the exact AST described by the grammar above.
inline Expr parse(std::string_view text) {
  detail::Lexer lex(text);
  detail::Parser p(lex.run());
  return p.parse_all();
}

}  // namespace liesym
