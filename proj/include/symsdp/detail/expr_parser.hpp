#pragma once

// Small recursive-descent parser shared by the scalar and polynomial readers.
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := power (('*'|'/'|<juxtaposition>) power)*
//   power  := factor ('^' ['-'] int)?
//   factor := number | 'sqrt' '(' expr ')' | 'i' | generator | '(' expr ')'
//
// Generators look like A0|1 (party letter, outcome, '|', setting).

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "symsdp/scalar.hpp"

namespace symsdp::detail {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at offset " + std::to_string(pos)), pos_(pos) {}
  std::size_t pos() const { return pos_; }

 private:
  std::size_t pos_;
};

struct GeneratorToken {
  int party;
  int outcome;
  int setting;
};

// Ops must provide:
//   static V from_scalar(const Scalar&);
//   static std::optional<Scalar> as_scalar(const V&);
//   static V generator(const GeneratorToken&);
//   V + V, V - V, V * V, -V
template <class V, class Ops>
class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  V parse() {
    V v = expr();
    skip();
    if (p_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[p_]) + "'", p_);
    return v;
  }

 private:
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool peek(char c) {
    skip();
    return p_ < s_.size() && s_[p_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++p_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", p_);
  }
  bool starts_factor() {
    skip();
    if (p_ >= s_.size()) return false;
    char c = s_[p_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == '.' ||
           std::isupper(static_cast<unsigned char>(c)) || c == 'i' || s_.substr(p_, 4) == "sqrt";
  }

  V expr() {
    bool neg = false;
    if (accept('-')) neg = true;
    else accept('+');
    V v = term();
    if (neg) v = -v;
    for (;;) {
      if (accept('+')) v = v + term();
      else if (accept('-')) v = v - term();
      else return v;
    }
  }

  V term() {
    V v = power();
    for (;;) {
      if (accept('*')) {
        v = v * power();
      } else if (accept('/')) {
        std::size_t at = p_;
        auto d = Ops::as_scalar(power());
        if (!d) throw ParseError("division by a non-constant", at);
        if (d->is_zero()) throw ParseError("division by zero", at);
        v = v * Ops::from_scalar(d->inverse());
      } else if (starts_factor()) {
        v = v * power();
      } else {
        return v;
      }
    }
  }

  V power() {
    V base = factor();
    if (!accept('^')) return base;
    bool neg = accept('-');
    std::size_t at = p_;
    long e = integer();
    if (neg) {
      auto s = Ops::as_scalar(base);
      if (!s) throw ParseError("negative power of a non-constant", at);
      Scalar inv = s->inverse();
      base = Ops::from_scalar(inv);
    }
    V r = Ops::from_scalar(Scalar(1));
    for (long k = 0; k < e; ++k) r = r * base;
    return r;
  }

  long integer() {
    skip();
    std::size_t start = p_;
    while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
    if (start == p_) throw ParseError("expected integer", p_);
    return std::stol(std::string(s_.substr(start, p_ - start)));
  }

  V factor() {
    skip();
    if (p_ >= s_.size()) throw ParseError("unexpected end of input", p_);
    char c = s_[p_];
    if (c == '(') {
      ++p_;
      V v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Ops::from_scalar(number());
    if (s_.substr(p_, 4) == "sqrt") {
      p_ += 4;
      expect('(');
      std::size_t at = p_;
      auto arg = Ops::as_scalar(expr());
      expect(')');
      if (!arg || !arg->is_rational()) throw ParseError("sqrt argument must be rational", at);
      return Ops::from_scalar(Scalar::sqrt(arg->rational_part()));
    }
    if (c == 'i' && (p_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[p_ + 1])))) {
      ++p_;
      return Ops::from_scalar(Scalar::i());
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      GeneratorToken g{c - 'A', 0, 0};
      ++p_;
      std::size_t at = p_;
      g.outcome = static_cast<int>(integer());
      if (p_ >= s_.size() || s_[p_] != '|') throw ParseError("expected '|' in generator", at);
      ++p_;
      g.setting = static_cast<int>(integer());
      return Ops::generator(g);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", p_);
  }

  Scalar number() {
    std::size_t start = p_;
    while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
    std::string whole(s_.substr(start, p_ - start));
    if (p_ < s_.size() && s_[p_] == '.') {
      ++p_;
      std::size_t fs = p_;
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      std::string frac(s_.substr(fs, p_ - fs));
      if (whole.empty() && frac.empty()) throw ParseError("malformed number", start);
      mpz_class num(whole.empty() ? std::string("0") : whole);
      mpz_class den(1);
      for (char ch : frac) {
        num = num * 10 + (ch - '0');
        den *= 10;
      }
      mpq_class q(num, den);
      q.canonicalize();
      return Scalar(q);
    }
    return Scalar(mpq_class(mpz_class(whole)));
  }

  std::string_view s_;
  std::size_t p_ = 0;
};

}  // namespace symsdp::detail
