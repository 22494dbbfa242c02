#include "hauteur/numeric/parse.hpp"

#include <cctype>

namespace hauteur {

namespace {

class Parser {
 public:
  Parser(std::string_view s, std::string var) : s_(s), var_(std::move(var)) {}

  RatFunc parse_all() {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, "empty expression");
    RatFunc r = expr();
    skip();
    if (pos_ < s_.size()) throw ParseError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return r;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || at_var();
  }
  bool at_var() {
    return !var_.empty() && s_.substr(pos_, var_.size()) == var_;
  }

  RatFunc expr() {
    RatFunc acc;
    bool first = true;
    while (true) {
      skip();
      int sign = 1;
      if (peek('+') || peek('-')) {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        break;
      }
      RatFunc t = term();
      acc = first ? (sign < 0 ? -t : t) : (sign < 0 ? acc - t : acc + t);
      first = false;
      skip();
      if (!(peek('+') || peek('-'))) break;
    }
    return acc;
  }

  RatFunc term() {
    RatFunc acc = power();
    while (true) {
      if (peek('*')) { ++pos_; acc = acc * power(); }
      else if (peek('/')) {
        std::size_t at = pos_;
        ++pos_;
        RatFunc d = power();
        if (d.is_zero()) throw ParseError(at, "division by zero");
        acc = acc / d;
      } else if (starts_factor()) {
        acc = acc * power();
      } else {
        break;
      }
    }
    return acc;
  }

  RatFunc power() {
    skip();
    if (peek('-')) { ++pos_; return -power(); }
    RatFunc base = primary();
    if (peek('^')) {
      ++pos_;
      skip();
      int sign = 1;
      if (peek('-')) { sign = -1; ++pos_; }
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError(pos_, "expected integer exponent");
      long e = std::stol(std::string(s_.substr(start, pos_ - start)));
      if (e > 4096) throw ParseError(start, "exponent too large");
      if (sign < 0 && base.is_zero()) throw ParseError(start, "negative power of zero");
      base = pow(base, sign * e);
    }
    return base;
  }

  RatFunc primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      skip();
      if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input, expected ')'");
      if (s_[pos_] != ')') throw ParseError(pos_, std::string("expected ')' but found '") + s_[pos_] + "'");
      ++pos_;
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
          (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-')) {
        ++pos_;
        if (s_[pos_] == '-') ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      try {
        return RatFunc(Rat::parse(s_.substr(start, pos_ - start)));
      } catch (const Error&) {
        throw ParseError(start, "malformed number");
      }
    }
    if (at_var()) {
      pos_ += var_.size();
      return RatFunc::t();
    }
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  std::string var_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text, const std::string& var) { return Parser(text, var).parse_all(); }

Rat parse_rational_value(std::string_view text) {
  RatFunc f = Parser(text, "").parse_all();
  return *f.constant_value();
}

}  // namespace hauteur
