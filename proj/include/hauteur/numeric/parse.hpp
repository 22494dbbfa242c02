#pragma once

#include <string>
#include <string_view>

#include "hauteur/error.hpp"
#include "hauteur/numeric/ratfunc.hpp"

namespace hauteur {

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorCode::Parse, what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Grammar: sums and differences of products and quotients of powers (integer exponents)
// of numbers, the variable, and parenthesised expressions; juxtaposition multiplies.
RatFunc parse_ratfunc(std::string_view text, const std::string& var = "t");
Rat parse_rational_value(std::string_view text);  // same grammar without a variable

}  // namespace hauteur
