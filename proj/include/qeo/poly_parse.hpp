#ifndef QEO_POLY_PARSE_HPP
#define QEO_POLY_PARSE_HPP

// Text polynomials such as "th1^2 - th1*th2 + th2^2 + 0.05".
//
//   poly   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := number | 'th' index ['^' exponent]
//
// Whitespace is ignored everywhere. Variables are th1..thK.

#include <cctype>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qeo/errors.hpp"
#include "qeo/simplex_poly.hpp"

namespace qeo {

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t num_vars) : num_vars_(num_vars) {
    for (char ch : text) {
      if (!std::isspace(static_cast<unsigned char>(ch))) src_.push_back(ch);
    }
  }

  Polynomial parse() {
    if (src_.empty()) fail("empty polynomial");
    Polynomial p(num_vars_);
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1.0 : 1.0;
    parse_term(p, sign);
    while (pos_ < src_.size()) {
      const char op = take();
      if (op != '+' && op != '-') fail(std::string("expected '+' or '-' but found '") + op + "'");
      parse_term(p, op == '-' ? -1.0 : 1.0);
    }
    return p;
  }

 private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  char take() { return src_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("polynomial: " + msg + " at offset " + std::to_string(pos_));
  }

  void parse_term(Polynomial& p, double sign) {
    double coeff = sign;
    std::vector<int> exps(num_vars_, 0);
    parse_factor(coeff, exps);
    while (peek() == '*') {
      ++pos_;
      parse_factor(coeff, exps);
    }
    p.add_term(MultiIndex(std::move(exps)), coeff);
  }

  void parse_factor(double& coeff, std::vector<int>& exps) {
    if (src_.compare(pos_, 2, "th") == 0) {
      pos_ += 2;
      const long idx = parse_int();
      if (idx < 1 || static_cast<std::size_t>(idx) > num_vars_) {
        fail("variable th" + std::to_string(idx) + " outside th1..th" + std::to_string(num_vars_));
      }
      long e = 1;
      if (peek() == '^') {
        ++pos_;
        e = parse_int();
      }
      exps[static_cast<std::size_t>(idx - 1)] += static_cast<int>(e);
      return;
    }
    coeff *= parse_number();
  }

  long parse_int() {
    long v = 0;
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr == first) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  double parse_number() {
    double v = 0.0;
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr == first) fail("expected a number or variable");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  std::string src_;
  std::size_t pos_ = 0;
  std::size_t num_vars_;
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text, std::size_t num_vars) {
  return detail::PolyParser(text, num_vars).parse();
}

}  // namespace qeo

#endif  // QEO_POLY_PARSE_HPP
