#include <cctype>
#include <string>

#include "goh_atlas/polynomial.hpp"

namespace goh_atlas {
namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, int n) : s_(text), n_(n) {}

  Poly parse() {
    Poly out(n_);
    skip();
    if (pos_ == s_.size()) throw InvalidArgument("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      out += term() * Rational(sign);
      skip();
    }
    return out;
  }

 private:
  Poly term() {
    Poly t = Poly::constant(n_, Rational(1));
    while (true) {
      skip();
      t = t * factor();
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      return t;
    }
  }

  Poly factor() {
    if (pos_ >= s_.size()) fail("unexpected end");
    if (s_[pos_] == 'x') {
      ++pos_;
      const int var = integer();
      if (var < 1 || var > n_) fail("variable index out of range");
      int power = 1;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        skip();
        power = integer();
      }
      Exponent e(static_cast<std::size_t>(n_), 0);
      e[static_cast<std::size_t>(var - 1)] = static_cast<std::uint8_t>(power);
      return Poly::monomial(e, Rational(1));
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/' || s_[pos_] == '.'))
      ++pos_;
    if (start == pos_) fail("expected a number or variable");
    return Poly::constant(n_, parse_rational(s_.substr(start, pos_ - start)));
  }

  int integer() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("polynomial parse error at " + std::to_string(pos_) + ": " + what + " in '" +
                          std::string(s_) + "'");
  }

  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, int n) { return PolyParser(text, n).parse(); }

PolyVec parse_field(const std::vector<std::string>& components, int n) {
  if (static_cast<int>(components.size()) != n) throw InvalidArgument("field needs one polynomial per coordinate");
  PolyVec out;
  for (const auto& c : components) out.push_back(parse_poly(c, n));
  return out;
}

}  // namespace goh_atlas
