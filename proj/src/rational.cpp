#include "goh_atlas/rational.hpp"

#include <string>

#include "goh_atlas/errors.hpp"

namespace goh_atlas {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.front() == ' ' || s.front() == '+')) s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw InvalidArgument("empty rational literal");
  try {
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
      if (s.find_first_of("/eE") != std::string::npos)
        throw InvalidArgument("unsupported rational literal: " + s);
      const std::string frac = s.substr(dot + 1);
      std::string digits = s.substr(0, dot) + frac;
      if (digits.empty() || digits == "-") throw InvalidArgument("bad rational literal: " + s);
      mpz_class den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      Rational q(mpz_class(digits), den);
      q.canonicalize();
      return q;
    }
    Rational q(s);
    if (sgn(q.get_den()) == 0) throw InvalidArgument("zero denominator in " + s);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("bad rational literal: " + s);
  }
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace goh_atlas
