#include "lab/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "lab/errors.hpp"

namespace lab {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ConfigError("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos)
      return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(BigInt(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    int frac_len = static_cast<int>(s.size() - dot - 1);
    BigInt num(digits);
    BigInt den(1);
    for (int i = 0; i < frac_len; ++i) den *= 10;
    return Rational(num, den);
  } catch (const std::exception&) {
    throw ConfigError("malformed rational literal '" + text + "'");
  }
}

}  // namespace lab
