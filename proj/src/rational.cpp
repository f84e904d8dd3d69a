#include "ctl/rational.hpp"

#include <cctype>

#include "ctl/errors.hpp"

namespace ctl {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParameterError("empty number");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::int64_t n = std::stoll(text.substr(0, slash));
      std::int64_t d = std::stoll(text.substr(slash + 1));
      if (d == 0) throw ParameterError("zero denominator in '" + text + "'");
      return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(text));
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.size() > 15) throw ParameterError("too many decimals in '" + text + "'");
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParameterError("bad number '" + text + "'");
    bool negative = !whole.empty() && whole[0] == '-';
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
    std::int64_t num = (w < 0 ? -w : w) * scale + f;
    return Rational(negative ? -num : num, scale);
  } catch (const std::logic_error&) {
    throw ParameterError("bad number '" + text + "'");
  }
}

}  // namespace ctl
