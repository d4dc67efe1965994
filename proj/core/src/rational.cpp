#include "fracphi/rational.hpp"

#include <charconv>
#include <limits>

#include "fracphi/error.hpp"

namespace fracphi {
namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  if (s.empty()) throw InvalidArgument("invalid rational: '" + std::string(whole) + "'");
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument("invalid rational: '" + std::string(whole) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text, bool* was_decimal) {
  const std::string_view s = trim(text);
  if (was_decimal) *was_decimal = false;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const std::int64_t p = parse_int(trim(s.substr(0, slash)), text);
    const std::int64_t q = parse_int(trim(s.substr(slash + 1)), text);
    if (q == 0) throw InvalidArgument("invalid rational: zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    if (was_decimal) *was_decimal = true;
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if (frac_part.size() > 17 || (int_part.empty() && frac_part.empty())) {
      throw InvalidArgument("invalid rational: '" + std::string(text) + "'");
    }
    for (char c : frac_part) {
      if (c < '0' || c > '9') throw InvalidArgument("invalid rational: '" + std::string(text) + "'");
    }
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    if (whole > (std::numeric_limits<std::int64_t>::max() - frac) / scale) {
      throw InvalidArgument("invalid rational: overflow in '" + std::string(text) + "'");
    }
    Rational r(whole * scale + frac, scale);
    return negative ? -r : r;
  }
  return Rational(parse_int(s, text));
}

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_short_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return to_string(r);
}

Alpha::Alpha(Rational value) : value_(value) {
  if (value_ < 0 || value_ >= 1) {
    throw InvalidArgument("alpha must lie in [0, 1), got " + to_short_string(value_));
  }
}

Alpha Alpha::parse(std::string_view text, bool* was_decimal) {
  bool decimal = false;
  const Rational r = parse_rational(text, &decimal);
  if (was_decimal) *was_decimal = decimal;
  if (decimal && (r == Rational(5, 8) || r == Rational(3, 4))) {
    throw InvalidArgument("alpha " + std::string(text) +
                          " sits on a regime boundary; give it as p/q (" + to_short_string(r) + ")");
  }
  return Alpha(r);
}

std::string to_string(const Alpha& a) { return to_short_string(a.value()); }

}  // namespace fracphi
