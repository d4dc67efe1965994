#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace fracphi {

using Rational = boost::rational<std::int64_t>;

/// Parses "p/q", an integer, or a finite decimal such as "0.625".
/// Decimals are converted exactly (0.625 -> 5/8). Sets *was_decimal when given.
Rational parse_rational(std::string_view text, bool* was_decimal = nullptr);

/// Always "p/q" form, e.g. "1/6", "2/1".
std::string to_string(const Rational& r);

/// "p" for integers, "p/q" otherwise.
std::string to_short_string(const Rational& r);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::int64_t floor(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
  return q;
}

/// Fractional-derivative order, exact, restricted to [0, 1).
class Alpha {
 public:
  explicit Alpha(Rational value);
  Alpha(std::int64_t num, std::int64_t den) : Alpha(Rational(num, den)) {}

  /// Accepts "p/q" or decimal text. Decimal input that lands exactly on a
  /// regime boundary (5/8 or 3/4) is rejected; "p/q" is required there.
  static Alpha parse(std::string_view text, bool* was_decimal = nullptr);

  const Rational& value() const noexcept { return value_; }
  double as_double() const noexcept { return to_double(value_); }
  /// 2*alpha, the exponent carried by every line numerator |q|^(2 alpha).
  Rational two_alpha() const { return value_ * 2; }

  friend bool operator==(const Alpha&, const Alpha&) = default;
  friend bool operator<(const Alpha& a, const Alpha& b) { return a.value_ < b.value_; }

 private:
  Rational value_;
};

std::string to_string(const Alpha& a);

}  // namespace fracphi
