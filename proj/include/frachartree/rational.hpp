#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace frachartree {

using Rational = boost::rational<std::int64_t>;

/// Parses "a/b", a plain decimal ("0.7", no exponent) or an integer.
/// Throws ParameterError on anything else.
Rational parse_rational(const std::string& text);

std::string format_rational(const Rational& r);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Rational exponent that may also be +infinity.
class Exponent {
 public:
  Exponent() = default;
  Exponent(Rational value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  static Exponent infinity() {
    Exponent e;
    e.infinite_ = true;
    return e;
  }
  /// Accepts "inf" / "infinity" in addition to parse_rational syntax.
  static Exponent parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  /// Throws ParameterError for infinity.
  Rational value() const;
  /// 1/e, with 1/infinity = 0. Throws ParameterError for e = 0.
  Rational reciprocal() const;
  double to_double() const;
  std::string str() const;

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  Rational value_{0};
  bool infinite_ = false;
};

}  // namespace frachartree
