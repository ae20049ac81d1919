#include "frachartree/rational.hpp"

#include <cctype>
#include <limits>

#include "frachartree/errors.hpp"

namespace frachartree {

namespace {

std::int64_t parse_int(const std::string& s, const std::string& whole) {
  if (s.empty()) throw ParameterError("malformed rational '" + whole + "'");
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ParameterError("malformed rational '" + whole + "'");
  }
  if (pos != s.size()) throw ParameterError("malformed rational '" + whole + "'");
  return v;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  const std::string text = trim(raw);
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const auto num = parse_int(trim(text.substr(0, slash)), text);
    const auto den = parse_int(trim(text.substr(slash + 1)), text);
    if (den == 0) throw ParameterError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  if (const auto dot = text.find('.'); dot != std::string::npos) {
    std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 15) throw ParameterError("malformed rational '" + text + "'");
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParameterError("malformed rational '" + text + "'");
    }
    bool negative = false;
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) {
      negative = whole[0] == '-';
      whole = whole.substr(1);
    }
    if (whole.empty()) whole = "0";
    if (whole[0] == '-' || whole[0] == '+') throw ParameterError("malformed rational '" + text + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::int64_t w = parse_int(whole, text);
    if (w > std::numeric_limits<std::int64_t>::max() / scale - 1) throw ParameterError("rational out of range");
    Rational r(w * scale + parse_int(frac, text), scale);
    return negative ? -r : r;
  }
  return Rational(parse_int(text, text));
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Exponent Exponent::parse(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity" || t == "Inf") return infinity();
  return Exponent(parse_rational(t));
}

Rational Exponent::value() const {
  if (infinite_) throw ParameterError("exponent is infinite");
  return value_;
}

Rational Exponent::reciprocal() const {
  if (infinite_) return Rational(0);
  if (value_ == Rational(0)) throw ParameterError("reciprocal of zero exponent");
  return Rational(1) / value_;
}

double Exponent::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : frachartree::to_double(value_);
}

std::string Exponent::str() const { return infinite_ ? "inf" : format_rational(value_); }

}  // namespace frachartree
