#pragma once

// Exact scalar types and small helpers shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ipg {

// Expression templates off: values are stored and passed around far more
// than they are combined in long expressions.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// A lattice point. Coordinates of every set handled here fit comfortably in
/// 64 bits (boxes are small); anything that can grow uses Integer.
using IntPoint = std::vector<std::int64_t>;

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;
using IntegerVector = std::vector<Integer>;
using IntegerMatrix = std::vector<IntegerVector>;
using IntMatrix = std::vector<IntPoint>;

class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Integer numerator(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline Integer denominator(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

inline Integer floor(const Rational& q) {
  return floor_div(numerator(q), denominator(q));
}
inline Integer ceil(const Rational& q) {
  return ceil_div(numerator(q), denominator(q));
}

inline std::int64_t floor_div64(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div64(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

inline bool fits_int64(const Integer& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

inline std::int64_t to_int64(const Integer& v) {
  if (!fits_int64(v)) throw ArithmeticError("integer does not fit in 64 bits: " + v.str());
  return v.convert_to<std::int64_t>();
}

inline std::int64_t to_int64(const Rational& q) {
  if (denominator(q) != 1) throw ArithmeticError("value is not integral: " + q.str());
  return to_int64(numerator(q));
}

inline Integer gcd(Integer a, Integer b) {
  return boost::multiprecision::gcd(a, b);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

/// Canonical text form: "p" for integers, "p/q" in lowest terms otherwise.
inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Always "p/q", even for integers (used where a fraction is the contract).
inline std::string to_fraction_string(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p", "-p" or "p/q".
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [](std::string_view s) {
    if (s.empty()) throw ArithmeticError("empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw ArithmeticError("malformed integer literal");
    for (std::size_t j = i; j < s.size(); ++j)
      if (s[j] < '0' || s[j] > '9') throw ArithmeticError("malformed integer literal: " + std::string(s));
    return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer num = parse_int(text.substr(0, slash));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ArithmeticError("zero denominator in rational literal");
  return Rational(num, den);
}

inline std::string to_string(const IntPoint& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << ')';
  return os.str();
}

inline std::int64_t dot(const IntPoint& a, const IntPoint& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::int64_t norm1(const IntPoint& a) {
  std::int64_t s = 0;
  for (auto v : a) s += v < 0 ? -v : v;
  return s;
}

inline IntPoint concat(const IntPoint& a, const IntPoint& b) {
  IntPoint r;
  r.reserve(a.size() + b.size());
  r.insert(r.end(), a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

inline RationalVector to_rational(const IntPoint& p) {
  return RationalVector(p.begin(), p.end());
}

}  // namespace ipg
