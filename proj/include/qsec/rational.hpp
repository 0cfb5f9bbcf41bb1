#pragma once

// Exact rational arithmetic and fiber-circle (R/Z) positions.
//
// Rational is an arbitrary-precision, always-canonical fraction.  FiberPos
// wraps a Rational into the half-open fundamental domain [0,1) of the circle
// R/Z and provides the cyclic primitives the portrait calculus needs:
// counterclockwise distance, open-arc membership, and the centered lift.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qsec {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) {
  return r.str();
}

// Parses "p/q" or "p".  Accepts an ASCII '-' or a U+2212 minus sign, and
// surrounding whitespace.  Throws std::invalid_argument on anything else
// (including q == 0).
inline Rational parse_rational(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (size_t i = 0; i < text.size();) {
    // U+2212 MINUS SIGN is e2 88 92 in UTF-8.
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xe2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x88 &&
        static_cast<unsigned char>(text[i + 2]) == 0x92) {
      s.push_back('-');
      i += 3;
      continue;
    }
    s.push_back(text[i]);
    ++i;
  }
  size_t begin = s.find_first_not_of(" \t\r\n");
  size_t end = s.find_last_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    throw std::invalid_argument("empty rational literal");
  }
  s = s.substr(begin, end - begin + 1);

  auto parse_int = [](const std::string& part) -> Integer {
    if (part.empty()) throw std::invalid_argument("empty integer part");
    size_t k = 0;
    bool neg = false;
    if (part[k] == '+' || part[k] == '-') {
      neg = part[k] == '-';
      ++k;
    }
    if (k == part.size()) throw std::invalid_argument("sign without digits");
    Integer value = 0;
    for (; k < part.size(); ++k) {
      if (part[k] < '0' || part[k] > '9') {
        throw std::invalid_argument("bad digit in rational literal: " + part);
      }
      value = value * 10 + (part[k] - '0');
    }
    return neg ? Integer(-value) : value;
  };

  size_t slash = s.find('/');
  if (slash == std::string::npos) {
    return Rational(parse_int(s));
  }
  Integer num = parse_int(s.substr(0, slash));
  Integer den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(num, den);
}

// Fractional part in [0,1).
inline Rational frac(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);  // den > 0 always.
  Integer q = num / den;  // truncates toward zero
  Integer rem = num - q * den;
  if (rem < 0) rem += den;
  return Rational(rem, den);
}

// Returns r rounded toward the representative in [-1/2, 1/2): the unique
// value x with x === r (mod 1) and -1/2 <= x < 1/2.
inline Rational centered_lift(const Rational& r) {
  Rational f = frac(r);
  if (f >= Rational(1, 2)) f -= 1;
  return f;
}

// A point of the fiber circle R/Z, stored by its representative in [0,1).
class FiberPos {
 public:
  FiberPos() : value_(0) {}
  explicit FiberPos(const Rational& r) : value_(frac(r)) {}

  const Rational& value() const { return value_; }

  friend bool operator==(const FiberPos& a, const FiberPos& b) {
    return a.value_ == b.value_;
  }
  friend bool operator!=(const FiberPos& a, const FiberPos& b) {
    return !(a == b);
  }
  // Order of representatives in [0,1); useful for sorting, not cyclic order.
  friend bool operator<(const FiberPos& a, const FiberPos& b) {
    return a.value_ < b.value_;
  }

  FiberPos rotated(const Rational& delta) const {
    return FiberPos(value_ + delta);
  }

 private:
  Rational value_;
};

// Counterclockwise distance from a to b: the unique d in [0,1) with
// a + d === b (mod 1).
inline Rational ccw_distance(const FiberPos& a, const FiberPos& b) {
  return frac(b.value() - a.value());
}

// True iff x lies strictly inside the open ccw arc from a to b.
// The endpoints must be distinct: a degenerate arc is a caller error.
inline bool cyclic_open_contains(const FiberPos& a, const FiberPos& b,
                                 const FiberPos& x) {
  if (a == b)
    throw std::invalid_argument(
        "cyclic_open_contains: arc endpoints coincide at " + to_string(a.value()));
  Rational arc = ccw_distance(a, b);
  Rational d = ccw_distance(a, x);
  return d > 0 && d < arc;
}

inline std::string to_string(const FiberPos& p) { return to_string(p.value()); }

}  // namespace qsec
