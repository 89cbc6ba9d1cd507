#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tariffsched {

// Exact rational arithmetic everywhere; objective values are compared for
// equality against the oracle, so no floating point outside the LP.
// Expression templates are off so arithmetic composes with std::min and co.
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

inline BigInt rat_floor(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (numerator(r) < 0 && q * denominator(r) != numerator(r)) --q;
  return q;
}

inline BigInt rat_ceil(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (numerator(r) > 0 && q * denominator(r) != numerator(r)) ++q;
  return q;
}

inline bool rat_is_integer(const Rational& r) { return denominator(r) == 1; }

inline std::int64_t rat_to_i64(const Rational& r) {
  if (!rat_is_integer(r)) throw std::invalid_argument("rational is not an integer");
  return static_cast<std::int64_t>(numerator(r));
}

// Canonical text form: "a" when the denominator is 1, otherwise "a/b".
inline std::string rat_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace detail_rat {

// GMP's string constructor auto-detects octal on leading zeros; force
// base-10 by stripping them.
inline BigInt big_from_decimal(std::string s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::string sign;
  if (s[0] == '+' || s[0] == '-') {
    if (s[0] == '-') sign = "-";
    s.erase(0, 1);
  }
  std::size_t nz = 0;
  while (nz + 1 < s.size() && s[nz] == '0') ++nz;
  s.erase(0, nz);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("malformed integer literal");
  return BigInt(sign + s);
}

}  // namespace detail_rat

// Accepts "a", "a/b" and plain decimals such as "0.25" or "-1.5".
inline Rational rat_from_string(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  const std::string text(s);
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (num.empty() || den.empty()) throw std::invalid_argument("malformed rational: " + text);
    BigInt n = detail_rat::big_from_decimal(num);
    BigInt d = detail_rat::big_from_decimal(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rational(n, d);
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_digits = text.size() - dot - 1;
    if (frac_digits == 0 || digits.empty())
      throw std::invalid_argument("malformed decimal: " + text);
    const BigInt num = detail_rat::big_from_decimal(digits);
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
    return Rational(num, den);
  }
  return Rational(detail_rat::big_from_decimal(text));
}

// Tariff value: a nonnegative rational or a distinguished +infinity marker,
// ordered above every finite value.
class Cost {
 public:
  Cost() : finite_(true), value_(0) {}
  explicit Cost(Rational v) : finite_(true), value_(std::move(v)) {}
  explicit Cost(std::int64_t v) : finite_(true), value_(v) {}
  static Cost infinite() {
    Cost c;
    c.finite_ = false;
    return c;
  }

  bool is_infinite() const { return !finite_; }
  bool is_finite() const { return finite_; }
  const Rational& value() const {
    if (!finite_) throw std::logic_error("value() on infinite cost");
    return value_;
  }

  friend bool operator==(const Cost& a, const Cost& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend bool operator!=(const Cost& a, const Cost& b) { return !(a == b); }
  friend bool operator<(const Cost& a, const Cost& b) {
    if (a.finite_ && b.finite_) return a.value_ < b.value_;
    return a.finite_ && !b.finite_;
  }
  friend bool operator>(const Cost& a, const Cost& b) { return b < a; }
  friend bool operator<=(const Cost& a, const Cost& b) { return !(b < a); }
  friend bool operator>=(const Cost& a, const Cost& b) { return !(a < b); }

  // Infinity is absorbing under addition.
  friend Cost operator+(const Cost& a, const Rational& b) {
    if (!a.finite_) return a;
    return Cost(a.value_ + b);
  }

  std::string str() const { return finite_ ? rat_to_string(value_) : "inf"; }

 private:
  bool finite_;
  Rational value_;
};

inline Cost cost_from_string(std::string_view s) {
  if (s == "inf") return Cost::infinite();
  return Cost(rat_from_string(s));
}

}  // namespace tariffsched
