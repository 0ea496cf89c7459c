// Exact truth values of the standard Gödel algebra [0,1] restricted to the
// rationals, plus the three Gödel operations written once for any totally
// ordered value type with designated bottom and top.

#ifndef GKL_TRUTH_VALUE_HPP
#define GKL_TRUTH_VALUE_HPP

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "gkl/error.hpp"

namespace gkl {

/// Any chain with least element `zero()` and greatest element `one()`.
/// Gödel operations depend only on the order, so the evaluators are written
/// against this concept and run either on exact rationals or on rank keys.
template <class V>
concept GodelChain = std::totally_ordered<V> && requires {
  { V::zero() } -> std::convertible_to<V>;
  { V::one() } -> std::convertible_to<V>;
};

template <GodelChain V>
constexpr V meet(const V& x, const V& y) {
  return y < x ? y : x;
}

template <GodelChain V>
constexpr V join(const V& x, const V& y) {
  return x < y ? y : x;
}

/// Heyting implication of a chain: 1 if x <= y, otherwise y.
template <GodelChain V>
constexpr V residuum(const V& x, const V& y) {
  return x <= y ? V::one() : y;
}

template <GodelChain V>
constexpr V negation(const V& x) {
  return residuum(x, V::zero());
}

/// An exact rational in [0,1], always reduced.
class TruthValue {
 public:
  using Rational = boost::multiprecision::cpp_rational;
  using Integer = boost::multiprecision::cpp_int;

  TruthValue() = default;

  /// Throws ValueError unless 0 <= num/den <= 1.
  TruthValue(const Integer& num, const Integer& den) {
    if (den == 0) throw ValueError("zero denominator");
    set(Rational(num, den));
  }

  explicit TruthValue(const Rational& r) { set(r); }

  static TruthValue zero() { return TruthValue(); }
  static TruthValue one() { return TruthValue(Rational(1)); }

  /// Parses "p/q", "0", "1" or any integer/rational literal in [0,1].
  static TruthValue parse(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string& t) {
      const auto b = t.find_first_not_of(" \t");
      const auto e = t.find_last_not_of(" \t");
      t = b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    trim(s);
    if (s.empty()) throw ValueError("empty rational literal");
    const auto slash = s.find('/');
    auto integer = [&](std::string digits) -> Integer {
      trim(digits);
      if (digits.empty()) throw ValueError("malformed rational '" + s + "'");
      std::size_t start = digits[0] == '-' || digits[0] == '+' ? 1 : 0;
      if (start == digits.size()) throw ValueError("malformed rational '" + s + "'");
      for (std::size_t i = start; i < digits.size(); ++i) {
        if (digits[i] < '0' || digits[i] > '9') {
          throw ValueError("malformed rational '" + s + "'");
        }
      }
      return Integer(digits);
    };
    if (slash == std::string::npos) return TruthValue(integer(s), Integer(1));
    return TruthValue(integer(s.substr(0, slash)), integer(s.substr(slash + 1)));
  }

  const Rational& rational() const { return value_; }
  Integer numerator() const { return boost::multiprecision::numerator(value_); }
  Integer denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  std::string str() const {
    if (denominator() == 1) return numerator().str();
    return numerator().str() + "/" + denominator().str();
  }

  friend bool operator==(const TruthValue& a, const TruthValue& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const TruthValue& a, const TruthValue& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const TruthValue& v) {
    return os << v.str();
  }

 private:
  void set(const Rational& r) {
    if (r < 0 || r > 1) {
      throw ValueError("truth value " + r.str() + " outside [0,1]");
    }
    value_ = r;
  }

  Rational value_{0};
};

static_assert(GodelChain<TruthValue>);

/// Order key used by the enumerators: 0 is bottom, kTop is top, and every
/// intermediate level is a key strictly in between. Keys are spaced so that
/// new levels can be inserted by bisection without relabelling.
struct Rank {
  static constexpr std::int64_t kTop = std::int64_t{1} << 62;

  std::int64_t key = 0;

  static constexpr Rank zero() { return Rank{0}; }
  static constexpr Rank one() { return Rank{kTop}; }

  friend constexpr auto operator<=>(const Rank&, const Rank&) = default;
};

static_assert(GodelChain<Rank>);

}  // namespace gkl

#endif  // GKL_TRUTH_VALUE_HPP
