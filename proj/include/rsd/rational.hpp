#ifndef RSD_RATIONAL_HPP_
#define RSD_RATIONAL_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rsd {

/// Arbitrary-precision nonnegative integer used for permutation counts.
using Count = boost::multiprecision::cpp_int;

/// Exact rational, always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// Factorials 0! .. n! computed once and reused within one query.
class FactorialTable {
 public:
  explicit FactorialTable(std::uint64_t n) {
    values_.reserve(static_cast<std::size_t>(n) + 1);
    values_.emplace_back(1);
    for (std::uint64_t k = 1; k <= n; ++k) values_.push_back(values_.back() * k);
  }

  const Count& operator()(std::uint64_t k) const { return values_.at(static_cast<std::size_t>(k)); }

  /// C(a, b); zero when b > a.
  Count binomial(std::uint64_t a, std::uint64_t b) const {
    if (b > a) return Count(0);
    return (*this)(a) / ((*this)(b) * (*this)(a - b));
  }

  std::uint64_t limit() const { return static_cast<std::uint64_t>(values_.size()) - 1; }

 private:
  std::vector<Count> values_;
};

inline Count factorial(std::uint64_t n) {
  Count f = 1;
  for (std::uint64_t k = 2; k <= n; ++k) f *= k;
  return f;
}

/// "p/q" in lowest terms, or bare "p" for integers.
inline std::string to_fraction_string(const Rational& value) {
  const Count num = numerator(value);
  const Count den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Fixed-point decimal rendering with `digits` places, round half away from zero.
/// Display-only; never feeds back into computation.
inline std::string to_decimal_string(const Rational& value, unsigned digits) {
  if (digits == 0) throw std::invalid_argument("decimal rendering needs at least one digit");
  Count num = numerator(value);
  const Count den = denominator(value);
  const bool negative = num < 0;
  if (negative) num = -num;
  Count scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  const Count scaled = (num * scale * 2 + den) / (den * 2);
  const Count whole = scaled / scale;
  const Count frac = scaled % scale;
  std::string frac_str = frac.str();
  frac_str.insert(frac_str.begin(), digits - frac_str.size(), '0');
  return (negative ? "-" : "") + whole.str() + "." + frac_str;
}

}  // namespace rsd

#endif  // RSD_RATIONAL_HPP_
