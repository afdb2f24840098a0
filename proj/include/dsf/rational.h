#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsf {

/// Exact arbitrary-precision rational. Always kept in canonical form.
using Rational = mpq_class;

/// Parses an integer ("12"), a decimal ("2.50", "-0.125") or a fraction
/// ("3/4") into an exact rational. Throws std::invalid_argument on bad text.
Rational parse_rational(std::string_view text);

/// Canonical rendering: "p" for integers, "p/q" in lowest terms otherwise.
std::string to_string(const Rational& value);

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& value) { return value.get_d(); }

/// Integers obtained by scaling a family of rationals by the lcm of their
/// denominators. Lets the combinatorial oracles run on int64 arithmetic while
/// staying exact.
struct ScaledIntegers {
  std::vector<std::int64_t> values;
  mpz_class scale;  // value[i] == original[i] * scale

  Rational unscale(std::int64_t v) const {
    Rational r(mpz_class(static_cast<long>(v)), scale);
    r.canonicalize();
    return r;
  }
};

/// Returns nullopt when the scaled sum of |values| would not fit in 62 bits.
std::optional<ScaledIntegers> scale_to_integers(std::span<const Rational> values);

/// ⌊log₂ n⌋ for n ≥ 1, and 0 for n == 0.
int floor_log2(std::uint64_t n);
/// ⌈log₂ n⌉ for n ≥ 1, and 0 for n == 0.
int ceil_log2(std::uint64_t n);

}  // namespace dsf
