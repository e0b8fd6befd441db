#pragma once

// Exact continued-fraction arithmetic for reals in (0,1).
//
// A CFNumber is x = [0; a_1, a_2, ...] with every a_n >= 1, generated lazily
// from a rule. All convergents, enclosures and signs are computed with GMP
// integers and rationals; nothing here touches floating point except the
// convenience approximation to_double().

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

namespace spiral {

using BigInt = mpz_class;
using Rational = mpq_class;

/// p_n / q_n with the conventions p_{-1} = 1, q_{-1} = 0, p_0 = 0, q_0 = 1.
struct Convergent {
  long n = 0;
  BigInt p;
  BigInt q;
};

/// Closed enclosure [lo, hi] of a real quantity.
struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& r) const { return lo <= r && r <= hi; }
  bool contains(const RationalInterval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
};

class CFNumber {
 public:
  /// Maps an index n >= 1 to the element a_n >= 1.
  using Rule = std::function<BigInt(std::size_t)>;

  explicit CFNumber(Rule rule);

  static CFNumber constant(const BigInt& a);
  static CFNumber periodic(std::vector<BigInt> period);
  /// a_n = 4 for odd n, n^n for even n.
  static CFNumber biased();

  /// a_n for n >= 1. Extends the cached prefix on demand.
  BigInt element(std::size_t n) const;
  /// a_1 .. a_count.
  std::vector<BigInt> elements(std::size_t count) const;
  /// Convergent with index n >= -1.
  Convergent convergent(long n) const;

  /// Nearest double, from an enclosure of width < 2^-80.
  double to_double() const;

 private:
  struct State;
  // Copies share one cache; the number itself is immutable, so extension
  // through any copy is visible to all and idempotent.
  std::shared_ptr<State> state_;
};

/// a_n of the biased number: 4 if n is odd, n^n if n is even.
BigInt biased_element(std::size_t n);

/// Interleaves two expansions: odd positions 1,3,5,... take the elements of
/// `odd_source` in order, even positions 2,4,6,... those of `even_source`.
CFNumber cf_product(const CFNumber& odd_source, const CFNumber& even_source);

/// Convergents 0..n_max.
std::vector<Convergent> convergents(const CFNumber& cf, std::size_t n_max);

/// [p_m/q_m, p_{m+1}/q_{m+1}] (ordered) for the smallest m whose width
/// 1/(q_m q_{m+1}) is at most width_bound.
RationalInterval enclose(const CFNumber& cf, const Rational& width_bound);

/// Sign of x - r. Never zero for irrational x.
int compare_to(const CFNumber& cf, const Rational& r);

/// q.x := q x - p with p = round(q x), the representative in (-1/2, 1/2).
struct RotationValue {
  int sign = 0;
  BigInt nearest;  // p
  RationalInterval enclosure;
};

/// Refines by doubling the prefix length; throws IterationCapExceeded past
/// 10^4 prefix terms.
RotationValue rotation_value(const CFNumber& cf, const BigInt& q);

/// Exact enclosure of |q_{n-1}.x| / |q_n.x| for n >= 1.
RationalInterval error_ratio_bounds(const CFNumber& cf, std::size_t n);

/// Elements as a JSON array of decimal strings.
nlohmann::json elements_to_json(const std::vector<BigInt>& elements);
std::vector<BigInt> elements_from_json(const nlohmann::json& j);

/// Builds a number from a JSON description:
///   {"kind": "biased"}
///   {"kind": "constant", "a": "4"}
///   {"kind": "periodic", "period": ["1", "2"]}
///   {"kind": "product", "odd": {...}, "even": {...}}
CFNumber cf_from_json(const nlohmann::json& j);

std::string to_string(const BigInt& v);
std::string to_string(const Rational& v);

}  // namespace spiral
