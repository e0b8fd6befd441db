#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <thread>

#include "spiral/contfrac.hpp"
#include "spiral/error.hpp"

using namespace spiral;

namespace {

// Oracle: convergents via products of [[a, 1], [1, 0]], independent of the
// library recurrence.
struct Mat {
  BigInt a, b, c, d;
};
std::vector<std::pair<BigInt, BigInt>> matrix_convergents(const std::vector<BigInt>& elems) {
  std::vector<std::pair<BigInt, BigInt>> out{{0, 1}};
  // x = [0; a1, a2, ...]: prefix product M = [[0,1],[1,0]] * prod [[a,1],[1,0]],
  // whose first column is (p_n, q_n).
  Mat m{0, 1, 1, 0};
  for (const auto& a : elems) {
    Mat next{m.a * a + m.b, m.a, m.c * a + m.d, m.c};
    m = next;
    out.emplace_back(m.a, m.c);
  }
  return out;
}

Rational x_point(const CFNumber& cf) {
  const auto box = enclose(cf, Rational(1, BigInt(1) << 4000));
  return (box.lo + box.hi) / 2;
}

Rational dist_to_int(const Rational& v) {
  Rational shifted = v + Rational(1, 2);
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  Rational r = v - f;
  return r;
}

BigInt pow_self(unsigned long n) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), n, n);
  return out;
}

}  // namespace

TEST_CASE("convergents of [0;4,4,4,...]") {
  const auto cs = convergents(CFNumber::constant(4), 3);
  REQUIRE(cs.size() == 4);
  const long p[] = {0, 1, 4, 17};
  const long q[] = {1, 4, 17, 72};
  for (int i = 0; i < 4; ++i) {
    CHECK(cs[i].n == i);
    CHECK(cs[i].p == p[i]);
    CHECK(cs[i].q == q[i]);
  }
}

TEST_CASE("index conventions") {
  const auto cf = CFNumber::biased();
  CHECK(cf.convergent(-1).p == 1);
  CHECK(cf.convergent(-1).q == 0);
  CHECK(cf.convergent(0).p == 0);
  CHECK(cf.convergent(0).q == 1);
  CHECK_THROWS_AS(cf.convergent(-2), Error);
}

TEST_CASE("biased elements and denominators") {
  CHECK(biased_element(1) == 4);
  CHECK(biased_element(2) == 4);
  CHECK(biased_element(6) == 46656);
  CHECK(biased_element(7) == 4);
  const auto cf = CFNumber::biased();
  CHECK(cf.convergent(4).q == 18449);
  const auto oracle = matrix_convergents(cf.elements(14));
  for (long n = 0; n <= 14; ++n) {
    CHECK(cf.convergent(n).p == oracle[static_cast<std::size_t>(n)].first);
    CHECK(cf.convergent(n).q == oracle[static_cast<std::size_t>(n)].second);
  }
}

TEST_CASE("determinant identity and monotone denominators") {
  for (const auto& cf : {CFNumber::biased(), CFNumber::constant(1),
                         CFNumber::periodic({1, 2, 3, 5})}) {
    for (long n = 0; n <= 40; ++n) {
      const auto cur = cf.convergent(n);
      const auto prev = cf.convergent(n - 1);
      const BigInt det = cur.q * prev.p - cur.p * prev.q;
      CHECK(det == (n % 2 == 0 ? 1 : -1));
      CHECK(cur.q >= prev.q);
    }
  }
}

TEST_CASE("product interleaves odd and even positions") {
  const auto golden = CFNumber::constant(1);
  const auto same = cf_product(golden, golden);
  for (std::size_t n = 1; n <= 20; ++n) CHECK(same.element(n) == 1);

  const auto mixed = cf_product(CFNumber::constant(2), CFNumber::constant(3));
  const std::vector<BigInt> expect{2, 3, 2, 3, 2, 3};
  CHECK(mixed.elements(6) == expect);

  // The biased number: constant 4 at odd positions, (2k)^(2k) at the k-th
  // even position.
  const CFNumber evens([](std::size_t k) { return pow_self(2 * k); });
  const auto rebuilt = cf_product(CFNumber::constant(4), evens);
  CHECK(rebuilt.elements(12) == CFNumber::biased().elements(12));
}

TEST_CASE("enclose") {
  const auto fours = CFNumber::constant(4);
  const auto box = enclose(fours, Rational(1, 10));
  CHECK(box.lo == Rational(4, 17));
  CHECK(box.hi == Rational(1, 4));
  CHECK(box.width() == Rational(1, 68));

  const auto wide = enclose(CFNumber::biased(), Rational(1));
  CHECK(wide.lo == 0);
  CHECK(wide.hi == Rational(1, 4));

  const auto cf = CFNumber::biased();
  const auto tight = enclose(cf, Rational(1, 1000000000));
  CHECK(tight.width() <= Rational(1, 1000000000));
  CHECK(tight.contains(x_point(cf)));

  RationalInterval outer = enclose(cf, Rational(1, 2));
  for (int k = 2; k < 200; k += 7) {
    const auto inner = enclose(cf, Rational(1, BigInt(1) << k));
    CHECK(outer.contains(inner));
    outer = inner;
  }
  CHECK_THROWS_AS(enclose(cf, Rational(0)), Error);
}

TEST_CASE("compare_to agrees with a tight enclosure") {
  const auto cf = CFNumber::constant(4);
  const Rational x = x_point(cf);  // sqrt(5) - 2
  CHECK(compare_to(cf, Rational(0)) == 1);
  CHECK(compare_to(cf, Rational(1, 4)) == -1);
  CHECK(compare_to(cf, Rational(4, 17)) == 1);
  CHECK(compare_to(cf, x + Rational(1, BigInt(1) << 100)) == -1);
  CHECK(compare_to(cf, x - Rational(1, BigInt(1) << 100)) == 1);
}

TEST_CASE("rotation signs alternate along convergents") {
  const auto cf = CFNumber::biased();
  for (long n = 0; n <= 9; ++n) {
    const auto rv = rotation_value(cf, cf.convergent(n).q);
    CHECK(rv.sign == (n % 2 == 0 ? 1 : -1));
    CHECK(rv.nearest == cf.convergent(n).p);
  }
  const auto four = rotation_value(cf, 4);
  CHECK(four.sign == -1);
  CHECK(-four.enclosure.hi > Rational(1, 21));
  CHECK(-four.enclosure.lo < Rational(1, 17));
}

TEST_CASE("two-sided error bound on convergents") {
  for (const auto& cf : {CFNumber::biased(), CFNumber::constant(1), CFNumber::periodic({3, 1, 7})}) {
    const Rational x = x_point(cf);
    for (long n = 0; n <= 10; ++n) {
      const BigInt qn = cf.convergent(n).q;
      const BigInt qn1 = cf.convergent(n + 1).q;
      const Rational err = abs(x * qn - cf.convergent(n).p);
      CHECK(err > Rational(1, qn + qn1));
      CHECK(err < Rational(1, qn1));
      if (n == 0 && cf.element(1) == 1) continue;  // p_0 = 0 is not the nearest integer to x
      const auto rv = rotation_value(cf, qn);
      const Rational signed_err = dist_to_int(x * qn);
      CHECK(rv.enclosure.contains(signed_err));
      CHECK(rv.enclosure.width() * (BigInt(1) << 60) <= abs(signed_err));
    }
  }
}

TEST_CASE("best approximation by brute force") {
  for (const auto& cf : {CFNumber::constant(1), CFNumber::constant(4), CFNumber::periodic({1, 2, 3})}) {
    const Rational x = x_point(cf);
    for (long n = 1; cf.convergent(n + 1).q <= 20000; ++n) {
      const BigInt qn = cf.convergent(n).q;
      const BigInt qn1 = cf.convergent(n + 1).q;
      const Rational best = abs(dist_to_int(x * qn));
      for (BigInt q = 1; q < qn1; ++q) {
        if (q == qn) continue;
        CHECK(abs(dist_to_int(x * q)) > best);
      }
    }
  }
}

TEST_CASE("error ratio lies between consecutive elements") {
  // |q_{n-1} x| / |q_n x| is the complete quotient [a_{n+1}; a_{n+2}, ...].
  const auto biased = CFNumber::biased();
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto r = error_ratio_bounds(biased, n);
    const BigInt a = biased.element(n + 1);
    CHECK(r.lo > Rational(a));
    CHECK(r.hi < Rational(a + 1));
    if (n % 2 == 0) {
      CHECK(r.lo > 2);
      CHECK(r.hi < 6);
    } else {
      const BigInt big = pow_self(n + 1);
      CHECK(r.lo > Rational(big, 2));
      CHECK(r.hi < Rational(big + 2));
    }
  }
  const auto golden = CFNumber::constant(1);
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto r = error_ratio_bounds(golden, n);
    CHECK(r.lo > Rational(1, 2));
    CHECK(r.hi < 3);
  }
  // Direct oracle against a tight enclosure of x.
  const Rational x = x_point(biased);
  for (long n = 1; n <= 6; ++n) {
    const Rational ratio = abs(dist_to_int(x * biased.convergent(n - 1).q)) /
                           abs(dist_to_int(x * biased.convergent(n).q));
    CHECK(error_ratio_bounds(biased, static_cast<std::size_t>(n)).contains(ratio));
  }
}

TEST_CASE("json round trip of elements") {
  const auto elems = CFNumber::biased().elements(10);
  const auto j = elements_to_json(elems);
  CHECK(j[9].get<std::string>() == "10000000000");
  CHECK(elements_from_json(j) == elems);
  CHECK_THROWS_AS(elements_from_json(nlohmann::json::array({"0"})), Error);
  const auto cf = cf_from_json(nlohmann::json{{"kind", "periodic"}, {"period", {"1", "2"}}});
  CHECK(cf.element(3) == 1);
  CHECK(cf.element(4) == 2);
  CHECK(cf_from_json("biased").element(4) == 256);
}

TEST_CASE("lazy prefix is consistent across threads") {
  const auto cf = CFNumber::biased();
  std::vector<std::thread> pool;
  std::vector<BigInt> seen(8);
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&, t] { seen[static_cast<std::size_t>(t)] = cf.convergent(20 + t % 3).q; });
  }
  for (auto& th : pool) th.join();
  for (int t = 0; t < 8; ++t) CHECK(seen[static_cast<std::size_t>(t)] == cf.convergent(20 + t % 3).q);
}

TEST_CASE("to_double") {
  CHECK(CFNumber::constant(1).to_double() == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-15));
  CHECK(CFNumber::constant(4).to_double() == doctest::Approx(std::sqrt(5.0) - 2).epsilon(1e-15));
}
