#include "doctest.h"
#include "qforms/arith.hpp"
#include "qforms/matrix.hpp"
#include "qforms/rational.hpp"

using namespace qforms;

TEST_CASE("primality and factorization") {
  CHECK(is_prime(2));
  CHECK(is_prime(1000000007));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2,3,5,7
  CHECK(is_prime(18446744073709551557ULL));
  auto f = factorize(18047039010ULL);
  uint64_t prod = 1;
  for (auto [p, e] : f) {
    CHECK(is_prime(p));
    for (int i = 0; i < e; ++i) prod *= p;
  }
  CHECK(prod == 18047039010ULL);
  CHECK(divisor_count(1) == 1);
  CHECK(divisor_count(4) == 3);
  CHECK(divisor_count(6) == 4);
  CHECK(divisor_count(720) == 30);
  // product of two primes above 10^6 goes through rho
  auto g = factorize(1000003ULL * 1000033ULL);
  REQUIRE(g.size() == 2);
  CHECK(g[0].first == 1000003ULL);
}

TEST_CASE("kronecker symbol matches Euler's criterion") {
  for (uint64_t p : {3ULL, 5ULL, 11ULL, 13ULL, 101ULL}) {
    for (int64_t a = -30; a <= 30; ++a) {
      int64_t r = ((a % static_cast<int64_t>(p)) + p) % p;
      int expected = r == 0 ? 0 : (powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1);
      CHECK(kronecker(a, static_cast<int64_t>(p)) == expected);
    }
  }
  CHECK(kronecker(182, 3) == -1);
  CHECK(kronecker(182, 5) == -1);
  CHECK(kronecker(5, 8) == -1);
  CHECK(kronecker(17, 8) == 1);
}

TEST_CASE("integer helpers") {
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(99) == 9);
  CHECK(isqrt(100) == 10);
  CHECK(isqrt(~0ULL) == 4294967295ULL);
  CHECK(floor_div(-7, 2) == -4);
  CHECK(ceil_div(-7, 2) == -3);
  CHECK(valuation(int64_t{728}, 2) == 3);
  CHECK_THROWS_AS(narrow(static_cast<i128>(1) << 70), std::overflow_error);
}

TEST_CASE("rational arithmetic") {
  Rational a(3, 4), b(8, 7);
  CHECK((a * b).str() == "6/7");
  CHECK((a + b).str() == "53/28");
  CHECK(Rational::parse("36/71") == Rational(72, 142));
  CHECK(Rational(-3, 2).floor() == -2);
  CHECK(rational_pow(2, -3) == Rational(1, 8));
  CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("matrix determinant, adjugate and kernel completion") {
  IntMatrix m{{1, 1, 0}, {1, 2, 1}, {0, 1, 7}};
  CHECK(m.determinant() == 6);
  IntMatrix prod = m * m.adjugate();
  CHECK(prod == IntMatrix{{6, 0, 0}, {0, 6, 0}, {0, 0, 6}});
  std::vector<int64_t> w{6, -4, 10};
  int64_t g = 0;
  IntMatrix u = kernel_completion(w, g);
  CHECK(g == 2);
  CHECK(std::llabs(static_cast<int64_t>(u.determinant())) == 1);
  for (int j = 0; j < 3; ++j) {
    int64_t s = 0;
    for (int i = 0; i < 3; ++i) s += w[i] * u(i, j);
    CHECK(s == (j == 0 ? 2 : 0));
  }
}
