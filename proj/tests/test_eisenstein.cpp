#include <cmath>

#include "doctest.h"
#include "qforms/eisenstein.hpp"
#include "qforms/eligible.hpp"
#include "qforms/local_density.hpp"
#include "qforms/represent.hpp"

using namespace qforms;

namespace {
const QuadraticForm kHalmos = QuadraticForm::diagonal({1, 2, 7, 13});
constexpr long double kCf = 13.4964L;
}  // namespace

TEST_CASE("closed-form betas equal the reduction-map densities") {
  for (int64_t m = 1; m <= 500; ++m) {
    CHECK(halmos_beta2(m) == local_density(kHalmos, 2, m));
    CHECK(halmos_beta7(m) == local_density(kHalmos, 7, m));
    CHECK(halmos_beta13(m) == local_density(kHalmos, 13, m));
  }
}

TEST_CASE("prime factors equal unimodular densities over the Euler factor") {
  for (uint64_t p : {3ULL, 5ULL, 11ULL, 17ULL, 19ULL})
    for (int64_t m : {static_cast<int64_t>(p), static_cast<int64_t>(p * p), static_cast<int64_t>(p * p * p),
                      static_cast<int64_t>(2 * p * p)}) {
      const int chi = kronecker(182, static_cast<int64_t>(p));
      const i128 pp = static_cast<i128>(p) * p;
      Rational expect = unimodular_density(kHalmos, p, m) / (Rational(1) - Rational(chi, pp));
      CHECK(halmos_prime_factor(p, m) == expect);
    }
}

TEST_CASE("Halmos Eisenstein coefficients") {
  CHECK(a_E_halmos(1) == Rational(56, 71));
  CHECK(a_E_halmos(2) == Rational(182 * 2, 213) * local_density(kHalmos, 2, 2) * local_density(kHalmos, 7, 2) *
                             local_density(kHalmos, 13, 2));
  for (int64_t m = 1; m <= 500; ++m)
    CHECK(a_E_halmos(m) == eisenstein_coefficient(kHalmos, m, halmos_l_value_coefficient()));
  CHECK(a_E_halmos(5).sign() > 0);
  CHECK_THROWS(a_E_halmos(0));
}

TEST_CASE("lower bound and cusp bound") {
  BoundConstants c = make_constants(kHalmos, kCf, Rational(36, 71));
  CHECK(eisenstein_lower_bound(1, c) == Rational(36, 71));
  CHECK(eisenstein_lower_bound(3, c) == Rational(54, 71));
  CHECK(eisenstein_lower_bound(11, c) == Rational(36, 71) * Rational(11) *
                                            (c.chi(11) == -1 ? Rational(10, 12) : Rational(1)));
  CHECK(std::fabs(cusp_bound(1, kCf) - kCf) < 1e-15L);
  CHECK(std::fabs(cusp_bound(4, kCf) - kCf * 6) < 1e-12L);
  CHECK(std::fabs(cusp_bound(6, kCf) - kCf * std::sqrt(6.0L) * 4) < 1e-12L);
  QuadraticForm even = QuadraticForm::diagonal({2, 2, 2, 2});
  BoundConstants ce = make_constants(even, 1, Rational(1));
  CHECK_THROWS_AS(eisenstein_lower_bound(3, ce), std::invalid_argument);
}

TEST_CASE("Eisenstein lower bound holds for the Halmos form") {
  BoundConstants c = make_constants(kHalmos, kCf, Rational(36, 71));
  for (int64_t m = 1; m <= 2000; ++m) CHECK(a_E_halmos(m) >= eisenstein_lower_bound(m, c));
}

TEST_CASE("Deligne sandwich up to 2000") {
  auto r = theta_coefficients(kHalmos, 2000);
  CHECK(r[5] == 0);
  for (int64_t m = 1; m <= 2000; ++m) {
    long double gap = std::fabs(static_cast<long double>(r[m]) - a_E_halmos(m).to_long_double());
    CHECK(gap <= cusp_bound(m, kCf));
  }
}
