#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qforms/form.hpp"
#include "qforms/rational.hpp"

namespace qforms {

/// Per-form constants driving the eligibility screen. C_f and C_E are inputs;
/// C_B, N, D and the anisotropic primes are derived (see make_constants).
struct BoundConstants {
  QuadraticForm form;
  long double C_f = 0;
  Rational C_E;
  long double C_B = 1;
  int64_t N = 1;
  int64_t D = 1;
  std::vector<uint64_t> anisotropic;
  /// Replaces the (D | p) character when set; synthetic configurations use it.
  std::function<int(uint64_t)> character;

  /// chi(p) = (D | p) for p not dividing N, 0 otherwise.
  [[nodiscard]] int chi(uint64_t p) const;
  [[nodiscard]] bool divides_level(uint64_t p) const { return N % static_cast<int64_t>(p) == 0; }
  [[nodiscard]] bool is_anisotropic(uint64_t p) const;
};

/// Closed forms for x^2 + 2y^2 + 7z^2 + 13w^2.
Rational halmos_beta2(int64_t m);
Rational halmos_beta7(int64_t m);
Rational halmos_beta13(int64_t m);
/// beta_p(m) p^2 / (p^2 - chi(p)) for p | m, p not in {2, 7, 13}.
Rational halmos_prime_factor(uint64_t p, int64_t m);
/// a_E(m) = (182 m / 213) beta_2 beta_7 beta_13 prod_{p | m, p != 2,7,13} factor.
Rational a_E_halmos(int64_t m);

/// L(2, chi_Q) = c * sqrt(D) * pi^2 for the Halmos form.
inline Rational halmos_l_value_coefficient() { return Rational(213, 33124); }

/// Eisenstein coefficient of a quaternary form given L(2, chi) = c sqrt(D) pi^2:
/// a_E(m) = m / (c D) * prod_{p | 2D} beta_p(m) * prod_{p | m, p !| 2D} beta_p(m) / (1 - chi(p)/p^2).
Rational eisenstein_coefficient(const QuadraticForm& q, int64_t m, const Rational& l_value_coefficient);

/// C_E m prod_{p !| N, p | m, chi(p) = -1} (p - 1)/(p + 1). Throws for m not
/// locally represented.
Rational eisenstein_lower_bound(int64_t m, const BoundConstants& c);

/// C_f sqrt(m) tau(m)
long double cusp_bound(int64_t m, long double C_f);

}  // namespace qforms
