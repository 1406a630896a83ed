#include "qforms/eisenstein.hpp"

#include <algorithm>
#include <cmath>

#include "qforms/local_density.hpp"

namespace qforms {

int BoundConstants::chi(uint64_t p) const {
  if (divides_level(p)) return 0;
  if (character) return character(p);
  return kronecker(D, static_cast<int64_t>(p));
}

bool BoundConstants::is_anisotropic(uint64_t p) const {
  return std::find(anisotropic.begin(), anisotropic.end(), p) != anisotropic.end();
}

namespace {

// (ord_p m, m / p^ord)
std::pair<int, int64_t> split(int64_t m, int64_t p) {
  int e = 0;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  return {e, m};
}

// scale * sum_{i=0}^{terms-1} p^{-2i}
Rational geometric(const Rational& scale, int64_t p, int terms) {
  Rational s(0);
  for (int i = 0; i < terms; ++i) s += rational_pow(p, -2 * i);
  return scale * s;
}

// Shared shape of the three closed forms: even order 2k gives
// lead * sum_{i<k} p^{-2i} + p^{-2k} * even_value, odd order 2k+1 gives
// lead * sum_{i<=k} p^{-2i} + p^{-(2k+1)} * odd_value.
Rational closed_form(int64_t p, int ord, const Rational& lead, bool first_class, const Rational& even_a,
                     const Rational& even_b, const Rational& odd_a, const Rational& odd_b) {
  int k = ord / 2;
  if (ord % 2 == 0) return geometric(lead, p, k) + rational_pow(p, -2 * k) * (first_class ? even_a : even_b);
  return geometric(lead, p, k + 1) + rational_pow(p, -(2 * k + 1)) * (first_class ? odd_a : odd_b);
}

}  // namespace

Rational halmos_beta2(int64_t m) {
  auto [e, u] = split(m, 2);
  int64_t r = u % 8;
  bool first = r == 1 || r == 3;
  return closed_form(2, e, Rational(3, 4), first, Rational(3, 4), Rational(5, 4), Rational(3, 4), Rational(1, 4));
}

Rational halmos_beta7(int64_t m) {
  auto [e, u] = split(m, 7);
  int64_t r = u % 7;
  bool first = r == 1 || r == 2 || r == 4;
  return closed_form(7, e, Rational(48, 49), first, Rational(8, 7), Rational(6, 7), Rational(2, 7), Rational(0));
}

Rational halmos_beta13(int64_t m) {
  auto [e, u] = split(m, 13);
  int64_t r = u % 13;
  bool first = r == 1 || r == 3 || r == 4 || r == 9 || r == 10 || r == 12;
  return closed_form(13, e, Rational(168, 169), first, Rational(14, 13), Rational(12, 13), Rational(2, 13), Rational(0));
}

Rational halmos_prime_factor(uint64_t p, int64_t m) {
  const int64_t pp = static_cast<int64_t>(p);
  const int ord = split(m, pp).first;
  const int chi = kronecker(182, pp);
  int k = ord / 2;
  if (ord % 2 == 0) {
    Rational num = chi == 1 ? Rational(ipow(pp, 2 * k + 1) - 1, pp - 1) : Rational(ipow(pp, 2 * k + 1) + 1, pp + 1);
    return num * rational_pow(pp, -2 * k);
  }
  Rational num = chi == 1 ? Rational(ipow(pp, 2 * k + 2) - 1, pp - 1) : Rational(ipow(pp, 2 * k + 2) - 1, pp + 1);
  return num * rational_pow(pp, -(2 * k + 1));
}

Rational a_E_halmos(int64_t m) {
  if (m <= 0) throw std::invalid_argument("a_E needs m >= 1");
  Rational v = Rational(182 * m, 213) * halmos_beta2(m) * halmos_beta7(m) * halmos_beta13(m);
  for (auto [p, e] : factorize(static_cast<uint64_t>(m)))
    if (p != 2 && p != 7 && p != 13) v *= halmos_prime_factor(p, m);
  return v;
}

Rational eisenstein_coefficient(const QuadraticForm& q, int64_t m, const Rational& l_value_coefficient) {
  if (q.dim() != 4) throw std::invalid_argument("Eisenstein coefficient is implemented for quaternary forms");
  const int64_t d = q.determinant();
  Rational v = Rational(m) / (l_value_coefficient * Rational(d));
  std::vector<uint64_t> bad = bad_primes(q);
  for (uint64_t p : bad) v *= local_density(q, p, m);
  for (auto [p, e] : factorize(static_cast<uint64_t>(m))) {
    if (std::find(bad.begin(), bad.end(), p) != bad.end()) continue;
    const i128 pp = static_cast<i128>(p);
    Rational euler = Rational(1) - Rational(kronecker(d, static_cast<int64_t>(p)), pp * pp);
    v *= unimodular_density(q, p, m) / euler;
  }
  return v;
}

Rational eisenstein_lower_bound(int64_t m, const BoundConstants& c) {
  if (!is_locally_represented(c.form, m)) throw std::invalid_argument("m is not locally represented");
  Rational v = c.C_E * Rational(m);
  for (auto [p, e] : factorize(static_cast<uint64_t>(m)))
    if (c.chi(p) == -1) v *= Rational(static_cast<i128>(p) - 1, static_cast<i128>(p) + 1);
  return v;
}

long double cusp_bound(int64_t m, long double C_f) {
  return C_f * std::sqrt(static_cast<long double>(m)) * static_cast<long double>(divisor_count(static_cast<uint64_t>(m)));
}

}  // namespace qforms
