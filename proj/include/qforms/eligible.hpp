#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qforms/eisenstein.hpp"

namespace qforms {

/// N, D, the anisotropic primes and C_B filled in from the form.
BoundConstants make_constants(const QuadraticForm& q, long double C_f, const Rational& C_E);
/// {"form": ..., "C_f": 13.4964, "C_E": "36/71"}
BoundConstants constants_from_json(const nlohmann::json& j);
BoundConstants load_constants(const std::string& path);

/// sqrt(m') / tau(m) * prod_{p | m, p !| N, chi(p) = -1} (p - 1)/(p + 1), with m'
/// the part of m free of anisotropic primes.
long double B_value(uint64_t m, const BoundConstants& c);
/// log B(m), the quantity all eligibility comparisons are made on.
long double log_B(uint64_t m, const BoundConstants& c);

/// Product of B(p) < 1 over p <= 7.
long double compute_C_B(const BoundConstants& c);

struct EligiblePrime {
  uint64_t p;
  long double B;
  long double log_b;
};

/// Thresholds with upward slack: a borderline number is included.
struct Thresholds {
  long double numbers;  // C_f / C_E
  long double primes;   // C_f / (C_E C_B)
  long double log_numbers;
  long double log_primes;
};
Thresholds thresholds(const BoundConstants& c);

/// Relative slack applied on the log scale when testing B(m) <= threshold.
inline constexpr long double kEligibilitySlack = 1e-12L;

/// Primes with B(p) <= C_f / (C_E C_B). Scans primes in order and stops when
/// a prime fails and so does the next one (past any anisotropic prime).
/// Sorted by B ascending, ties by p.
std::vector<EligiblePrime> eligible_primes(const BoundConstants& c);

/// Every squarefree m over `primes` with B(m) <= C_f / C_E, 1 included,
/// ascending. `primes` must be sorted by B. Throws ResourceLimit past `cap`.
std::vector<uint64_t> squarefree_eligible(const BoundConstants& c, const std::vector<EligiblePrime>& primes,
                                          size_t cap = 100'000'000);

/// Largest support size of an eligible squarefree product.
int max_support(const BoundConstants& c, const std::vector<EligiblePrime>& primes);

/// {s p^2 : s in S, p in primes, B(s p^2) <= C_f / C_E}. p = 2 and anisotropic
/// primes are always tried; other p only when s p is eligible. Ascending.
std::vector<uint64_t> square_augment(const std::vector<uint64_t>& exceptions, const std::vector<uint64_t>& primes,
                                     const BoundConstants& c);

/// Returns the members of the argument that the form does not represent.
using ExceptionFilter = std::function<std::vector<uint64_t>(const std::vector<uint64_t>&)>;

struct ClosureRound {
  std::string kind;  // "squarefree" or "sp2"
  size_t candidates = 0;
  std::vector<uint64_t> exceptions;
};

struct ClosureResult {
  std::vector<uint64_t> exceptions;
  std::vector<ClosureRound> rounds;
  size_t eligible_prime_count = 0;
};

/// Squarefree round, then s p^2 rounds until a round finds nothing.
ClosureResult closure_loop(const BoundConstants& c, const ExceptionFilter& filter, int max_rounds = 64);

/// Consecutive primes p < q <= limit with B(p) > B(q). The gap bound q - p <= 2
/// only applies when q is not anisotropic (B(q) <= 1/2 otherwise); the scan in
/// eligible_primes runs past every anisotropic prime for that reason.
struct Inversion {
  uint64_t p;
  uint64_t q;
  bool q_anisotropic;
};
std::vector<Inversion> bp_inversions(const BoundConstants& c, uint64_t limit);

/// Numbers file: "ELG1", u64 count, then count little-endian u64.
void write_numbers(const std::string& path, const std::vector<uint64_t>& numbers);
std::vector<uint64_t> read_numbers(const std::string& path);

}  // namespace qforms
