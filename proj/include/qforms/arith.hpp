#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qforms {

using i128 = __int128;
using u128 = unsigned __int128;

/// Thrown when a computation would exceed a configured work or memory cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int64_t gcd64(int64_t a, int64_t b);
int64_t lcm64(int64_t a, int64_t b);

/// Exponent of p in n (n != 0).
int valuation(int64_t n, int64_t p);
int valuation(i128 n, int64_t p);

int64_t ipow(int64_t base, int exp);

/// floor(sqrt(n)) for n >= 0.
uint64_t isqrt(uint64_t n);
u128 isqrt128(u128 n);
bool is_square(int64_t n);

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);

/// Deterministic Miller-Rabin for all 64-bit n.
bool is_prime(uint64_t n);

/// Primes <= limit, ascending.
std::vector<uint32_t> primes_up_to(uint32_t limit);

using Factorization = std::vector<std::pair<uint64_t, int>>;

/// Prime factorization, ascending primes. Trial division against a cached
/// table of primes below 10^6, then Pollard-Brent rho for what remains.
Factorization factorize(uint64_t n);

uint64_t divisor_count(uint64_t n);
uint64_t divisor_count(const Factorization& f);

/// Kronecker symbol (a | n), n > 0.
int kronecker(int64_t a, int64_t n);

/// Extended gcd: returns g = gcd(a,b) >= 0 and sets x, y with a*x + b*y = g.
int64_t ext_gcd(int64_t a, int64_t b, int64_t& x, int64_t& y);

/// Checked narrowing from 128-bit; throws std::overflow_error.
int64_t narrow(i128 v);

/// Round-half-away division helper: nearest integer to a/b, b > 0.
int64_t round_div(int64_t a, int64_t b);
int64_t floor_div(int64_t a, int64_t b);
int64_t ceil_div(int64_t a, int64_t b);

}  // namespace qforms
