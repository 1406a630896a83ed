#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qforms/form.hpp"
#include "qforms/represent.hpp"

namespace qforms {

/// d x^2 + T(y) as a sublattice of `parent`: basis columns are (v, t1, t2, t3)
/// with basis^T A basis = diag(d) + T.
struct SplitLocalCover {
  int64_t d = 0;
  QuadraticForm T;
  QuadraticForm parent;
  IntMatrix basis;
  int64_t verified_modulus = 1;

  [[nodiscard]] QuadraticForm split_form() const;
  /// parent vector for the split coordinates (x, y)
  [[nodiscard]] std::vector<int64_t> embed(int64_t x, const std::array<int64_t, 3>& y) const;
};

/// True when q and r have the same local representability at every prime
/// dividing 2 det(r) (r a sublattice of q, both quaternary). `modulus`
/// receives the product of the checked prime powers.
bool same_local_representability(const QuadraticForm& q, const QuadraticForm& r, int64_t* modulus = nullptr);

/// First d = 1, 2, ... (up to d_cap) with a norm-d vector whose orthogonal
/// split d x^2 + T locally represents what q does. Throws std::runtime_error
/// when none is found.
SplitLocalCover find_split_local_cover(const QuadraticForm& q, int64_t d_cap = 64);

enum class BitsetMode : uint8_t { Exact = 0, Approximate = 1 };

/// Bit m set => T represents m. witness[m] holds one vector reaching m when
/// witnesses were requested.
struct RepresentedBitset {
  int64_t Y = 0;
  BitsetMode mode = BitsetMode::Exact;
  uint64_t form_hash = 0;
  ValueSet bits;
  std::vector<std::array<int32_t, 3>> witness;

  [[nodiscard]] bool test(int64_t m) const { return bits.test(m); }
  [[nodiscard]] bool has_witnesses() const { return !witness.empty(); }
};

/// Per-coordinate box radii for the approximate mode, in the coordinates of
/// reduce(T): ceil(alpha sqrt(Y / lambda_i)).
std::array<int64_t, 3> default_prism(const QuadraticForm& T, int64_t Y, double alpha = 0.6);

/// Values of the ternary T up to Y. Exact mode covers the whole ellipsoid;
/// approximate mode only the box `prism` (reduced coordinates) inside it.
/// Witness vectors are given in T's own coordinates.
RepresentedBitset boolean_theta(const QuadraticForm& T, int64_t Y, BitsetMode mode,
                                std::optional<std::array<int64_t, 3>> prism = std::nullopt, bool witnesses = false);

uint64_t form_hash(const QuadraticForm& q);

/// "BTH1", u64 Y, u8 mode, u64 form hash, u64 word count, packed words (LE).
void write_bitset(const std::string& path, const RepresentedBitset& b);
RepresentedBitset read_bitset(const std::string& path);

struct Witness {
  uint64_t a;
  std::vector<int64_t> vector;  // in parent coordinates, Q(vector) = a
};

struct CheckResult {
  std::vector<Witness> represented;
  std::vector<uint64_t> unresolved;
  int64_t Y = 0;
};

struct CheckOptions {
  int attempts = 5;  // the constant c
  BitsetMode mode = BitsetMode::Approximate;
  double prism_alpha = 0.6;
  int threads = 1;
};

/// Y = ceil(2 d c sqrt(X)), X = max(numbers). For each a, tries the first c
/// values of x >= 0 with 0 <= a - d x^2 <= Y against the bitset. Every hit is
/// re-evaluated on the parent form.
CheckResult check_numbers(const SplitLocalCover& cover, const std::vector<uint64_t>& numbers,
                          const CheckOptions& options = {});

/// Exact representation test on q for each number; returns those not represented.
std::vector<uint64_t> resolve_with_full_theta(const QuadraticForm& q, const std::vector<uint64_t>& unresolved);

/// Approximate bitset, then exact bitset, then full search on the parent.
struct CheckerReport {
  CheckResult approximate;
  CheckResult exact;
  std::vector<uint64_t> exceptions;
};
CheckerReport check_with_fallback(const SplitLocalCover& cover, const std::vector<uint64_t>& numbers,
                                  const CheckOptions& options = {});

}  // namespace qforms
