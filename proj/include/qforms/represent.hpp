#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qforms/form.hpp"
#include "qforms/lattice.hpp"

namespace qforms {

/// Bit set over the integer interval [lo, hi].
class ValueSet {
 public:
  ValueSet() = default;
  ValueSet(int64_t lo, int64_t hi);

  [[nodiscard]] int64_t lo() const { return lo_; }
  [[nodiscard]] int64_t hi() const { return hi_; }
  [[nodiscard]] bool empty_range() const { return hi_ < lo_; }
  [[nodiscard]] bool test(int64_t v) const {
    if (v < lo_ || v > hi_) return false;
    uint64_t k = static_cast<uint64_t>(v - lo_);
    return (words_[k >> 6] >> (k & 63)) & 1U;
  }
  void set(int64_t v) {
    if (v < lo_ || v > hi_) return;
    uint64_t k = static_cast<uint64_t>(v - lo_);
    words_[k >> 6] |= uint64_t{1} << (k & 63);
  }
  /// this |= (other shifted by +shift), clipped to [lo, hi].
  void or_shifted(const ValueSet& other, int64_t shift);
  [[nodiscard]] size_t count() const;
  [[nodiscard]] const std::vector<uint64_t>& words() const { return words_; }
  std::vector<uint64_t>& words() { return words_; }

 private:
  int64_t lo_ = 0;
  int64_t hi_ = -1;
  std::vector<uint64_t> words_;
};

/// Exact set of values f(z) <= hi (and >= floor of the real minimum). Uses a
/// coset splitting f = A_r(k) + B_r(y) along the shortest basis vector, so
/// the cost is roughly index * hi^{(n-1)/2} * hi / 64 rather than hi^{n/2}.
ValueSet affine_values(const AffineForm& f, int64_t hi);

/// Values of Q in [0, bound], exact.
ValueSet represented_values(const QuadraticForm& q, int64_t bound);

/// r_Q(0..bound) by ellipsoid enumeration. Throws ResourceLimit when the
/// estimated number of lattice points exceeds point_cap.
std::vector<int64_t> theta_coefficients(const QuadraticForm& q, int64_t bound, long double point_cap = 5e9L);

/// Some x with Q(x) = m, found with an early exit.
std::optional<std::vector<int64_t>> find_representation(const QuadraticForm& q, int64_t m);
bool is_represented(const QuadraticForm& q, int64_t m);

inline constexpr int64_t kDefaultTruantCap = 10000;

/// Least n >= 1 outside S not represented by Q, or nullopt if every n <= cap
/// outside S is represented.
std::optional<int64_t> truant(const QuadraticForm& q, const ExceptionTarget& s, int64_t cap = kDefaultTruantCap);

/// All n in [1, bound] not represented by Q.
std::vector<int64_t> exceptions_up_to(const QuadraticForm& q, int64_t bound);

}  // namespace qforms
