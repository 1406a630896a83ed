#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "qforms/arith.hpp"
#include "qforms/matrix.hpp"

namespace qforms {

inline constexpr int kMaxDim = 8;

/// Result of basis reduction: gram = basis^T * input * basis, basis unimodular.
struct Reduction {
  IntMatrix gram;
  IntMatrix basis;
};

/// Greedy reduction of a positive definite Gram matrix: pairwise size
/// reduction plus {-1,0,1}-combination descent until no basis vector can be
/// shortened, then sort by norm and fix signs so the first nonzero entry
/// above the diagonal in each column is negative.
Reduction reduce_gram(const IntMatrix& gram);

/// Fincke-Pohst coefficients: Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2.
struct CholeskyCoeffs {
  int n = 0;
  std::array<std::array<long double, kMaxDim>, kMaxDim> q{};
  explicit CholeskyCoeffs(const IntMatrix& gram);
};

/// f(z) = constant + 2 * linear . z + z^T gram z over z in Z^n, gram positive
/// definite. Used for lattice cosets: the norms of x0 + span(B).
struct AffineForm {
  IntMatrix gram;
  std::vector<int64_t> linear;
  int64_t constant = 0;

  static AffineForm homogeneous(const IntMatrix& gram);

  [[nodiscard]] int dim() const { return gram.rows(); }
  [[nodiscard]] int64_t evaluate(std::span<const int64_t> z) const;
  /// Real minimum over R^n.
  [[nodiscard]] long double real_minimum() const;
  /// Same value set with a reduced gram and an integer recentering.
  [[nodiscard]] AffineForm normalized() const;
};

/// Approximate count of z with f(z) <= hi (ellipsoid volume).
long double estimated_points(const AffineForm& f, long double hi);

namespace detail {

template <class Emit>
bool call_emit(Emit& emit, int64_t value, const int64_t* z) {
  if constexpr (std::is_same_v<std::invoke_result_t<Emit&, int64_t, const int64_t*>, bool>) {
    return emit(value, z);
  } else {
    emit(value, z);
    return true;
  }
}

}  // namespace detail

namespace detail {

/// Walks the outer coordinates z[n-1..1] of every z with f(z) <= hi and hands
/// the innermost slice to inner(z, lin, cst, lo, up): on that slice
/// f = g00 x^2 + 2 lin x + cst for x = z[0] in [lo, up]. Returns false iff
/// inner asked to stop.
template <class Inner>
bool walk(const AffineForm& f, int64_t hi, Inner&& inner) {
  const int n = f.dim();
  CholeskyCoeffs ch(f.gram);
  // center s = G^{-1} h, solved with the Cholesky factors
  std::array<long double, kMaxDim> s{};
  {
    // G = L D L^T with L unit lower, L[j][i] = q[i][j] (j > i)
    std::array<long double, kMaxDim> y{};
    for (int i = 0; i < n; ++i) {
      long double v = static_cast<long double>(f.linear[i]);
      for (int j = 0; j < i; ++j) v -= ch.q[j][i] * y[j];
      y[i] = v;
    }
    for (int i = n - 1; i >= 0; --i) {
      long double v = y[i] / ch.q[i][i];
      for (int j = i + 1; j < n; ++j) v -= ch.q[i][j] * s[j];
      s[i] = v;
    }
  }
  long double hs = 0;
  for (int i = 0; i < n; ++i) hs += static_cast<long double>(f.linear[i]) * s[i];
  const long double mu = static_cast<long double>(f.constant) - hs;
  const long double radius = static_cast<long double>(hi) - mu;
  const long double slack = 1e-9L * (std::fabs(radius) + std::fabs(mu) + 1.0L);
  if (radius < -slack) return true;

  std::array<int64_t, kMaxDim> z{};
  std::array<long double, kMaxDim> rem{};
  std::array<int64_t, kMaxDim> upper{};

  auto center_of = [&](int i) {
    long double c = -s[i];
    for (int j = i + 1; j < n; ++j) c -= ch.q[i][j] * (static_cast<long double>(z[j]) + s[j]);
    return c;
  };

  auto slice = [&]() -> bool {
    long double c = center_of(0);
    long double r = rem[0] < 0 ? 0 : rem[0];
    long double w = std::sqrt(r / ch.q[0][0]);
    int64_t lo = static_cast<int64_t>(std::ceil(c - w - 1e-9L));
    int64_t up = static_cast<int64_t>(std::floor(c + w + 1e-9L));
    if (lo > up) return true;
    i128 lin = f.linear[0];
    for (int j = 1; j < n; ++j) lin += static_cast<i128>(f.gram(0, j)) * z[j];
    i128 cst = f.constant;
    for (int i = 1; i < n; ++i) {
      cst += 2 * static_cast<i128>(f.linear[i]) * z[i];
      i128 row = 0;
      for (int j = 1; j < n; ++j) row += static_cast<i128>(f.gram(i, j)) * z[j];
      cst += row * z[i];
    }
    return inner(z.data(), lin, cst, lo, up);
  };

  if (n == 1) {
    rem[0] = radius + slack;
    return slice();
  }

  int i = n - 1;
  rem[i] = radius + slack;
  {
    long double c = center_of(i);
    long double w = std::sqrt(std::max<long double>(rem[i], 0) / ch.q[i][i]);
    z[i] = static_cast<int64_t>(std::ceil(c - w - 1e-9L));
    upper[i] = static_cast<int64_t>(std::floor(c + w + 1e-9L));
  }
  while (true) {
    if (z[i] > upper[i]) {
      if (i == n - 1) return true;
      ++i;
      ++z[i];
      continue;
    }
    long double c = center_of(i);
    long double d = static_cast<long double>(z[i]) - c;
    long double r = rem[i] - ch.q[i][i] * d * d;
    if (i == 1) {
      rem[0] = r;
      if (r >= -slack) {
        if (!slice()) return false;
      }
      ++z[1];
      continue;
    }
    if (r < -slack) {
      ++z[i];
      continue;
    }
    --i;
    rem[i] = r;
    long double ci = center_of(i);
    long double w = std::sqrt(std::max<long double>(r, 0) / ch.q[i][i]);
    z[i] = static_cast<int64_t>(std::ceil(ci - w - 1e-9L));
    upper[i] = static_cast<int64_t>(std::floor(ci + w + 1e-9L));
  }
}

}  // namespace detail

/// Calls emit(value, z) for every z in Z^n with f(z) <= hi, in a deterministic
/// order (outer coordinates from the last index down, innermost ascending).
/// If emit returns bool, returning false stops the enumeration. Returns false
/// iff stopped early.
template <class Emit>
bool for_each_affine_value(const AffineForm& f, int64_t hi, Emit&& emit) {
  if (f.dim() == 0) {
    if (f.constant <= hi) return detail::call_emit(emit, f.constant, nullptr);
    return true;
  }
  const i128 g00 = f.gram(0, 0);
  return detail::walk(f, hi, [&](int64_t* z, i128 lin, i128 cst, int64_t lo, int64_t up) {
    i128 val = g00 * lo * lo + 2 * lin * lo + cst;
    for (int64_t x = lo; x <= up; ++x) {
      if (val <= hi) {
        z[0] = x;
        if (!detail::call_emit(emit, static_cast<int64_t>(val), z)) return false;
      }
      val += g00 * (2 * x + 1) + 2 * lin;
    }
    return true;
  });
}

/// Calls emit(z) for every z with f(z) == target. Only the outer coordinates
/// are enumerated; the innermost one is solved exactly. emit may return bool
/// to stop early. Returns false iff stopped early.
template <class Emit>
bool for_each_affine_solution(const AffineForm& f, int64_t target, Emit&& emit) {
  auto call = [&](const int64_t* z) {
    if constexpr (std::is_same_v<std::invoke_result_t<Emit&, const int64_t*>, bool>) {
      return emit(z);
    } else {
      emit(z);
      return true;
    }
  };
  if (f.dim() == 0) return f.constant == target ? call(nullptr) : true;
  const i128 g00 = f.gram(0, 0);
  return detail::walk(f, target, [&](int64_t* z, i128 lin, i128 cst, int64_t, int64_t) {
    // g00 x^2 + 2 lin x + (cst - target) = 0
    i128 disc = lin * lin - g00 * (cst - target);
    if (disc < 0) return true;
    u128 r = isqrt128(static_cast<u128>(disc));
    if (static_cast<i128>(r * r) != disc) return true;
    const i128 roots[2] = {-lin - static_cast<i128>(r), -lin + static_cast<i128>(r)};
    for (int k = 0; k < (r == 0 ? 1 : 2); ++k) {
      if (roots[k] % g00 != 0) continue;
      i128 x = roots[k] / g00;
      z[0] = static_cast<int64_t>(x);
      if (!call(z)) return false;
    }
    return true;
  });
}

/// Calls emit(value, x) for every x with x^T gram x <= bound.
template <class Emit>
bool for_each_vector(const IntMatrix& gram, int64_t bound, Emit&& emit) {
  return for_each_affine_value(AffineForm::homogeneous(gram), bound, std::forward<Emit>(emit));
}

}  // namespace qforms
