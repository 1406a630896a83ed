#include "qforms/represent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qforms {

ValueSet::ValueSet(int64_t lo, int64_t hi) : lo_(lo), hi_(hi) {
  if (hi >= lo) words_.assign(static_cast<size_t>((hi - lo) / 64 + 1), 0);
}

void ValueSet::or_shifted(const ValueSet& other, int64_t shift) {
  if (empty_range() || other.empty_range()) return;
  const int64_t from = std::max(lo_, other.lo_ + shift);
  const int64_t to = std::min(hi_, other.hi_ + shift);
  if (from > to) return;
  const int64_t delta = other.lo_ + shift - lo_;  // dst index = src index + delta
  const size_t nd = words_.size();
  const size_t ns = other.words_.size();
  if (delta >= 0) {
    const size_t ws = static_cast<size_t>(delta >> 6);
    const unsigned bs = static_cast<unsigned>(delta & 63);
    for (size_t w = 0; w < ns && w + ws < nd; ++w) {
      uint64_t src = other.words_[w];
      if (src == 0) continue;
      words_[w + ws] |= src << bs;
      if (bs != 0 && w + ws + 1 < nd) words_[w + ws + 1] |= src >> (64 - bs);
    }
  } else {
    const int64_t nd_off = -delta;
    const size_t ws = static_cast<size_t>(nd_off >> 6);
    const unsigned bs = static_cast<unsigned>(nd_off & 63);
    for (size_t w = 0; w < nd && w + ws < ns; ++w) {
      uint64_t v = other.words_[w + ws] >> bs;
      if (bs != 0 && w + ws + 1 < ns) v |= other.words_[w + ws + 1] << (64 - bs);
      words_[w] |= v;
    }
  }
  // keep bits above hi cleared
  const uint64_t used = static_cast<uint64_t>(hi_ - lo_) + 1;
  if (used % 64 != 0) words_.back() &= (uint64_t{1} << (used % 64)) - 1;
}

size_t ValueSet::count() const {
  size_t c = 0;
  for (uint64_t w : words_) c += static_cast<size_t>(std::popcount(w));
  return c;
}

namespace {

int64_t lower_value_bound(const AffineForm& f) {
  long double m = f.real_minimum();
  return static_cast<int64_t>(std::floor(m - 1e-6L * (std::fabs(m) + 1.0L))) - 1;
}

ValueSet direct_values(const AffineForm& f, int64_t hi) {
  ValueSet out(lower_value_bound(f), hi);
  if (out.empty_range()) return out;
  for_each_affine_value(f, hi, [&](int64_t v, const int64_t*) { out.set(v); });
  return out;
}

ValueSet split_values(const AffineForm& f, int64_t hi) {
  const int n = f.dim();
  ValueSet out(lower_value_bound(f), hi);
  if (out.empty_range()) return out;
  const int64_t d = f.gram(0, 0);
  std::vector<int64_t> w = f.gram.column(0);
  int64_t g = 0;
  IntMatrix u = kernel_completion(w, g);
  IntMatrix k(n, n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 1; j < n; ++j) k(i, j - 1) = u(i, j);
  const IntMatrix kg = congruence(f.gram, k);
  const int64_t h0 = f.linear[0];
  for (int64_t r = 0; r < d / g; ++r) {
    std::vector<int64_t> a(n);
    for (int i = 0; i < n; ++i) a[i] = narrow(static_cast<i128>(r) * u(i, 0));
    const i128 base = f.evaluate(a);
    const i128 slope = static_cast<i128>(r) * g + h0;  // A_r(k) = base + 2 k slope + d k^2
    // B_r(y) = 2 (K^T (G a + h)) . y + y^T (K^T G K) y
    AffineForm b;
    b.gram = kg;
    b.constant = 0;
    b.linear.assign(n - 1, 0);
    std::vector<i128> gah(n);
    for (int i = 0; i < n; ++i) {
      i128 s = f.linear[i];
      for (int j = 0; j < n; ++j) s += static_cast<i128>(f.gram(i, j)) * a[j];
      gah[i] = s;
    }
    for (int j = 0; j < n - 1; ++j) {
      i128 s = 0;
      for (int i = 0; i < n; ++i) s += static_cast<i128>(k(i, j)) * gah[i];
      b.linear[j] = narrow(s);
    }
    // integer minimum of A_r
    auto a_at = [&](i128 kk) { return base + 2 * kk * slope + static_cast<i128>(d) * kk * kk; };
    long double kstar = -static_cast<long double>(slope) / static_cast<long double>(d);
    i128 k0 = static_cast<i128>(std::floor(kstar));
    i128 amin = std::min(a_at(k0), a_at(k0 + 1));
    if (amin + lower_value_bound(b) > hi) continue;
    ValueSet bs = affine_values(b, narrow(hi - amin));
    if (bs.empty_range()) continue;
    // all k with A_r(k) + bs.lo <= hi
    const i128 room = hi - static_cast<i128>(bs.lo());
    long double disc = static_cast<long double>(slope) * slope - static_cast<long double>(d) * static_cast<long double>(base - room);
    if (disc < 0) disc = 0;
    long double sq = std::sqrt(disc);
    i128 klo = static_cast<i128>(std::floor((-static_cast<long double>(slope) - sq) / d)) - 1;
    i128 khi = static_cast<i128>(std::ceil((-static_cast<long double>(slope) + sq) / d)) + 1;
    for (i128 kk = klo; kk <= khi; ++kk) {
      i128 av = a_at(kk);
      if (av + bs.lo() > hi) continue;
      out.or_shifted(bs, narrow(av));
    }
  }
  return out;
}

}  // namespace

ValueSet affine_values(const AffineForm& f, int64_t hi) {
  if (f.dim() == 0) {
    ValueSet out(f.constant, hi);
    out.set(f.constant);
    return out;
  }
  AffineForm g = f.normalized();
  if (g.dim() <= 2) return direct_values(g, hi);
  return split_values(g, hi);
}

ValueSet represented_values(const QuadraticForm& q, int64_t bound) {
  ValueSet out(0, bound);
  if (bound < 0) return out;
  ValueSet all = affine_values(AffineForm::homogeneous(q.gram()), bound);
  out.or_shifted(all, 0);
  return out;
}

std::vector<int64_t> theta_coefficients(const QuadraticForm& q, int64_t bound, long double point_cap) {
  if (bound < 0) throw std::invalid_argument("negative theta bound");
  std::vector<int64_t> r(static_cast<size_t>(bound) + 1, 0);
  if (q.dim() == 0) {
    r[0] = 1;
    return r;
  }
  AffineForm f = AffineForm::homogeneous(reduce(q).form.gram());
  if (estimated_points(f, static_cast<long double>(bound)) > point_cap)
    throw ResourceLimit("theta enumeration exceeds the point cap");
  for_each_affine_value(f, bound, [&](int64_t v, const int64_t*) { ++r[v]; });
  return r;
}

std::optional<std::vector<int64_t>> find_representation(const QuadraticForm& q, int64_t m) {
  const int n = q.dim();
  if (m < 0) return std::nullopt;
  if (m == 0) return std::vector<int64_t>(n, 0);
  if (n == 0) return std::nullopt;
  ReducedForm red = reduce(q);
  std::optional<std::vector<int64_t>> found;
  for_each_affine_solution(AffineForm::homogeneous(red.form.gram()), m, [&](const int64_t* z) {
    std::vector<int64_t> x(n, 0);
    for (int i = 0; i < n; ++i) {
      i128 s = 0;
      for (int j = 0; j < n; ++j) s += static_cast<i128>(red.basis(i, j)) * z[j];
      x[i] = narrow(s);
    }
    found = std::move(x);
    return false;
  });
  return found;
}

bool is_represented(const QuadraticForm& q, int64_t m) { return find_representation(q, m).has_value(); }

std::optional<int64_t> truant(const QuadraticForm& q, const ExceptionTarget& s, int64_t cap) {
  int64_t y = std::min<int64_t>(64, cap);
  while (true) {
    ValueSet vs = represented_values(q, y);
    for (int64_t n = 1; n <= y; ++n)
      if (!vs.test(n) && !s.contains(n)) return n;
    if (y >= cap) return std::nullopt;
    y = std::min(2 * y, cap);
  }
}

std::vector<int64_t> exceptions_up_to(const QuadraticForm& q, int64_t bound) {
  std::vector<int64_t> out;
  ValueSet vs = represented_values(q, bound);
  for (int64_t n = 1; n <= bound; ++n)
    if (!vs.test(n)) out.push_back(n);
  return out;
}

}  // namespace qforms
