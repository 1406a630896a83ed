#include "qforms/lattice.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace qforms {

namespace {

int64_t norm_of_combo(const IntMatrix& g, int j, std::span<const int> c) {
  const int n = g.rows();
  i128 v = g(j, j);
  for (int i = 0; i < n; ++i) {
    if (c[i] == 0) continue;
    v += 2 * static_cast<i128>(c[i]) * g(i, j);
    for (int k = 0; k < n; ++k)
      if (c[k] != 0) v += static_cast<i128>(c[i]) * c[k] * g(i, k);
  }
  return narrow(v);
}

}  // namespace

Reduction reduce_gram(const IntMatrix& gram) {
  const int n = gram.rows();
  if (n > kMaxDim) throw std::invalid_argument("dimension too large for reduction");
  IntMatrix u = IntMatrix::identity(n);
  IntMatrix g = gram;
  bool changed = true;
  int guard = 0;
  while (changed) {
    if (++guard > 10000) throw std::runtime_error("reduction did not terminate");
    changed = false;
    // size reduction
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (i == j || g(i, i) == 0) continue;
        int64_t q = round_div(g(i, j), g(i, i));
        if (q == 0) continue;
        i128 nn = static_cast<i128>(g(j, j)) - 2 * static_cast<i128>(q) * g(i, j) +
                  static_cast<i128>(q) * q * g(i, i);
        if (nn < g(j, j)) {
          u.add_column(j, i, -q);
          g = congruence(gram, u);
          changed = true;
        }
      }
    }
    if (changed) continue;
    // {-1,0,1} combinations of the other vectors
    if (n >= 3) {
      std::vector<int> c(n, 0);
      for (int j = 0; j < n && !changed; ++j) {
        int64_t best = g(j, j);
        std::vector<int> best_c;
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
          if (i != j) idx.push_back(i);
        int total = 1;
        for (size_t k = 0; k < idx.size(); ++k) total *= 3;
        for (int code = 1; code < total; ++code) {
          int t = code;
          std::fill(c.begin(), c.end(), 0);
          for (int i : idx) {
            c[i] = t % 3 - 1;
            t /= 3;
          }
          int64_t v = norm_of_combo(g, j, c);
          if (v < best) {
            best = v;
            best_c = c;
          }
        }
        if (!best_c.empty()) {
          for (int i = 0; i < n; ++i)
            if (best_c[i] != 0) u.add_column(j, i, best_c[i]);
          g = congruence(gram, u);
          changed = true;
        }
      }
    }
  }
  // sort by norm (stable)
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g(a, a) < g(b, b); });
  IntMatrix perm(n, n);
  for (int k = 0; k < n; ++k) perm(order[k], k) = 1;
  u = u * perm;
  g = congruence(gram, u);
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (g(i, j) == 0) continue;
      if (g(i, j) > 0) {
        u.negate_column(j);
        g = congruence(gram, u);
      }
      break;
    }
  }
  return {g, u};
}

CholeskyCoeffs::CholeskyCoeffs(const IntMatrix& gram) : n(gram.rows()) {
  if (n > kMaxDim) throw std::invalid_argument("dimension too large for enumeration");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q[i][j] = static_cast<long double>(gram(i, j));
  for (int i = 0; i < n; ++i) {
    if (q[i][i] <= 0) throw std::invalid_argument("form is not positive definite");
    for (int j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] = q[i][j] / q[i][i];
    }
    for (int k = i + 1; k < n; ++k)
      for (int l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
}

AffineForm AffineForm::homogeneous(const IntMatrix& gram) {
  AffineForm f;
  f.gram = gram;
  f.linear.assign(gram.rows(), 0);
  return f;
}

int64_t AffineForm::evaluate(std::span<const int64_t> z) const {
  const int n = dim();
  i128 v = constant;
  for (int i = 0; i < n; ++i) {
    v += 2 * static_cast<i128>(linear[i]) * z[i];
    for (int j = 0; j < n; ++j) v += static_cast<i128>(z[i]) * gram(i, j) * z[j];
  }
  return narrow(v);
}

long double AffineForm::real_minimum() const {
  const int n = dim();
  if (n == 0) return static_cast<long double>(constant);
  CholeskyCoeffs ch(gram);
  std::array<long double, kMaxDim> y{};
  std::array<long double, kMaxDim> s{};
  for (int i = 0; i < n; ++i) {
    long double v = static_cast<long double>(linear[i]);
    for (int j = 0; j < i; ++j) v -= ch.q[j][i] * y[j];
    y[i] = v;
  }
  for (int i = n - 1; i >= 0; --i) {
    long double v = y[i] / ch.q[i][i];
    for (int j = i + 1; j < n; ++j) v -= ch.q[i][j] * s[j];
    s[i] = v;
  }
  long double hs = 0;
  for (int i = 0; i < n; ++i) hs += static_cast<long double>(linear[i]) * s[i];
  return static_cast<long double>(constant) - hs;
}

AffineForm AffineForm::normalized() const {
  const int n = dim();
  if (n == 0) return *this;
  Reduction r = reduce_gram(gram);
  // z = U z'  =>  f = c + 2 (U^T h) z' + z'^T G' z'
  AffineForm g;
  g.gram = r.gram;
  g.constant = constant;
  g.linear.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    i128 s = 0;
    for (int i = 0; i < n; ++i) s += static_cast<i128>(r.basis(i, j)) * linear[i];
    g.linear[j] = narrow(s);
  }
  // recenter: z' = t + w with t the rounded real minimizer -G'^{-1} h'
  CholeskyCoeffs ch(g.gram);
  std::array<long double, kMaxDim> y{};
  std::array<long double, kMaxDim> s{};
  for (int i = 0; i < n; ++i) {
    long double v = static_cast<long double>(g.linear[i]);
    for (int j = 0; j < i; ++j) v -= ch.q[j][i] * y[j];
    y[i] = v;
  }
  for (int i = n - 1; i >= 0; --i) {
    long double v = y[i] / ch.q[i][i];
    for (int j = i + 1; j < n; ++j) v -= ch.q[i][j] * s[j];
    s[i] = v;
  }
  std::vector<int64_t> t(n);
  for (int i = 0; i < n; ++i) t[i] = static_cast<int64_t>(std::llround(-s[i]));
  AffineForm out;
  out.gram = g.gram;
  out.constant = g.evaluate(t);
  out.linear.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    i128 v = g.linear[i];
    for (int j = 0; j < n; ++j) v += static_cast<i128>(g.gram(i, j)) * t[j];
    out.linear[i] = narrow(v);
  }
  return out;
}

long double estimated_points(const AffineForm& f, long double hi) {
  const int n = f.dim();
  long double r = hi - f.real_minimum();
  if (r < 0) return 0;
  if (n == 0) return 1;
  // volume of the unit n-ball
  long double vol = std::pow(std::numbers::pi_v<long double>, n / 2.0L) / std::tgamma(n / 2.0L + 1.0L);
  long double det = static_cast<long double>(f.gram.determinant());
  return vol * std::pow(r, n / 2.0L) / std::sqrt(det);
}

}  // namespace qforms
