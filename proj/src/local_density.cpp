#include "qforms/local_density.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace qforms {

namespace {

int rational_valuation(const Rational& r, uint64_t p) {
  if (r.num() == 0) throw std::invalid_argument("valuation of zero");
  return valuation(r.num(), static_cast<int64_t>(p)) - valuation(r.den(), static_cast<int64_t>(p));
}

i128 ipow128(uint64_t p, int e) {
  i128 r = 1;
  for (int i = 0; i < e; ++i) {
    if (__builtin_mul_overflow(r, static_cast<i128>(p), &r)) throw std::overflow_error("power overflow");
  }
  return r;
}

// p-unit rational a/b -> integer a*b in the same square class
int64_t unit_to_integer(const Rational& u) { return narrow(u.num() * u.den()); }

int64_t pos_mod(i128 a, int64_t m) {
  i128 r = a % m;
  return static_cast<int64_t>(r < 0 ? r + m : r);
}

}  // namespace

i128 JordanBlock::value(const int64_t* x) const {
  if (dim == 1) return static_cast<i128>(a) * x[0] * x[0];
  return static_cast<i128>(a) * x[0] * x[0] + static_cast<i128>(b) * x[0] * x[1] + static_cast<i128>(c) * x[1] * x[1];
}

std::string JordanBlock::str() const {
  std::ostringstream os;
  os << "scale " << scale << ": ";
  if (dim == 1)
    os << a << "x^2";
  else
    os << a << "x^2+" << b << "xy+" << c << "y^2";
  return os.str();
}

int JordanDecomposition::dim() const {
  int n = 0;
  for (const auto& b : blocks) n += b.dim;
  return n;
}

int JordanDecomposition::s0() const {
  int n = 0;
  for (const auto& b : blocks) n += b.scale == 0 ? b.dim : 0;
  return n;
}

int JordanDecomposition::s1() const {
  int n = 0;
  for (const auto& b : blocks) n += b.scale == 1 ? b.dim : 0;
  return n;
}

int JordanDecomposition::s2() const {
  int n = 0;
  for (const auto& b : blocks) n += b.scale >= 2 ? b.dim : 0;
  return n;
}

IntMatrix JordanDecomposition::doubled_gram() const {
  const int n = dim();
  IntMatrix g(n, n);
  int at = 0;
  for (const auto& b : blocks) {
    int64_t s = narrow(ipow128(p, b.scale));
    if (b.dim == 1) {
      g(at, at) = narrow(static_cast<i128>(2) * s * b.a);
    } else {
      g(at, at) = narrow(static_cast<i128>(2) * s * b.a);
      g(at + 1, at + 1) = narrow(static_cast<i128>(2) * s * b.c);
      g(at, at + 1) = g(at + 1, at) = narrow(static_cast<i128>(s) * b.b);
    }
    at += b.dim;
  }
  return g;
}

i128 JordanDecomposition::value(const int64_t* x) const {
  i128 v = 0;
  int at = 0;
  for (const auto& b : blocks) {
    v += ipow128(p, b.scale) * b.value(x + at);
    at += b.dim;
  }
  return v;
}

JordanDecomposition jordan_decompose(const QuadraticForm& q, uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("jordan_decompose needs a prime");
  const int n = q.dim();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = Rational(q.entry(i, j));
  // e_k -= c e_i
  auto subtract = [&](int k, int i, const Rational& c) {
    for (int r = 0; r < n; ++r) m[r][k] -= c * m[r][i];
    for (int r = 0; r < n; ++r) m[k][r] -= c * m[i][r];
  };
  std::vector<int> rest(n);
  for (int i = 0; i < n; ++i) rest[i] = i;
  JordanDecomposition out;
  out.p = p;
  while (!rest.empty()) {
    int bi = -1, bj = -1, bv = 0;
    bool diag_min = false;
    for (size_t x = 0; x < rest.size(); ++x) {
      for (size_t y = x; y < rest.size(); ++y) {
        const Rational& e = m[rest[x]][rest[y]];
        if (e.num() == 0) continue;
        int v = rational_valuation(e, p);
        bool diag = x == y;
        if (bi < 0 || v < bv || (v == bv && diag && !diag_min)) {
          bi = rest[x];
          bj = rest[y];
          bv = v;
          diag_min = diag;
        }
      }
    }
    if (bi < 0) throw std::invalid_argument("degenerate form in Jordan decomposition");
    if (!diag_min && p != 2) {
      // e_i += e_j makes the diagonal entry reach the minimal valuation
      for (int r = 0; r < n; ++r) m[r][bi] += m[r][bj];
      for (int r = 0; r < n; ++r) m[bi][r] += m[bj][r];
      diag_min = true;
    }
    if (diag_min) {
      const int i = bi;
      for (int k : rest)
        if (k != i && m[k][i].num() != 0) subtract(k, i, m[k][i] / m[i][i]);
      int v = rational_valuation(m[i][i], p);
      Rational unit = m[i][i] / rational_pow(static_cast<int64_t>(p), v);
      out.blocks.push_back({v, 1, unit_to_integer(unit), 0, 0});
      rest.erase(std::find(rest.begin(), rest.end(), i));
    } else {
      const int i = bi, j = bj;
      Rational det = m[i][i] * m[j][j] - m[i][j] * m[i][j];
      for (int k : rest) {
        if (k == i || k == j) continue;
        // solve B (ci, cj) = (m_ik, m_jk)
        Rational ci = (m[j][j] * m[i][k] - m[i][j] * m[j][k]) / det;
        Rational cj = (m[i][i] * m[j][k] - m[i][j] * m[i][k]) / det;
        if (ci.num() != 0) subtract(k, i, ci);
        if (cj.num() != 0) subtract(k, j, cj);
      }
      int w = rational_valuation(m[i][j], 2);
      Rational alpha = m[i][i] / rational_pow(2, w + 1);
      Rational beta = m[i][j] / rational_pow(2, w);
      Rational gamma = m[j][j] / rational_pow(2, w + 1);
      i128 d = alpha.den();
      for (const Rational* r : {&beta, &gamma}) d = d / std::__gcd(d, r->den()) * r->den();
      Rational d2(d * d, 1);
      JordanBlock blk;
      blk.scale = w + 1;
      blk.dim = 2;
      blk.a = narrow((alpha * d2).num());
      blk.b = narrow((beta * d2).num());
      blk.c = narrow((gamma * d2).num());
      out.blocks.push_back(blk);
      rest.erase(std::find(rest.begin(), rest.end(), i));
      rest.erase(std::find(rest.begin(), rest.end(), j));
    }
  }
  std::stable_sort(out.blocks.begin(), out.blocks.end(),
                   [](const JordanBlock& x, const JordanBlock& y) { return x.scale < y.scale; });
  return out;
}

std::vector<int64_t> count_mod_histogram(const QuadraticForm& q, uint64_t p, int v, double cap) {
  const int n = q.dim();
  const i128 big = ipow128(p, v);
  if (big > (i128{1} << 24)) throw ResourceLimit("modulus too large for brute-force counting");
  const int64_t P = static_cast<int64_t>(big);
  double work = 1;
  for (int i = 1; i < n; ++i) work *= static_cast<double>(P);
  work += static_cast<double>(P) * static_cast<double>(P);
  if (work > cap) throw ResourceLimit("count_mod exceeds the work cap");
  std::vector<int64_t> hist(P, 0);
  if (n == 0) {
    hist[0] = 1;
    return hist;
  }
  auto md = [&](i128 a) { return pos_mod(a, P); };
  const int64_t g00 = md(q.entry(0, 0));
  if (n == 1) {
    for (int64_t x = 0; x < P; ++x) ++hist[md(static_cast<i128>(g00) * x % P * x)];
    return hist;
  }
  // Q = g00 x0^2 + 2 x0 L(x') + Q'(x')
  std::vector<int64_t> t(static_cast<size_t>(P) * P, 0);  // t[L * P + r]
  for (int64_t l = 0; l < P; ++l) {
    int64_t* row = &t[static_cast<size_t>(l) * P];
    for (int64_t x = 0; x < P; ++x) ++row[md(static_cast<i128>(x) * (static_cast<i128>(g00) * x + 2 * l))];
  }
  std::vector<int64_t> cnt(static_cast<size_t>(P) * P, 0);  // cnt[L * P + c]
  const int m = n - 1;  // coordinates x1..x_{n-1}
  std::vector<int64_t> xs(m, 0);
  const int last = m - 1;  // index into xs of coordinate n-1
  const int64_t g_ll = md(q.entry(n - 1, n - 1));
  const int64_t g_0l = md(q.entry(0, n - 1));
  while (true) {
    // with the last coordinate at 0, compute L, Q' and the linear coefficient of x_last
    i128 l0 = 0, q0 = 0, lin = 0;
    for (int i = 0; i < last; ++i) {
      l0 += static_cast<i128>(q.entry(0, i + 1)) * xs[i];
      lin += static_cast<i128>(q.entry(n - 1, i + 1)) * xs[i];
      for (int j = 0; j < last; ++j) q0 += static_cast<i128>(q.entry(i + 1, j + 1)) * xs[i] * xs[j];
    }
    int64_t l = md(l0), qv = md(q0);
    const int64_t step0 = md(2 * lin + g_ll);  // Q'(y+1) - Q'(y) = 2 lin + g_ll (2y + 1)
    int64_t step = step0;
    const int64_t step_inc = md(2 * static_cast<i128>(g_ll));
    for (int64_t y = 0; y < P; ++y) {
      ++cnt[static_cast<size_t>(l) * P + qv];
      qv += step;
      if (qv >= P) qv -= P;
      step += step_inc;
      if (step >= P) step -= P;
      l += g_0l;
      if (l >= P) l -= P;
    }
    int i = 0;
    while (i < last && xs[i] == P - 1) xs[i++] = 0;
    if (i == last) break;
    ++xs[i];
  }
  for (int64_t l = 0; l < P; ++l) {
    const int64_t* c = &cnt[static_cast<size_t>(l) * P];
    const int64_t* row = &t[static_cast<size_t>(l) * P];
    for (int64_t cv = 0; cv < P; ++cv) {
      if (c[cv] == 0) continue;
      const int64_t k = c[cv];
      for (int64_t r = 0; r < P; ++r) {
        int64_t target = r + cv;
        if (target >= P) target -= P;
        hist[target] += k * row[r];
      }
    }
  }
  return hist;
}

int64_t count_mod(const QuadraticForm& q, uint64_t p, int v, int64_t m, double cap) {
  auto hist = count_mod_histogram(q, p, v, cap);
  return hist[pos_mod(m, static_cast<int64_t>(hist.size()))];
}

int64_t count_mod_typed(const JordanDecomposition& j, int v, int64_t m, SolutionType type, double cap) {
  const int n = j.dim();
  const i128 big = ipow128(j.p, v);
  double work = 1;
  for (int i = 0; i < n; ++i) work *= static_cast<double>(big);
  if (work > cap) throw ResourceLimit("typed count exceeds the work cap");
  const int64_t P = static_cast<int64_t>(big);
  const int64_t p = static_cast<int64_t>(j.p);
  std::vector<bool> unimodular_coord(n, false);
  int at = 0;
  for (const auto& b : j.blocks) {
    for (int k = 0; k < b.dim; ++k) unimodular_coord[at + k] = b.scale == 0;
    at += b.dim;
  }
  std::vector<int64_t> x(n, 0);
  int64_t count = 0;
  const int64_t target = pos_mod(m, P);
  while (true) {
    if (pos_mod(j.value(x.data()), P) == target) {
      bool zero = true, good = false;
      for (int i = 0; i < n; ++i) {
        if (x[i] % p != 0) {
          zero = false;
          if (unimodular_coord[i]) good = true;
        }
      }
      bool keep = type == SolutionType::All || (type == SolutionType::Zero && zero) ||
                  (type == SolutionType::Good && good) || (type == SolutionType::Bad && !zero && !good);
      if (keep) ++count;
    }
    int i = 0;
    while (i < n && x[i] == P - 1) x[i++] = 0;
    if (i == n) break;
    ++x[i];
  }
  return count;
}

int stable_level(uint64_t p, int64_t m) {
  if (m == 0) throw std::invalid_argument("stable level of zero");
  return valuation(m, static_cast<int64_t>(p)) + (p == 2 ? 3 : 1);
}

namespace {

using BlockMask = std::vector<bool>;

// distribution of p^scale Q_j(x) mod P over x mod P, optionally with x = 0 mod p
std::vector<int64_t> block_distribution(const JordanBlock& b, uint64_t p, int k, bool restricted) {
  const int64_t P = static_cast<int64_t>(ipow128(p, k));
  std::vector<int64_t> dist(P, 0);
  const int64_t step = restricted ? static_cast<int64_t>(p) : 1;
  if (b.scale >= k) {
    int64_t n = P / step;
    dist[0] = b.dim == 1 ? n : n * n;
    return dist;
  }
  const i128 s = ipow128(p, b.scale);
  if (b.dim == 1) {
    for (int64_t x = 0; x < P; x += step) ++dist[pos_mod(s * b.a * x % P * x, P)];
  } else {
    for (int64_t x = 0; x < P; x += step)
      for (int64_t y = 0; y < P; y += step) {
        int64_t xy[2] = {x, y};
        ++dist[pos_mod(s * b.value(xy), P)];
      }
  }
  return dist;
}

std::vector<int64_t> convolve(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
  const size_t P = a.size();
  std::vector<int64_t> out(P, 0);
  for (size_t i = 0; i < P; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < P; ++j) {
      if (b[j] == 0) continue;
      size_t t = i + j;
      if (t >= P) t -= P;
      out[t] += a[i] * b[j];
    }
  }
  return out;
}

// #{x mod p^k : f(x) = m, x_j = 0 mod p for blocks in zero_set}
int64_t restricted_count(const JordanDecomposition& f, int k, int64_t m, const BlockMask& zero_set) {
  const int64_t P = static_cast<int64_t>(ipow128(f.p, k));
  std::vector<int64_t> acc(P, 0);
  acc[0] = 1;
  for (size_t i = 0; i < f.blocks.size(); ++i)
    acc = convolve(acc, block_distribution(f.blocks[i], f.p, k, zero_set[i]));
  return acc[pos_mod(m, P)];
}

BlockMask scale_mask(const JordanDecomposition& f, int lo, int hi) {
  BlockMask mask(f.blocks.size());
  for (size_t i = 0; i < f.blocks.size(); ++i) mask[i] = f.blocks[i].scale >= lo && f.blocks[i].scale <= hi;
  return mask;
}

bool any_of(const BlockMask& m) { return std::find(m.begin(), m.end(), true) != m.end(); }

BlockMask mask_or(const BlockMask& a, const BlockMask& b) {
  BlockMask r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] || b[i];
  return r;
}

// Good-type density: x_{S0} != 0 mod p, and x_{nz} != 0 mod p if nz is given.
Rational good_density(const JordanDecomposition& f, int64_t m, const BlockMask* nz) {
  const int k = f.p == 2 ? 3 : 1;
  const int n = f.dim();
  BlockMask s0 = scale_mask(f, 0, 0);
  if (!any_of(s0)) return Rational(0);
  BlockMask none(f.blocks.size(), false);
  i128 total = restricted_count(f, k, m, none) - restricted_count(f, k, m, s0);
  if (nz) total += restricted_count(f, k, m, mask_or(s0, *nz)) - restricted_count(f, k, m, *nz);
  return Rational(total, 1) / rational_pow(static_cast<int64_t>(f.p), k * (n - 1));
}

JordanDecomposition shifted(const JordanDecomposition& f, const std::function<int(int)>& shift) {
  JordanDecomposition g = f;
  for (auto& b : g.blocks) b.scale = shift(b.scale);
  return g;
}

Rational density_rec(const JordanDecomposition& f, int64_t m, const BlockMask* nz, DensityBreakdown* bd) {
  const int64_t p = static_cast<int64_t>(f.p);
  const int n = f.dim();
  const int s0 = f.s0(), s1 = f.s1(), s2 = f.s2();
  Rational good = good_density(f, m, nz);
  Rational zero(0), bad(0);
  if (!nz && m % (p * p) == 0) zero = rational_pow(p, 2 - n) * density_rec(f, m / (p * p), nullptr, nullptr);
  if (m % p == 0 && s1 > 0) {
    JordanDecomposition f1 = shifted(f, [](int s) { return s == 0 ? 1 : s - 1; });
    BlockMask nz1;
    bool skip = false;
    if (nz) {
      nz1 = *nz;
      for (size_t i = 0; i < nz1.size(); ++i)
        if (f.blocks[i].scale == 0) nz1[i] = false;
      skip = !any_of(nz1);
    }
    if (!skip) bad += rational_pow(p, s1 + s2 - (n - 1)) * good_density(f1, m / p, nz ? &nz1 : nullptr);
  }
  if (m % (p * p) == 0 && s2 > 0) {
    JordanDecomposition f2 = shifted(f, [](int s) { return s >= 2 ? s - 2 : s; });
    BlockMask nz2 = scale_mask(f, 2, 1 << 30);
    if (nz)
      for (size_t i = 0; i < nz2.size(); ++i) nz2[i] = nz2[i] && (*nz)[i];
    if (any_of(nz2)) bad += rational_pow(p, s0 + s1 + 2 * s2 - 2 * (n - 1)) * density_rec(f2, m / (p * p), &nz2, nullptr);
  }
  if (bd) *bd = {good, zero, bad};
  return good + zero + bad;
}

}  // namespace

Rational local_density(const JordanDecomposition& j, int64_t m, DensityBreakdown* breakdown) {
  if (m <= 0) throw std::invalid_argument("local density needs m >= 1");
  return density_rec(j, m, nullptr, breakdown);
}

Rational local_density(const QuadraticForm& q, uint64_t p, int64_t m, DensityBreakdown* breakdown) {
  return local_density(jordan_decompose(q, p), m, breakdown);
}

Rational unimodular_density(const QuadraticForm& q, uint64_t p, int64_t m) {
  if (q.dim() != 4 || p == 2 || q.determinant() % static_cast<int64_t>(p) == 0)
    throw std::invalid_argument("closed form needs a quaternary form and an odd prime not dividing D");
  const int chi = kronecker(q.determinant(), static_cast<int64_t>(p));
  const int a = valuation(m, static_cast<int64_t>(p));
  Rational ratio(chi, static_cast<i128>(p));
  Rational sum(0), term(1);
  for (int i = 0; i <= a; ++i) {
    sum += term;
    term *= ratio;
  }
  return (Rational(1) - Rational(chi, static_cast<i128>(p) * static_cast<i128>(p))) * sum;
}

std::string ArchimedeanDensity::str() const { return coefficient.str() + " pi^2/sqrt(" + std::to_string(det) + ")"; }

ArchimedeanDensity beta_infinity(const QuadraticForm& q, int64_t m) {
  if (q.dim() != 4) throw std::invalid_argument("beta_infinity is implemented for quaternary forms");
  return {Rational(m), q.determinant()};
}

std::vector<uint64_t> bad_primes(const QuadraticForm& q) {
  std::vector<uint64_t> out{2};
  for (auto [p, e] : factorize(static_cast<uint64_t>(q.determinant())))
    if (p != 2) out.push_back(p);
  return out;
}

DensityReport density_report(const QuadraticForm& q, int64_t m) {
  DensityReport r;
  r.m = m;
  std::vector<uint64_t> primes = bad_primes(q);
  for (auto [p, e] : factorize(static_cast<uint64_t>(m)))
    if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
  std::sort(primes.begin(), primes.end());
  for (uint64_t p : primes) {
    DensityReport::Entry e{p, Rational(0), {}};
    e.beta = local_density(q, p, m, &e.breakdown);
    if (e.beta.sign() <= 0) r.locally_represented = false;
    r.primes.push_back(e);
  }
  if (q.dim() == 4) r.beta_inf = beta_infinity(q, m);
  return r;
}

bool is_locally_represented(const QuadraticForm& q, int64_t m) {
  if (m <= 0) return m == 0;
  for (uint64_t p : bad_primes(q))
    if (local_density(q, p, m).sign() <= 0) return false;
  return true;
}

namespace {

int64_t smallest_nonresidue(uint64_t p) {
  for (int64_t a = 2;; ++a)
    if (kronecker(a, static_cast<int64_t>(p)) == -1) return a;
}

int unit_class(int64_t u, uint64_t p) {
  if (p == 2) return static_cast<int>(pos_mod(u, 8) / 2);  // 1,3,5,7 -> 0..3
  return kronecker(u, static_cast<int64_t>(p)) == 1 ? 0 : 1;
}

}  // namespace

LocalRepresentability::LocalRepresentability(const QuadraticForm& q) : primes_(bad_primes(q)) {
  for (uint64_t p : primes_) {
    JordanDecomposition j = jordan_decompose(q, p);
    Table t;
    t.p = p;
    t.max_exponent = 2 * valuation(narrow(static_cast<i128>(4) * q.determinant()), static_cast<int64_t>(p)) + 4;
    std::vector<int64_t> units;
    if (p == 2)
      units = {1, 3, 5, 7};
    else
      units = {1, smallest_nonresidue(p)};
    i128 pe = 1;
    for (int e = 0; e <= t.max_exponent; ++e) {
      std::vector<bool> row;
      for (int64_t u : units) row.push_back(local_density(j, narrow(pe * u)).sign() > 0);
      t.ok.push_back(row);
      pe *= static_cast<i128>(p);
    }
    tables_.push_back(std::move(t));
  }
}

bool LocalRepresentability::represented(int64_t m) const {
  if (m <= 0) return m == 0;
  for (const auto& t : tables_) {
    int e = valuation(m, static_cast<int64_t>(t.p));
    int64_t u = m;
    for (int i = 0; i < e; ++i) u /= static_cast<int64_t>(t.p);
    if (e > t.max_exponent) e = t.max_exponent - ((t.max_exponent - e) % 2 == 0 ? 0 : 1);
    if (!t.ok[e][unit_class(u, t.p)]) return false;
  }
  return true;
}

std::optional<LocalObstruction> find_local_obstruction(const QuadraticForm& q) {
  for (uint64_t p : bad_primes(q)) {
    JordanDecomposition j = jordan_decompose(q, p);
    int max_e = 2 * valuation(narrow(static_cast<i128>(4) * q.determinant()), static_cast<int64_t>(p)) + 4;
    std::vector<int64_t> units = p == 2 ? std::vector<int64_t>{1, 3, 5, 7} : std::vector<int64_t>{1, smallest_nonresidue(p)};
    i128 pe = 1;
    for (int e = 0; e <= max_e; ++e) {
      for (int64_t u : units) {
        int64_t w = narrow(pe * u);
        if (local_density(j, w).sign() <= 0) return LocalObstruction{p, w};
      }
      pe *= static_cast<i128>(p);
    }
  }
  return std::nullopt;
}

int hilbert_symbol(i128 a, i128 b, uint64_t p) {
  if (a == 0 || b == 0) throw std::invalid_argument("Hilbert symbol of zero");
  const int64_t pp = static_cast<int64_t>(p);
  int alpha = valuation(a, pp), beta = valuation(b, pp);
  i128 u = a, v = b;
  for (int i = 0; i < alpha; ++i) u /= pp;
  for (int i = 0; i < beta; ++i) v /= pp;
  if (p != 2) {
    int s = 1;
    if ((alpha * beta) % 2 != 0 && (p % 4) == 3) s = -s;
    if (beta % 2 != 0) s *= kronecker(pos_mod(u, pp), pp);
    if (alpha % 2 != 0) s *= kronecker(pos_mod(v, pp), pp);
    return s;
  }
  int64_t u8 = pos_mod(u, 8), v8 = pos_mod(v, 8);
  auto eps = [](int64_t x) { return static_cast<int>(((x - 1) / 2) % 2); };
  auto omega = [](int64_t x) { return static_cast<int>(((x * x - 1) / 8) % 2); };
  int e = eps(u8) * eps(v8) + alpha * omega(v8) + beta * omega(u8);
  return e % 2 == 0 ? 1 : -1;
}

std::vector<uint64_t> anisotropic_primes(const QuadraticForm& q) {
  if (q.dim() != 4) throw std::invalid_argument("anisotropy test is implemented for quaternary forms");
  std::vector<i128> minors{1};
  for (int k = 1; k <= 4; ++k) minors.push_back(q.gram().leading(k).determinant());
  std::vector<i128> d;
  for (int k = 1; k <= 4; ++k) d.push_back(minors[k] * minors[k - 1]);  // square class of D_k / D_{k-1}
  std::vector<uint64_t> out;
  for (uint64_t p : bad_primes(q)) {
    const int64_t pp = static_cast<int64_t>(p);
    const i128 disc = minors[4];
    int e = valuation(disc, pp);
    i128 u = disc;
    for (int i = 0; i < e; ++i) u /= pp;
    bool square = e % 2 == 0 && (p == 2 ? pos_mod(u, 8) == 1 : kronecker(pos_mod(u, pp), pp) == 1);
    if (!square) continue;
    int hasse = 1;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) hasse *= hilbert_symbol(d[i], d[j], p);
    if (hasse != hilbert_symbol(-1, -1, p)) out.push_back(p);
  }
  return out;
}

}  // namespace qforms
