#include "qforms/rep_checker.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "qforms/local_density.hpp"
#include "qforms/parallel.hpp"

namespace qforms {

QuadraticForm SplitLocalCover::split_form() const { return direct_sum(QuadraticForm::diagonal({d}), T); }

std::vector<int64_t> SplitLocalCover::embed(int64_t x, const std::array<int64_t, 3>& y) const {
  const int n = basis.rows();
  std::vector<int64_t> v(n, 0);
  for (int i = 0; i < n; ++i) {
    i128 s = static_cast<i128>(basis(i, 0)) * x;
    for (int k = 0; k < 3; ++k) s += static_cast<i128>(basis(i, k + 1)) * y[k];
    v[i] = narrow(s);
  }
  return v;
}

namespace {

int64_t smallest_nonresidue(uint64_t p) {
  for (int64_t a = 2;; ++a)
    if (kronecker(a, static_cast<int64_t>(p)) == -1) return a;
}

int64_t saturating_mul(int64_t a, int64_t b) {
  i128 r = static_cast<i128>(a) * b;
  return r > std::numeric_limits<int64_t>::max() ? std::numeric_limits<int64_t>::max() : static_cast<int64_t>(r);
}

}  // namespace

bool same_local_representability(const QuadraticForm& q, const QuadraticForm& r, int64_t* modulus) {
  int64_t mod = 1;
  std::vector<uint64_t> primes = bad_primes(r);
  for (uint64_t p : bad_primes(q))
    if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
  std::sort(primes.begin(), primes.end());
  for (uint64_t p : primes) {
    const int64_t pp = static_cast<int64_t>(p);
    const int64_t big = std::max(r.determinant(), q.determinant());
    const int E = 2 * valuation(narrow(static_cast<i128>(4) * big), pp) + 4;
    std::vector<int64_t> units = p == 2 ? std::vector<int64_t>{1, 3, 5, 7} : std::vector<int64_t>{1, smallest_nonresidue(p)};
    const JordanDecomposition jq = jordan_decompose(q, p);
    const JordanDecomposition jr = jordan_decompose(r, p);
    i128 pe = 1;
    for (int e = 0; e <= E; ++e) {
      for (int64_t u : units) {
        const int64_t m = narrow(pe * u);
        if ((local_density(jq, m).sign() > 0) != (local_density(jr, m).sign() > 0)) return false;
      }
      pe *= pp;
    }
    mod = saturating_mul(mod, narrow(pe * (p == 2 ? 4 : 1)));
  }
  if (modulus) *modulus = mod;
  return true;
}

SplitLocalCover find_split_local_cover(const QuadraticForm& q, int64_t d_cap) {
  if (q.dim() != 4) throw std::invalid_argument("split local covers need a quaternary form");
  for (int64_t d = 1; d <= d_cap; ++d) {
    std::vector<std::vector<int64_t>> vectors;
    for_each_vector(q.gram(), d, [&](int64_t value, const int64_t* z) {
      if (value != d) return;
      std::vector<int64_t> v(z, z + 4);
      int64_t g = 0;
      for (int64_t x : v) g = gcd64(g, x);
      if (g != 1) return;
      auto first = std::find_if(v.begin(), v.end(), [](int64_t x) { return x != 0; });
      if (*first < 0) return;
      vectors.push_back(std::move(v));
    });
    std::sort(vectors.begin(), vectors.end());
    for (const auto& v : vectors) {
      std::vector<int64_t> w(4, 0);
      for (int i = 0; i < 4; ++i) {
        i128 s = 0;
        for (int k = 0; k < 4; ++k) s += static_cast<i128>(q.entry(i, k)) * v[k];
        w[i] = narrow(s);
      }
      int64_t g = 0;
      IntMatrix U = kernel_completion(w, g);
      IntMatrix K(4, 3);
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 3; ++k) K(i, k) = U(i, k + 1);
      ReducedForm rt = reduce(QuadraticForm(congruence(q.gram(), K)));
      IntMatrix kb = K * rt.basis;
      IntMatrix basis(4, 4);
      for (int i = 0; i < 4; ++i) {
        basis(i, 0) = v[i];
        for (int k = 0; k < 3; ++k) basis(i, k + 1) = kb(i, k);
      }
      SplitLocalCover cover{.d = d, .T = rt.form, .parent = q, .basis = basis};
      if (congruence(q.gram(), basis) != cover.split_form().gram())
        throw std::logic_error("split cover basis does not realise d x^2 + T");
      if (same_local_representability(q, cover.split_form(), &cover.verified_modulus)) return cover;
    }
  }
  throw std::runtime_error("no split local cover with d <= " + std::to_string(d_cap));
}

std::array<int64_t, 3> default_prism(const QuadraticForm& T, int64_t Y, double alpha) {
  if (T.dim() != 3) throw std::invalid_argument("prism needs a ternary form");
  QuadraticForm r = reduce(T).form;
  std::array<int64_t, 3> out{};
  for (int i = 0; i < 3; ++i)
    out[i] = static_cast<int64_t>(
        std::ceil(alpha * std::sqrt(static_cast<long double>(Y) / static_cast<long double>(r.entry(i, i)))));
  return out;
}

uint64_t form_hash(const QuadraticForm& q) {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&](int64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<uint64_t>(v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(q.dim());
  for (int64_t v : q.gram().flat()) mix(v);
  return h;
}

RepresentedBitset boolean_theta(const QuadraticForm& T, int64_t Y, BitsetMode mode,
                                std::optional<std::array<int64_t, 3>> prism, bool witnesses) {
  if (T.dim() != 3) throw std::invalid_argument("boolean theta is built for ternary forms");
  if (Y < 0) throw std::invalid_argument("Y must be >= 0");
  if (Y > (int64_t{1} << 36)) throw ResourceLimit("bitset above 2^36 bits");
  if (witnesses && Y > 200'000'000) throw ResourceLimit("witness table above 2e8 entries");

  RepresentedBitset out;
  out.Y = Y;
  out.mode = mode;
  out.form_hash = form_hash(T);

  if (mode == BitsetMode::Exact && !witnesses) {
    out.bits = represented_values(T, Y);
    return out;
  }

  out.bits = ValueSet(0, Y);
  if (witnesses) out.witness.assign(static_cast<size_t>(Y) + 1, {0, 0, 0});

  ReducedForm rf = reduce(T);
  const IntMatrix& G = rf.form.gram();
  const IntMatrix adj = G.adjugate();
  const long double det = static_cast<long double>(rf.form.determinant());
  std::array<int64_t, 3> r{};
  for (int i = 0; i < 3; ++i)
    r[i] = static_cast<int64_t>(std::floor(std::sqrt(static_cast<long double>(Y) * adj(i, i) / det))) + 1;
  if (mode == BitsetMode::Approximate) {
    std::array<int64_t, 3> box = prism ? *prism : default_prism(T, Y);
    for (int i = 0; i < 3; ++i) r[i] = std::min(r[i], box[i]);
  }

  const int64_t a = G(2, 2);
  auto record = [&](int64_t value, int64_t u0, int64_t u1, int64_t u2) {
    if (out.bits.test(value)) return;
    out.bits.set(value);
    if (!witnesses) return;
    std::array<int32_t, 3> y{};
    for (int i = 0; i < 3; ++i)
      y[i] = static_cast<int32_t>(rf.basis(i, 0) * u0 + rf.basis(i, 1) * u1 + rf.basis(i, 2) * u2);
    out.witness[static_cast<size_t>(value)] = y;
  };
  // half space: u0 > 0, or u0 = 0 and u1 > 0, or u0 = u1 = 0 and u2 >= 0
  for (int64_t u0 = 0; u0 <= r[0]; ++u0) {
    for (int64_t u1 = u0 == 0 ? 0 : -r[1]; u1 <= r[1]; ++u1) {
      const int64_t b = G(0, 2) * u0 + G(1, 2) * u1;
      const int64_t c = G(0, 0) * u0 * u0 + 2 * G(0, 1) * u0 * u1 + G(1, 1) * u1 * u1;
      // a t^2 + 2 b t + c <= Y
      const long double disc = static_cast<long double>(b) * b - static_cast<long double>(a) * (c - Y);
      if (disc < 0) continue;
      const long double sq = std::sqrt(disc);
      int64_t lo = static_cast<int64_t>(std::floor((-b - sq) / a)) - 1;
      int64_t hi = static_cast<int64_t>(std::ceil((-b + sq) / a)) + 1;
      lo = std::max(lo, -r[2]);
      hi = std::min(hi, r[2]);
      if (u0 == 0 && u1 == 0) lo = std::max<int64_t>(lo, 0);
      for (int64_t t = lo; t <= hi; ++t) {
        const int64_t v = a * t * t + 2 * b * t + c;
        if (v >= 0 && v <= Y) record(v, u0, u1, t);
      }
    }
  }
  return out;
}

namespace {
constexpr char kBitsetMagic[4] = {'B', 'T', 'H', '1'};

void put_u64(std::ofstream& out, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t get_u64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("truncated bitset file");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}
}  // namespace

void write_bitset(const std::string& path, const RepresentedBitset& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kBitsetMagic, 4);
  put_u64(out, static_cast<uint64_t>(b.Y));
  out.put(static_cast<char>(b.mode));
  put_u64(out, b.form_hash);
  put_u64(out, b.bits.words().size());
  for (uint64_t w : b.bits.words()) put_u64(out, w);
}

RepresentedBitset read_bitset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kBitsetMagic, 4) != 0) throw std::runtime_error(path + ": not a BTH1 file");
  RepresentedBitset b;
  b.Y = static_cast<int64_t>(get_u64(in));
  char mode = 0;
  in.get(mode);
  b.mode = static_cast<BitsetMode>(mode);
  b.form_hash = get_u64(in);
  const uint64_t words = get_u64(in);
  b.bits = ValueSet(0, b.Y);
  if (b.bits.words().size() != words) throw std::runtime_error(path + ": word count does not match Y");
  for (auto& w : b.bits.words()) w = get_u64(in);
  return b;
}

CheckResult check_numbers(const SplitLocalCover& cover, const std::vector<uint64_t>& numbers,
                          const CheckOptions& options) {
  CheckResult result;
  if (numbers.empty()) return result;
  const uint64_t X = *std::max_element(numbers.begin(), numbers.end());
  const int64_t d = cover.d;
  result.Y = static_cast<int64_t>(std::ceil(2.0L * d * options.attempts * std::sqrt(static_cast<long double>(X))));
  std::optional<std::array<int64_t, 3>> prism;
  if (options.mode == BitsetMode::Approximate) prism = default_prism(cover.T, result.Y, options.prism_alpha);
  const RepresentedBitset bits = boolean_theta(cover.T, result.Y, options.mode, prism, true);

  const size_t chunk = 4096;
  const size_t chunks = (numbers.size() + chunk - 1) / chunk;
  std::vector<CheckResult> parts(chunks);
  parallel_for(chunks, options.threads, [&](size_t ci) {
    CheckResult& part = parts[ci];
    const size_t end = std::min(numbers.size(), (ci + 1) * chunk);
    for (size_t i = ci * chunk; i < end; ++i) {
      const uint64_t a = numbers[i];
      uint64_t x0 = 0;
      if (a > static_cast<uint64_t>(result.Y)) {
        const uint64_t t = (a - result.Y + d - 1) / d;
        x0 = isqrt(t);
        if (x0 * x0 < t) ++x0;
      }
      bool hit = false;
      for (int k = 0; k < options.attempts && !hit; ++k) {
        const u128 x = x0 + k;
        const u128 dx2 = static_cast<u128>(d) * x * x;
        if (dx2 > a) break;
        const int64_t rest = static_cast<int64_t>(a - dx2);
        if (!bits.test(rest)) continue;
        const auto& w = bits.witness[static_cast<size_t>(rest)];
        std::vector<int64_t> v = cover.embed(static_cast<int64_t>(x), {w[0], w[1], w[2]});
        if (static_cast<uint64_t>(evaluate(cover.parent, v)) != a)
          throw std::logic_error("witness does not evaluate to " + std::to_string(a));
        part.represented.push_back({a, std::move(v)});
        hit = true;
      }
      if (!hit) part.unresolved.push_back(a);
    }
  });
  for (auto& p : parts) {
    std::move(p.represented.begin(), p.represented.end(), std::back_inserter(result.represented));
    result.unresolved.insert(result.unresolved.end(), p.unresolved.begin(), p.unresolved.end());
  }
  return result;
}

std::vector<uint64_t> resolve_with_full_theta(const QuadraticForm& q, const std::vector<uint64_t>& unresolved) {
  std::vector<uint64_t> out;
  for (uint64_t m : unresolved) {
    auto v = find_representation(q, static_cast<int64_t>(m));
    if (!v) {
      out.push_back(m);
      continue;
    }
    if (evaluate(q, *v) != static_cast<int64_t>(m)) throw std::logic_error("representation search returned a bad vector");
  }
  return out;
}

CheckerReport check_with_fallback(const SplitLocalCover& cover, const std::vector<uint64_t>& numbers,
                                  const CheckOptions& options) {
  CheckerReport report;
  CheckOptions approx = options;
  approx.mode = BitsetMode::Approximate;
  report.approximate = check_numbers(cover, numbers, approx);
  CheckOptions exact = options;
  exact.mode = BitsetMode::Exact;
  report.exact = check_numbers(cover, report.approximate.unresolved, exact);
  report.exceptions = resolve_with_full_theta(cover.parent, report.exact.unresolved);
  return report;
}

}  // namespace qforms
