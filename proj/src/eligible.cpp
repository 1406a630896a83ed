#include "qforms/eligible.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

#include "qforms/local_density.hpp"

namespace qforms {

BoundConstants make_constants(const QuadraticForm& q, long double C_f, const Rational& C_E) {
  if (!(C_f > 0)) throw std::invalid_argument("C_f must be positive");
  if (C_E.sign() <= 0) throw std::invalid_argument("C_E must be positive");
  BoundConstants c;
  c.form = q;
  c.C_f = C_f;
  c.C_E = C_E;
  c.N = level(q);
  c.D = q.determinant();
  if (q.dim() == 4) c.anisotropic = anisotropic_primes(q);
  c.C_B = compute_C_B(c);
  return c;
}

BoundConstants constants_from_json(const nlohmann::json& j) {
  QuadraticForm q = form_from_json(j);
  const auto& f = j.at("C_f");
  // a decimal string keeps every digit given
  long double cf = f.is_string() ? std::stold(f.get<std::string>()) : f.get<double>();
  const auto& ce = j.at("C_E");
  Rational e = ce.is_string() ? Rational::parse(ce.get<std::string>()) : Rational(ce.get<int64_t>());
  return make_constants(q, cf, e);
}

BoundConstants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return constants_from_json(nlohmann::json::parse(in));
}

long double log_B(uint64_t m, const BoundConstants& c) {
  if (m == 0) throw std::invalid_argument("B(m) needs m >= 1");
  long double v = 0;
  uint64_t tau = 1;
  for (auto [p, e] : factorize(m)) {
    tau *= static_cast<uint64_t>(e + 1);
    const long double lp = std::log(static_cast<long double>(p));
    if (!c.is_anisotropic(p)) v += 0.5L * e * lp;
    if (c.chi(p) == -1) v += std::log(static_cast<long double>(p - 1) / static_cast<long double>(p + 1));
  }
  return v - std::log(static_cast<long double>(tau));
}

long double B_value(uint64_t m, const BoundConstants& c) { return std::exp(log_B(m, c)); }

long double compute_C_B(const BoundConstants& c) {
  long double cb = 1;
  for (uint64_t p : {2, 3, 5, 7}) {
    long double b = B_value(p, c);
    if (b < 1) cb *= b;
  }
  return cb;
}

Thresholds thresholds(const BoundConstants& c) {
  Thresholds t{};
  t.numbers = c.C_f / c.C_E.to_long_double();
  t.primes = t.numbers / c.C_B;
  t.log_numbers = std::log(t.numbers) + kEligibilitySlack * std::max<long double>(1, std::fabs(std::log(t.numbers)));
  t.log_primes = std::log(t.primes) + kEligibilitySlack * std::max<long double>(1, std::fabs(std::log(t.primes)));
  return t;
}

std::vector<EligiblePrime> eligible_primes(const BoundConstants& c) {
  const Thresholds t = thresholds(c);
  const uint64_t last_aniso = c.anisotropic.empty() ? 0 : c.anisotropic.back();
  std::vector<EligiblePrime> out;
  uint32_t limit = 1U << 16;
  size_t next = 0;
  std::vector<uint32_t> primes = primes_up_to(limit);
  bool prev_failed = false;
  for (;;) {
    if (next == primes.size()) {
      if (limit > (1U << 30)) throw ResourceLimit("eligible prime scan passed 2^31");
      limit *= 2;
      primes = primes_up_to(limit);
    }
    const uint64_t p = primes[next++];
    const long double lb = log_B(p, c);
    if (lb <= t.log_primes) {
      out.push_back({p, std::exp(lb), lb});
      prev_failed = false;
      continue;
    }
    if (prev_failed && p > last_aniso) break;
    prev_failed = true;
  }
  std::sort(out.begin(), out.end(), [](const EligiblePrime& a, const EligiblePrime& b) {
    return a.log_b != b.log_b ? a.log_b < b.log_b : a.p < b.p;
  });
  return out;
}

int max_support(const BoundConstants& c, const std::vector<EligiblePrime>& primes) {
  const long double limit = thresholds(c).log_numbers;
  long double s = 0;
  int best = 0;
  for (size_t i = 0; i < primes.size(); ++i) {
    s += primes[i].log_b;
    if (s <= limit) best = static_cast<int>(i + 1);
  }
  return best;
}

std::vector<uint64_t> squarefree_eligible(const BoundConstants& c, const std::vector<EligiblePrime>& primes,
                                          size_t cap) {
  const long double limit = thresholds(c).log_numbers;
  const size_t n = primes.size();
  for (size_t i = 1; i < n; ++i)
    if (primes[i].log_b < primes[i - 1].log_b) throw std::invalid_argument("primes must be sorted by B");
  // best[i]: lowest log B any product over primes[i..] can add
  std::vector<long double> best(n + 1, 0);
  for (size_t i = n; i-- > 0;) best[i] = best[i + 1] + std::min<long double>(0, primes[i].log_b);

  std::vector<uint64_t> out;
  // Odometer over B-sorted indices: the last digit is bumped until the product
  // can no longer be completed to an eligible one, then the carry moves left.
  std::vector<size_t> idx;
  std::vector<long double> logs{0};
  std::vector<u128> prods{1};
  out.push_back(1);
  size_t start = 0;
  for (;;) {
    bool descended = false;
    for (size_t i = start; i < n; ++i) {
      const long double nl = logs.back() + primes[i].log_b;
      if (nl + best[i + 1] > limit) break;
      const u128 np = prods.back() * primes[i].p;
      if (np > std::numeric_limits<uint64_t>::max()) throw std::overflow_error("eligible product exceeds 64 bits");
      idx.push_back(i);
      logs.push_back(nl);
      prods.push_back(np);
      if (nl <= limit) {
        out.push_back(static_cast<uint64_t>(np));
        if (out.size() > cap) throw ResourceLimit("squarefree eligible numbers exceed cap");
      }
      start = i + 1;
      descended = true;
      break;
    }
    if (descended) continue;
    if (idx.empty()) break;
    start = idx.back() + 1;
    idx.pop_back();
    logs.pop_back();
    prods.pop_back();
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<uint64_t> square_augment(const std::vector<uint64_t>& exceptions, const std::vector<uint64_t>& primes,
                                     const BoundConstants& c) {
  const long double limit = thresholds(c).log_numbers;
  std::set<uint64_t> candidates(primes.begin(), primes.end());
  candidates.insert(2);
  candidates.insert(c.anisotropic.begin(), c.anisotropic.end());
  std::set<uint64_t> out;
  for (uint64_t s : exceptions) {
    for (uint64_t p : candidates) {
      const u128 sp = static_cast<u128>(s) * p;
      const u128 spp = sp * p;
      if (spp > std::numeric_limits<uint64_t>::max()) continue;
      // s p ineligible implies s p^2 ineligible except for these two cases
      if (p != 2 && !c.is_anisotropic(p) && log_B(static_cast<uint64_t>(sp), c) > limit) continue;
      if (log_B(static_cast<uint64_t>(spp), c) <= limit) out.insert(static_cast<uint64_t>(spp));
    }
  }
  return {out.begin(), out.end()};
}

ClosureResult closure_loop(const BoundConstants& c, const ExceptionFilter& filter, int max_rounds) {
  ClosureResult result;
  auto primes = eligible_primes(c);
  result.eligible_prime_count = primes.size();
  std::vector<uint64_t> natural;
  natural.reserve(primes.size());
  for (const auto& e : primes) natural.push_back(e.p);
  std::sort(natural.begin(), natural.end());

  std::vector<uint64_t> numbers = squarefree_eligible(c, primes);
  std::set<uint64_t> all;
  std::vector<uint64_t> current = filter(numbers);
  result.rounds.push_back({"squarefree", numbers.size(), current});
  all.insert(current.begin(), current.end());
  for (int round = 0; !current.empty(); ++round) {
    if (round >= max_rounds) throw ResourceLimit("closure loop did not terminate");
    std::vector<uint64_t> cand = square_augment(current, natural, c);
    current = filter(cand);
    result.rounds.push_back({"sp2", cand.size(), current});
    all.insert(current.begin(), current.end());
  }
  result.exceptions.assign(all.begin(), all.end());
  return result;
}

std::vector<Inversion> bp_inversions(const BoundConstants& c, uint64_t limit) {
  std::vector<Inversion> out;
  auto primes = primes_up_to(static_cast<uint32_t>(limit));
  long double prev = 0;
  for (size_t i = 0; i < primes.size(); ++i) {
    long double cur = log_B(primes[i], c);
    if (i > 0 && prev > cur) out.push_back({primes[i - 1], primes[i], c.is_anisotropic(primes[i])});
    prev = cur;
  }
  return out;
}

namespace {
constexpr char kNumbersMagic[4] = {'E', 'L', 'G', '1'};
}

void write_numbers(const std::string& path, const std::vector<uint64_t>& numbers) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kNumbersMagic, 4);
  auto put = [&](uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  put(numbers.size());
  for (uint64_t v : numbers) put(v);
}

std::vector<uint64_t> read_numbers(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kNumbersMagic, 4) != 0) throw std::runtime_error(path + ": not an ELG1 file");
  auto get = [&]() {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error(path + ": truncated");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
  };
  uint64_t n = get();
  std::vector<uint64_t> out(n);
  for (auto& v : out) v = get();
  return out;
}

}  // namespace qforms
