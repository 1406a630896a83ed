#include <cstdio>
#include <random>

#include "doctest.h"
#include "qforms/eligible.hpp"
#include "qforms/local_density.hpp"
#include "qforms/rep_checker.hpp"

using namespace qforms;

namespace {

const QuadraticForm kHalmos = QuadraticForm::diagonal({1, 2, 7, 13});

std::vector<QuadraticForm> random_quaternaries(int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int64_t> diag(1, 6);
  std::uniform_int_distribution<int64_t> off(-1, 1);
  std::vector<QuadraticForm> out;
  while (static_cast<int>(out.size()) < count) {
    IntMatrix g(4, 4);
    for (int i = 0; i < 4; ++i) {
      g(i, i) = diag(rng);
      for (int j = i + 1; j < 4; ++j) g(i, j) = g(j, i) = off(rng);
    }
    try {
      out.emplace_back(g);
    } catch (const std::invalid_argument&) {
    }
  }
  return out;
}

}  // namespace

TEST_CASE("split local cover of the Halmos form") {
  SplitLocalCover c = find_split_local_cover(kHalmos);
  CHECK(c.d == 1);
  CHECK(c.T == QuadraticForm::diagonal({2, 7, 13}));
  CHECK(congruence(kHalmos.gram(), c.basis) == c.split_form().gram());
  CHECK(c.verified_modulus > 1);
}

TEST_CASE("diagonal covers split off the smallest entry") {
  SplitLocalCover c = find_split_local_cover(QuadraticForm::diagonal({1, 3, 5, 7}));
  CHECK(c.d == 1);
  CHECK(c.T == QuadraticForm::diagonal({3, 5, 7}));
  SplitLocalCover e = find_split_local_cover(QuadraticForm::diagonal({2, 3, 5, 6}));
  CHECK(e.d == 2);
}

TEST_CASE("covers are sublattices with matching local behaviour") {
  int found = 0;
  for (const auto& q : random_quaternaries(12, 7)) {
    SplitLocalCover c;
    try {
      c = find_split_local_cover(q, 12);
    } catch (const std::runtime_error&) {
      continue;
    }
    ++found;
    CHECK(congruence(q.gram(), c.basis) == c.split_form().gram());
    auto rq = theta_coefficients(q, 200);
    auto rc = theta_coefficients(c.split_form(), 200);
    for (int m = 1; m <= 200; ++m) {
      if (rc[m] > 0) CHECK(rq[m] > 0);
      CHECK(is_locally_represented(q, m) == is_locally_represented(c.split_form(), m));
    }
  }
  CHECK(found >= 6);
}

TEST_CASE("boolean theta") {
  QuadraticForm T = QuadraticForm::diagonal({2, 7, 13});
  RepresentedBitset b = boolean_theta(T, 30, BitsetMode::Exact);
  std::vector<bool> brute(31, false);
  for (int a = -4; a <= 4; ++a)
    for (int bb = -3; bb <= 3; ++bb)
      for (int c = -2; c <= 2; ++c) {
        int v = 2 * a * a + 7 * bb * bb + 13 * c * c;
        if (v <= 30) brute[v] = true;
      }
  for (int m = 0; m <= 30; ++m) CHECK(b.test(m) == brute[m]);
  CHECK(b.test(22));
  CHECK_FALSE(b.test(1));

  RepresentedBitset zero = boolean_theta(T, 0, BitsetMode::Exact);
  CHECK(zero.test(0));
  CHECK(zero.bits.count() == 1);

  QuadraticForm S = QuadraticForm::from_rows({{3, 1, 0}, {1, 4, 1}, {0, 1, 6}});
  const int64_t Y = 5000;
  RepresentedBitset exact = boolean_theta(S, Y, BitsetMode::Exact);
  RepresentedBitset exact_w = boolean_theta(S, Y, BitsetMode::Exact, std::nullopt, true);
  CHECK(exact.bits.words() == exact_w.bits.words());
  size_t last = 0;
  for (double alpha : {0.2, 0.4, 0.7, 1.0, 1.5}) {
    RepresentedBitset ap = boolean_theta(S, Y, BitsetMode::Approximate, default_prism(S, Y, alpha), true);
    for (int64_t m = 0; m <= Y; ++m) {
      if (!ap.test(m)) continue;
      CHECK(exact.test(m));
      const auto& w = ap.witness[m];
      CHECK(evaluate(S, std::vector<int64_t>{w[0], w[1], w[2]}) == m);
    }
    CHECK(ap.bits.count() >= last);
    last = ap.bits.count();
  }
  CHECK(last == exact.bits.count());
}

TEST_CASE("bitset file round trip") {
  RepresentedBitset b = boolean_theta(QuadraticForm::diagonal({2, 7, 13}), 1000, BitsetMode::Exact);
  const std::string path = "test_bitset.bth";
  write_bitset(path, b);
  RepresentedBitset r = read_bitset(path);
  CHECK(r.Y == 1000);
  CHECK(r.mode == BitsetMode::Exact);
  CHECK(r.form_hash == b.form_hash);
  CHECK(r.bits.words() == b.bits.words());
  std::remove(path.c_str());
}

TEST_CASE("checking numbers against the Halmos cover") {
  SplitLocalCover c = find_split_local_cover(kHalmos);
  std::vector<uint64_t> numbers;
  for (uint64_t m = 1; m <= 3000; ++m) numbers.push_back(m);
  CheckerReport rep = check_with_fallback(c, numbers);
  CHECK(rep.exceptions == std::vector<uint64_t>{5});
  for (const auto& w : rep.approximate.represented) CHECK(evaluate(kHalmos, w.vector) == static_cast<int64_t>(w.a));
  CheckResult direct = check_numbers(c, {1, 4, 25, 5}, {.mode = BitsetMode::Exact});
  CHECK(direct.unresolved == std::vector<uint64_t>{5});
  CHECK(resolve_with_full_theta(kHalmos, {1, 5}) == std::vector<uint64_t>{5});
  CHECK(resolve_with_full_theta(kHalmos, {}).empty());
}

TEST_CASE("checker agrees with theta membership on random forms") {
  int used = 0;
  for (const auto& q : random_quaternaries(20, 19)) {
    SplitLocalCover c;
    try {
      c = find_split_local_cover(q, 12);
    } catch (const std::runtime_error&) {
      continue;
    }
    ++used;
    std::vector<uint64_t> numbers;
    for (uint64_t a = 1; a <= 500; ++a) numbers.push_back(a);
    CheckerReport rep = check_with_fallback(c, numbers);
    auto r = theta_coefficients(q, 500);
    std::vector<uint64_t> expect;
    for (uint64_t a = 1; a <= 500; ++a)
      if (r[a] == 0) expect.push_back(a);
    CHECK(rep.exceptions == expect);
  }
  CHECK(used >= 10);
}

TEST_CASE("Halmos closure loop") {
  BoundConstants k = make_constants(kHalmos, 13.4964L, Rational(36, 71));
  SplitLocalCover cover = find_split_local_cover(kHalmos);
  auto filter = [&](const std::vector<uint64_t>& xs) { return check_with_fallback(cover, xs).exceptions; };
  ClosureResult r = closure_loop(k, filter);
  CHECK(r.exceptions == std::vector<uint64_t>{5});
  REQUIRE(r.rounds.size() == 2);
  CHECK(r.rounds[1].candidates == 28);
}
