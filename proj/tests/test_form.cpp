#include <random>

#include "doctest.h"
#include "qforms/form.hpp"
#include "qforms/rational.hpp"
#include "qforms/represent.hpp"

using namespace qforms;

namespace {

const QuadraticForm kHalmos = QuadraticForm::diagonal({1, 2, 7, 13});

// Smallest N with N (2A)^{-1} integral and of even diagonal, by search.
int64_t level_by_search(const QuadraticForm& q) {
  const int n = q.dim();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = Rational(2 * q.entry(i, j));
    m[i][n + i] = Rational(1);
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (m[piv][c] == Rational(0)) ++piv;
    std::swap(m[piv], m[c]);
    Rational inv = Rational(1) / m[c][c];
    for (auto& x : m[c]) x *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == c || m[r][c] == Rational(0)) continue;
      Rational f = m[r][c];
      for (int k = 0; k < 2 * n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  for (int64_t nn = 1;; ++nn) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) {
        Rational v = Rational(nn) * m[i][n + j];
        ok = v.is_integer() && (i != j || v.num() % 2 == 0);
      }
    if (ok) return nn;
  }
}

std::vector<QuadraticForm> random_forms(int count, int max_dim, int lo, int hi, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int64_t> entry(lo, hi);
  std::uniform_int_distribution<int> dim(1, max_dim);
  std::vector<QuadraticForm> out;
  while (static_cast<int>(out.size()) < count) {
    int n = dim(rng);
    IntMatrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) g(i, j) = g(j, i) = entry(rng);
    try {
      out.emplace_back(g);
    } catch (const std::invalid_argument&) {
    }
  }
  return out;
}

}  // namespace

TEST_CASE("validation") {
  CHECK_THROWS(QuadraticForm(IntMatrix{{1, 2}, {2, 1}}));
  CHECK_THROWS(QuadraticForm(IntMatrix{{1, 0}, {1, 1}}));
  CHECK_THROWS(QuadraticForm(IntMatrix{{0}}));
  CHECK_NOTHROW(QuadraticForm(IntMatrix{{2, -1}, {-1, 2}}));
  CHECK(QuadraticForm().dim() == 0);
}

TEST_CASE("evaluate") {
  std::vector<int64_t> e1{1, 0, 0, 0}, zero{0, 0, 0, 0};
  CHECK(evaluate(kHalmos, e1) == 1);
  CHECK(evaluate(kHalmos, zero) == 0);
  std::vector<int64_t> x{1, 1};
  CHECK(evaluate(QuadraticForm::diagonal({1, 2}), x) == 3);
  CHECK_THROWS(evaluate(kHalmos, x));
}

TEST_CASE("determinant and level") {
  CHECK(determinant(kHalmos) == 182);
  CHECK(determinant(QuadraticForm::diagonal({1})) == 1);
  CHECK(determinant(QuadraticForm::diagonal({1, 2, 7})) == 14);
  CHECK(level(kHalmos) == 728);
  CHECK(level(QuadraticForm::diagonal({1, 1, 1, 1})) == 4);
  CHECK(level(QuadraticForm::diagonal({1, 3, 5, 7})) == 420);
  for (const auto& q : random_forms(40, 4, -3, 5, 7)) CHECK(level(q) == level_by_search(q));
}

TEST_CASE("character") {
  CHECK(character(kHalmos, 3) == -1);
  CHECK(character(kHalmos, 5) == -1);
  CHECK_THROWS(character(kHalmos, 7));
  CHECK_THROWS(character(kHalmos, 2));
  QuadraticForm sq = QuadraticForm::diagonal({1, 1, 3, 3});  // D = 9
  for (uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL}) CHECK(character(sq, p) == 1);
}

TEST_CASE("theta coefficients") {
  auto r = theta_coefficients(QuadraticForm::diagonal({1, 1, 1, 1}), 10);
  CHECK(r[0] == 1);
  CHECK(r[1] == 8);
  CHECK(r[2] == 24);
  CHECK(r[3] == 32);
  auto h = theta_coefficients(kHalmos, 20);
  CHECK(h[5] == 0);
  CHECK(h[0] == 1);
  CHECK_THROWS_AS(theta_coefficients(kHalmos, 100000000, 1e6L), ResourceLimit);
}

TEST_CASE("theta agrees with brute force on random forms") {
  for (const auto& q : random_forms(50, 4, -3, 5, 11)) {
    const int n = q.dim();
    const int64_t bound = 200;
    std::vector<int64_t> brute(bound + 1, 0);
    // crude box: |x_i| <= sqrt(bound * adj_ii / D)
    IntMatrix adj = q.gram().adjugate();
    std::vector<int64_t> box(n);
    for (int i = 0; i < n; ++i)
      box[i] = static_cast<int64_t>(std::sqrt(static_cast<double>(bound) * adj(i, i) / q.determinant())) + 1;
    std::vector<int64_t> x(n);
    for (int i = 0; i < n; ++i) x[i] = -box[i];
    while (true) {
      int64_t v = evaluate(q, x);
      if (v <= bound) ++brute[v];
      int i = 0;
      while (i < n && x[i] == box[i]) x[i] = -box[i], ++i;
      if (i == n) break;
      ++x[i];
    }
    auto r = theta_coefficients(q, bound);
    CHECK(r == brute);
    ValueSet vs = represented_values(q, bound);
    for (int64_t m = 0; m <= bound; ++m) {
      CHECK(vs.test(m) == (brute[m] > 0));
      if (m % 7 == 0) CHECK(is_represented(q, m) == (brute[m] > 0));
    }
  }
}

TEST_CASE("representation witnesses evaluate correctly") {
  for (int64_t m : {1, 2, 3, 4, 6, 100, 9999, 100001}) {
    auto x = find_representation(kHalmos, m);
    REQUIRE(x.has_value());
    CHECK(evaluate(kHalmos, *x) == m);
  }
  CHECK_FALSE(is_represented(kHalmos, 5));
  CHECK(is_represented(kHalmos, 1));
  CHECK_FALSE(is_represented(QuadraticForm::diagonal({1, 2}), 7));
}

TEST_CASE("truant") {
  ExceptionTarget s{5};
  CHECK(truant(QuadraticForm::diagonal({1}), s) == 2);
  CHECK(truant(QuadraticForm::diagonal({1, 2}), s) == 7);
  CHECK(truant(QuadraticForm::diagonal({1, 2, 7}), s) == 14);
  CHECK(truant(QuadraticForm(), ExceptionTarget{}) == 1);
  CHECK_FALSE(truant(kHalmos, s, 5000).has_value());
  CHECK(truant(kHalmos, ExceptionTarget{}) == 5);
}

TEST_CASE("equivalence") {
  QuadraticForm a1 = QuadraticForm::from_rows({{1, 1}, {1, 2}});
  QuadraticForm am1 = QuadraticForm::from_rows({{1, -1}, {-1, 2}});
  CHECK(is_equivalent(a1, am1));
  CHECK_FALSE(is_equivalent(QuadraticForm::diagonal({1, 2}), QuadraticForm::diagonal({1, 3})));
  CHECK(is_equivalent(kHalmos, kHalmos));
  // a disguised copy of the Halmos form
  IntMatrix u{{1, 2, 0, -1}, {0, 1, 3, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}};
  QuadraticForm moved = sublattice(kHalmos, u);
  auto m = find_isometry(moved, kHalmos);
  REQUIRE(m.has_value());
  CHECK(congruence(kHalmos.gram(), *m) == moved.gram());
  // same determinant and theta prefix is not enough by itself
  CHECK_FALSE(is_equivalent(QuadraticForm::diagonal({1, 1, 1, 4}), QuadraticForm::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}})));
}

TEST_CASE("equivalence is an equivalence relation and respects invariants") {
  auto forms = random_forms(30, 3, -2, 4, 3);
  for (size_t i = 0; i < forms.size(); ++i) {
    CHECK(is_equivalent(forms[i], forms[i]));
    for (size_t j = i + 1; j < forms.size(); ++j) {
      if (forms[i].dim() != forms[j].dim()) continue;
      bool ij = is_equivalent(forms[i], forms[j]);
      CHECK(ij == is_equivalent(forms[j], forms[i]));
      if (ij) {
        CHECK(level(forms[i]) == level(forms[j]));
        CHECK(theta_coefficients(forms[i], 30) == theta_coefficients(forms[j], 30));
        for (size_t k = j + 1; k < forms.size(); ++k)
          if (forms[k].dim() == forms[i].dim() && is_equivalent(forms[j], forms[k]))
            CHECK(is_equivalent(forms[i], forms[k]));
      }
    }
  }
}

TEST_CASE("reduction") {
  QuadraticForm q = QuadraticForm::from_rows({{5, 7, 2}, {7, 11, 3}, {2, 3, 9}});
  ReducedForm r = reduce(q);
  CHECK(congruence(q.gram(), r.basis) == r.form.gram());
  CHECK(std::llabs(static_cast<int64_t>(r.basis.determinant())) == 1);
  for (int i = 0; i + 1 < r.form.dim(); ++i) CHECK(r.form.entry(i, i) <= r.form.entry(i + 1, i + 1));
  CHECK(reduce(QuadraticForm::from_rows({{1, 1}, {1, 2}})).form == QuadraticForm::diagonal({1, 1}));
}

TEST_CASE("json round trip") {
  auto j = to_json(kHalmos);
  CHECK(j["dim"] == 4);
  CHECK(form_from_json(j) == kHalmos);
  CHECK_THROWS(form_from_json(nlohmann::json::parse(R"({"dim":3,"gram":[[1,0],[0,1]]})")));
}
