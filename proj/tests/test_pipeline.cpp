#include "doctest.h"
#include "qforms/pipeline.hpp"

using namespace qforms;

namespace {

const QuadraticForm kHalmos = QuadraticForm::diagonal({1, 2, 7, 13});

}  // namespace

TEST_CASE("family seeds") {
  FamilySeed odd{6, 3, 2};
  CHECK(odd.contains(6));
  CHECK(odd.contains(54));
  CHECK(odd.contains(486));
  CHECK_FALSE(odd.contains(18));
  CHECK_FALSE(odd.contains(3));
  CHECK_FALSE(odd.contains(12));
  FamilySeed every{3, 7, 1};
  CHECK(every.contains(3));
  CHECK(every.contains(21));
  CHECK(every.contains(147));
  CHECK_FALSE(every.contains(42));
}

TEST_CASE("classification") {
  FormClassification h = classify(kHalmos, 2000);
  CHECK(h.kind == FormKind::TypeA);
  CHECK(h.exceptions == std::vector<int64_t>{5});
  CHECK(h.anisotropic.empty());
  CHECK(to_string(h.kind) == "A");

  CHECK(classify(QuadraticForm::diagonal({1, 1, 1, 1}), 500).kind == FormKind::TypeA);
  CHECK(classify(QuadraticForm::diagonal({1, 1, 1, 1}), 500).exceptions.empty());

  FormClassification even = classify(QuadraticForm::diagonal({2, 2, 2, 2}), 500);
  CHECK(even.kind == FormKind::TypeC);
  REQUIRE(even.obstruction.has_value());
  CHECK(even.obstruction->p == 2);

  // x^2 + y^2 + 3z^2 + 12w^2 misses 6 * 9^j
  FormClassification b = classify(QuadraticForm::diagonal({1, 1, 3, 12}), 2000);
  CHECK(b.kind == FormKind::TypeB);
  CHECK(b.anisotropic == std::vector<uint64_t>{3});
  REQUIRE(b.seeds.size() == 1);
  CHECK(b.seeds[0].k == 6);
  CHECK(b.seeds[0].step == 2);
  CHECK(b.outside_families.empty());
  for (int64_t e : b.exceptions) CHECK(b.seeds[0].contains(e));

  FormClassification b7 = classify(QuadraticForm::diagonal({1, 1, 7, 7}), 2000);
  CHECK(b7.kind == FormKind::TypeB);
  CHECK(b7.seeds.size() == 2);
  CHECK(to_json(b7)["kind"] == "B");
}

TEST_CASE("type B escalation by family seeds") {
  TypeBResult r = higher_escalate_typeB(QuadraticForm::diagonal({1, 1, 3, 12}), 2000);
  REQUIRE(r.seeds.size() == 1);
  CHECK(r.escaped.empty());
  CHECK_FALSE(r.seeds[0].forms.empty());
  for (const auto& f : r.seeds[0].forms) {
    CHECK(f.kind == FormKind::TypeA);
    CHECK(f.form.dim() == 5);
    CHECK(is_represented(f.form, 6));
  }
}

TEST_CASE("subform switch") {
  auto sw = subform_switch(QuadraticForm::diagonal({1, 2, 7, 13, 3}));
  REQUIRE(sw.has_value());
  CHECK(is_equivalent(sw->form, kHalmos));
  CHECK(sw->functional == std::vector<int64_t>{0, 0, 0, 0, 1});

  QuadraticForm mixed = QuadraticForm::from_rows(
      {{2, 1, 0, 0, 0}, {1, 2, 0, 0, 0}, {0, 0, 2, 1, 0}, {0, 0, 1, 4, 1}, {0, 0, 0, 1, 6}});
  if (auto s = subform_switch(mixed)) {
    CHECK(congruence(mixed.gram(), s->basis) == s->form.gram());
    CHECK_FALSE(find_local_obstruction(s->form).has_value());
  }

  CHECK_FALSE(subform_switch(QuadraticForm::diagonal({2, 2, 2, 2, 2})).has_value());
  CHECK_THROWS_AS(subform_switch(kHalmos), std::invalid_argument);
}

TEST_CASE("higher escalation of a quaternary") {
  // the start form represents m
  PairVerdict none = higher_escalate_typeA(kHalmos, 1, 5);
  CHECK(none.outcome == PairOutcome::Impossible);

  // misses 2, 14 and 50 up to the cap; escalating by 50 keeps 2 and 14 out
  QuadraticForm leaf = QuadraticForm::from_rows({{1, 0, -1, 0}, {0, 3, 0, 0}, {-1, 0, 5, -1}, {0, 0, -1, 6}});
  PairVerdict v = higher_escalate_typeA(leaf, 2, 14);
  REQUIRE(v.outcome == PairOutcome::Achieved);
  REQUIRE(v.witness.has_value());
  CHECK(v.dim == 5);
  CHECK_FALSE(is_represented(*v.witness, 2));
  CHECK_FALSE(is_represented(*v.witness, 14));
  CHECK(exceptions_up_to(*v.witness, 2000) == std::vector<int64_t>{2, 14});
  CHECK(to_json(v)["outcome"] == "achieved");

  PipelineOptions four;
  four.max_dim = 4;
  CHECK(higher_escalate_typeA(leaf, 2, 14, four).outcome == PairOutcome::Exhausted);
}

TEST_CASE("candidate ranges") {
  CandidateRange r6 = candidate_range(6);
  CHECK_FALSE(r6.fixed_n);
  CHECK(r6.n_max == 54);
  CHECK(r6.n.front() == 7);
  CandidateRange r15 = candidate_range(15);
  CHECK(r15.fixed_n);
  CHECK(r15.n_max == 6);
  CHECK(r15.n.empty());
}

TEST_CASE("quaternary pair table for small m") {
  auto reference = load_reference_pairs(std::string(QFORMS_DATA_DIR) + "/reference_pairs.json");
  CHECK(reference.size() == 73);
  PipelineOptions opt;
  opt.max_dim = 4;
  PairTable t = enumerate_pairs({3, 7}, reference, opt);
  for (const auto& row : t.rows) {
    if (row.m != 3 && row.m != 7) continue;
    CHECK(row.dim == row.expected_dim);
    if (row.witness) {
      auto ex = exceptions_up_to(*row.witness, 3000);
      CHECK(ex == std::vector<int64_t>{row.m, row.n});
    }
  }
  CHECK(t.found() >= 1);
}
