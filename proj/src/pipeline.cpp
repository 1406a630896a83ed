#include "qforms/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace qforms {

std::string to_string(FormKind k) {
  switch (k) {
    case FormKind::TypeA: return "A";
    case FormKind::TypeB: return "B";
    case FormKind::TypeC: return "C";
  }
  return "?";
}

std::string to_string(PairOutcome o) {
  switch (o) {
    case PairOutcome::Achieved: return "achieved";
    case PairOutcome::Impossible: return "impossible";
    case PairOutcome::Exhausted: return "exhausted";
  }
  return "?";
}

bool FamilySeed::contains(int64_t m) const {
  if (m < k || m % k != 0) return false;
  int64_t r = m / k;
  const int64_t pp = static_cast<int64_t>(p);
  int e = 0;
  while (r % pp == 0) {
    r /= pp;
    ++e;
  }
  return r == 1 && e % step == 0;
}

FormClassification classify(const QuadraticForm& q, int64_t bound, int min_chain) {
  FormClassification c;
  c.form = q;
  c.bound = bound;
  c.exceptions = exceptions_up_to(q, bound);
  if (q.dim() >= 4) c.obstruction = find_local_obstruction(q);
  if (c.obstruction) {
    c.kind = FormKind::TypeC;
    c.outside_families = c.exceptions;
    return c;
  }
  // quinary and larger forms are isotropic everywhere
  if (q.dim() == 4) c.anisotropic = anisotropic_primes(q);

  std::set<int64_t> missing(c.exceptions.begin(), c.exceptions.end());
  std::set<int64_t> covered;
  for (uint64_t p : c.anisotropic) {
    const int64_t pp = static_cast<int64_t>(p);
    for (int64_t k : c.exceptions) {
      if (covered.count(k)) continue;
      for (int step : {2, 1}) {
        const int64_t ratio = step == 1 ? pp : pp * pp;
        if (k % ratio == 0 && missing.count(k / ratio)) continue;  // not the start of its chain
        int terms = 0;
        bool all = true;
        for (int64_t t = k; t <= bound; t *= ratio) {
          if (!missing.count(t)) {
            all = false;
            break;
          }
          ++terms;
          if (t > bound / ratio) break;
        }
        if (!all || terms < min_chain) continue;
        FamilySeed seed{k, p, step};
        c.seeds.push_back(seed);
        for (int64_t t : c.exceptions)
          if (seed.contains(t)) covered.insert(t);
        break;
      }
    }
  }
  for (int64_t t : c.exceptions)
    if (!covered.count(t)) c.outside_families.push_back(t);
  c.kind = c.seeds.empty() ? FormKind::TypeA : FormKind::TypeB;
  return c;
}

nlohmann::json to_json(const FormClassification& c) {
  nlohmann::json j;
  j["form"] = to_json(c.form, false);
  j["kind"] = to_string(c.kind);
  j["bound"] = c.bound;
  const size_t shown = std::min<size_t>(c.exceptions.size(), 200);
  j["exceptions"] = std::vector<int64_t>(c.exceptions.begin(), c.exceptions.begin() + static_cast<long>(shown));
  j["exception_count"] = c.exceptions.size();
  j["anisotropic"] = c.anisotropic;
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& s : c.seeds) seeds.push_back({{"k", s.k}, {"p", s.p}, {"step", s.step}});
  j["seeds"] = seeds;
  if (c.kind == FormKind::TypeB) j["outside_families"] = c.outside_families;
  if (c.obstruction) j["obstruction"] = {{"p", c.obstruction->p}, {"witness", c.obstruction->witness}};
  return j;
}

namespace {

bool misses_target(const QuadraticForm& q, const ExceptionTarget& s) {
  for (int64_t v : s.values())
    if (is_represented(q, v)) return false;
  return true;
}

// Whether q represents xs[from..]. Small values go one at a time so that a
// failure is usually found cheaply; the tail is read off one value bitset.
bool represents_all(const QuadraticForm& q, const std::vector<int64_t>& xs, size_t from) {
  constexpr int64_t kSingle = 1000;
  size_t i = from;
  for (; i < xs.size() && xs[i] <= kSingle; ++i)
    if (!is_represented(q, xs[i])) return false;
  if (i == xs.size()) return true;
  ValueSet values = represented_values(q, xs.back());
  for (; i < xs.size(); ++i)
    if (!values.test(xs[i])) return false;
  return true;
}

}  // namespace

PairVerdict higher_escalate_typeA(const QuadraticForm& q, int64_t m, int64_t n, const PipelineOptions& options) {
  PairVerdict v;
  v.m = m;
  v.n = n;
  const ExceptionTarget s{m, n};
  if (!misses_target(q, s)) {
    v.outcome = PairOutcome::Impossible;
    v.method.push_back("start form represents m or n");
    return v;
  }
  // An escalation only loses exceptions, so the parent's list (minus the pair)
  // is all that has to be rechecked.
  struct Node {
    QuadraticForm form;
    std::vector<int64_t> missing;
  };
  auto outside_pair = [&](std::vector<int64_t> xs) {
    std::erase_if(xs, [&](int64_t x) { return s.contains(x); });
    return xs;
  };
  Node root{q, outside_pair(exceptions_up_to(q, options.truant_cap))};
  if (root.missing.empty()) {
    v.outcome = PairOutcome::Achieved;
    v.witness = q;
    v.dim = q.dim();
    v.bound_checked = options.truant_cap;
    v.method.push_back("start form already misses exactly the pair");
    return v;
  }
  std::vector<Node> frontier{root};
  while (!frontier.empty()) {
    if (frontier.front().form.dim() >= options.max_dim) {
      v.outcome = PairOutcome::Exhausted;
      v.method.push_back("dimension cap " + std::to_string(options.max_dim) + " reached");
      return v;
    }
    const bool last_level = frontier.front().form.dim() + 1 >= options.max_dim;
    std::vector<Node> next;
    bool done = false;
    for (const auto& f : frontier) {
      const int64_t t = f.missing.front();
      for_each_escalation(f.form, t, [&](QuadraticForm&& e) {
        if (++v.examined > options.escalation_cap) {
          v.outcome = PairOutcome::Exhausted;
          v.method.push_back("escalation cap " + std::to_string(options.escalation_cap) + " reached");
          done = true;
          return false;
        }
        if (!misses_target(e, s)) return true;
        if (represents_all(e, f.missing, 1)) {
          v.outcome = PairOutcome::Achieved;
          v.witness = e;
          v.dim = e.dim();
          v.bound_checked = options.truant_cap;
          v.method.push_back("escalated " + f.form.str() + " by truant " + std::to_string(t));
          done = true;
          return false;
        }
        if (last_level) return true;
        ValueSet values = represented_values(e, f.missing.back());
        std::vector<int64_t> still;
        for (size_t i = 1; i < f.missing.size(); ++i)
          if (!values.test(f.missing[i])) still.push_back(f.missing[i]);
        next.push_back({std::move(e), std::move(still)});
        return true;
      });
      if (done) return v;
    }
    if (last_level) {
      v.outcome = PairOutcome::Exhausted;
      v.method.push_back("dimension cap " + std::to_string(options.max_dim) + " reached");
      return v;
    }
    std::vector<QuadraticForm> forms;
    for (const auto& x : next) forms.push_back(x.form);
    std::vector<QuadraticForm> reps = dedup(forms);
    std::vector<Node> kept;
    for (const auto& r : reps)
      for (auto& x : next)
        if (x.form == r) {
          kept.push_back(std::move(x));
          break;
        }
    frontier = std::move(kept);
  }
  v.outcome = PairOutcome::Impossible;
  v.method.push_back("every escalation represents m or n");
  return v;
}

TypeBResult higher_escalate_typeB(const QuadraticForm& q, int64_t bound) {
  TypeBResult r;
  r.classification = classify(q, bound);
  for (int64_t e : r.classification.outside_families)
    if (e > bound / 2) r.escaped.push_back(e);
  for (const auto& seed : r.classification.seeds) {
    TypeBResult::SeedEscalation se{seed, seed.k, {}};
    for (int64_t by : {seed.k, seed.k * static_cast<int64_t>(seed.p)}) {
      se.escalated_by = by;
      se.forms.clear();
      for (const auto& f : dedup(escalations(q, by))) {
        FormClassification fc = classify(f, bound);
        if (fc.kind == FormKind::TypeA) se.forms.push_back(std::move(fc));
      }
      if (!se.forms.empty()) break;
    }
    r.seeds.push_back(std::move(se));
  }
  return r;
}

std::optional<SubformSwitch> subform_switch(const QuadraticForm& quinary, int box) {
  const int n = quinary.dim();
  if (n != 5) throw std::invalid_argument("subform switch expects a quinary form");
  std::vector<std::vector<int64_t>> functionals;
  for (int i = n - 1; i >= 0; --i) {
    std::vector<int64_t> c(n, 0);
    c[i] = 1;
    functionals.push_back(c);
  }
  std::vector<std::vector<int64_t>> rest;
  std::vector<int64_t> c(n, -box);
  for (;;) {
    int64_t g = 0, l1 = 0, nz = 0;
    for (int64_t x : c) {
      g = gcd64(g, x);
      l1 += std::abs(x);
      nz += x != 0;
    }
    auto first = std::find_if(c.begin(), c.end(), [](int64_t x) { return x != 0; });
    if (g == 1 && nz >= 2 && *first > 0) rest.push_back(c);
    int i = 0;
    while (i < n && c[i] == box) c[i++] = -box;
    if (i == n) break;
    ++c[i];
  }
  std::stable_sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
    int64_t la = 0, lb = 0;
    for (int64_t x : a) la += std::abs(x);
    for (int64_t x : b) lb += std::abs(x);
    return la < lb;
  });
  functionals.insert(functionals.end(), rest.begin(), rest.end());
  for (const auto& f : functionals) {
    int64_t g = 0;
    IntMatrix U = kernel_completion(f, g);
    IntMatrix K(n, n - 1);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n - 1; ++k) K(i, k) = U(i, k + 1);
    QuadraticForm sub(congruence(quinary.gram(), K));
    if (find_local_obstruction(sub)) continue;
    return SubformSwitch{sub, K, f};
  }
  return std::nullopt;
}

size_t PairTable::found() const {
  return static_cast<size_t>(std::count_if(rows.begin(), rows.end(), [](const PairRow& r) { return r.dim > 0; }));
}

size_t PairTable::matching_reference() const {
  return static_cast<size_t>(
      std::count_if(rows.begin(), rows.end(), [](const PairRow& r) { return r.dim > 0 && r.dim == r.expected_dim; }));
}

std::vector<ReferencePair> load_reference_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto j = nlohmann::json::parse(in);
  std::vector<ReferencePair> out;
  for (const auto& r : j.at("pairs")) out.push_back({r.at("m"), r.at("n"), r.at("dim")});
  return out;
}

namespace {

EscalatorTree tree_for(const ExceptionTarget& s, const PipelineOptions& options) {
  EscalatorOptions eo;
  eo.max_dim = 4;
  eo.truant_cap = options.truant_cap;
  eo.threads = options.threads;
  return escalate_tree(s, eo);
}

}  // namespace

CandidateRange candidate_range(int64_t m, const PipelineOptions& options) {
  CandidateRange r;
  EscalatorTree tree = tree_for(ExceptionTarget{m}, options);
  std::set<int64_t> n;
  int64_t max_truant = 0;
  for (int idx : tree.levels[4])
    if (tree.nodes[idx].truant) max_truant = std::max(max_truant, *tree.nodes[idx].truant);
  if (max_truant > 0) {
    r.n_max = max_truant;
  } else {
    // no quaternary misses anything besides m: fix n up to the least ternary truant
    r.fixed_n = true;
    r.n_max = options.truant_cap;
    for (int idx : tree.levels[3])
      if (tree.nodes[idx].truant) r.n_max = std::min(r.n_max, *tree.nodes[idx].truant);
  }
  for (int64_t k = m + 1; k <= r.n_max; ++k) n.insert(k);
  // finite exception lists of the leftover quaternaries
  for (int idx : tree.levels[4]) {
    if (!tree.nodes[idx].truant) continue;
    FormClassification c = classify(tree.nodes[idx].form, options.truant_cap);
    if (c.kind == FormKind::TypeC) continue;
    for (int64_t e : c.outside_families)
      if (e > m) n.insert(e);
  }
  r.n.assign(n.begin(), n.end());
  return r;
}

bool verify_pair_witness(const QuadraticForm& w, int64_t m, int64_t n, int64_t bound) {
  ValueSet values = represented_values(w, bound);
  for (int64_t k = 1; k <= bound; ++k)
    if (values.test(k) == (k == m || k == n)) return false;
  return true;
}

PairTable enumerate_pairs(const std::vector<int64_t>& critical, const std::vector<ReferencePair>& reference,
                          const PipelineOptions& options) {
  PairTable table;
  std::map<std::pair<int64_t, int64_t>, PairRow> rows;
  for (const auto& r : reference) {
    PairRow row;
    row.m = r.m;
    row.n = r.n;
    row.expected_dim = r.dim;
    rows[{r.m, r.n}] = row;
  }
  auto verify = [&](PairRow& row) {
    if (!row.witness || options.verify_bound <= row.bound_checked) return;
    if (verify_pair_witness(*row.witness, row.m, row.n, options.verify_bound)) {
      row.bound_checked = options.verify_bound;
      row.method.push_back("exact theta check to " + std::to_string(options.verify_bound));
    } else {
      table.unverified.push_back({row.m, row.n, "witness fails the exact check to " + std::to_string(options.verify_bound)});
    }
  };
  for (int64_t m : critical) {
    CandidateRange range = candidate_range(m, options);
    table.ranges.push_back({m, range.n_max, range.fixed_n, range.n.size()});
    for (int64_t n : range.n) {
      const ExceptionTarget s{m, n};
      EscalatorTree tree = tree_for(s, options);
      PairRow& row = rows[{m, n}];
      row.m = m;
      row.n = n;
      std::vector<int> leftovers;
      for (int idx : tree.levels[4]) {
        if (!tree.nodes[idx].truant) {
          row.dim = 4;
          row.witness = tree.nodes[idx].form;
          row.bound_checked = options.truant_cap;
          row.method = {"escalation with S=" + s.str() + " to dim 4"};
          break;
        }
        leftovers.push_back(idx);
      }
      if (row.dim > 0 || options.max_dim < 5) {
        verify(row);
        continue;
      }
      // small truants first: their escalation sets are the cheapest
      std::stable_sort(leftovers.begin(), leftovers.end(),
                       [&](int a, int b) { return *tree.nodes[a].truant < *tree.nodes[b].truant; });
      PipelineOptions sub = options;
      size_t examined = 0;
      bool exhausted = false;
      for (int idx : leftovers) {
        if (examined >= options.escalation_cap) {
          exhausted = true;
          break;
        }
        sub.escalation_cap = options.escalation_cap - examined;
        const QuadraticForm& q = tree.nodes[idx].form;
        PairVerdict v = higher_escalate_typeA(q, m, n, sub);
        examined += v.examined;
        if (v.outcome == PairOutcome::Achieved) {
          row.dim = v.dim;
          row.witness = v.witness;
          row.bound_checked = v.bound_checked;
          row.method = {"escalation with S=" + s.str() + " to dim 4"};
          row.method.insert(row.method.end(), v.method.begin(), v.method.end());
          if (find_local_obstruction(q) && v.witness->dim() == 5) {
            auto sw = subform_switch(*v.witness);
            row.method.push_back(sw ? "subform switch: " + sw->form.str() : "subform switch failed");
          }
          break;
        }
        if (v.outcome == PairOutcome::Exhausted && v.examined >= sub.escalation_cap) exhausted = true;
      }
      if (row.dim == 0 && exhausted)
        table.exhausted.push_back({m, n, "escalation cap " + std::to_string(options.escalation_cap)});
      verify(row);
    }
  }
  for (auto& [key, row] : rows)
    if (row.dim > 0 || row.expected_dim > 0) table.rows.push_back(std::move(row));
  return table;
}

nlohmann::json to_json(const PairVerdict& v) {
  nlohmann::json j;
  j["pair"] = {v.m, v.n};
  j["outcome"] = to_string(v.outcome);
  if (v.witness) j["witness"] = v.witness->gram().to_rows();
  j["dim"] = v.dim;
  j["bound_checked"] = v.bound_checked;
  j["method"] = v.method;
  j["examined"] = v.examined;
  return j;
}

}  // namespace qforms
