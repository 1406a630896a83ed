// qforms: command line front end for the escalation and eligibility tools.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qforms/eligible.hpp"
#include "qforms/pipeline.hpp"
#include "qforms/rep_checker.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qforms;

namespace {

constexpr int kDefinitive = 0;
constexpr int kError = 1;
constexpr int kUndecided = 2;

struct Global {
  int threads = 1;
  int64_t cap = kDefaultTruantCap;
  std::string out;
};

// Writes to out/name when --out is given, stdout otherwise.
class Sink {
 public:
  Sink(const Global& g, const std::string& name) {
    if (g.out.empty()) return;
    fs::create_directories(g.out);
    path_ = (fs::path(g.out) / name).string();
    file_.open(path_);
    if (!file_) throw std::runtime_error("cannot write " + path_);
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  [[nodiscard]] bool to_file() const { return file_.is_open(); }
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::ofstream file_;
  std::string path_;
};

std::pair<int64_t, int64_t> parse_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    int64_t m = std::stoll(text);
    return {m, m};
  }
  return {std::stoll(text.substr(0, dots)), std::stoll(text.substr(dots + 2))};
}

json gram_json(const QuadraticForm& q) { return to_json(q, false)["gram"]; }

int run_escalate(const Global& g, const std::vector<int64_t>& except, int max_dim) {
  EscalatorOptions eo;
  eo.max_dim = max_dim;
  eo.truant_cap = g.cap;
  eo.threads = g.threads;
  ExceptionTarget s(except);
  EscalatorTree tree = escalate_tree(s, eo);
  Sink sink(g, "tree.jsonl");
  for (const auto& line : tree_json_lines(tree)) sink.os() << line.dump() << "\n";
  json summary;
  summary["target"] = s.values();
  summary["raw_escalations"] = tree.raw_counts;
  std::vector<size_t> classes;
  std::vector<size_t> truant_free;
  for (const auto& level : tree.levels) {
    classes.push_back(level.size());
    size_t free = 0;
    for (int idx : level) free += !tree.nodes[idx].truant;
    truant_free.push_back(free);
  }
  summary["classes"] = classes;
  summary["without_truant"] = truant_free;
  if (sink.to_file()) summary["tree"] = sink.path();
  std::cerr << summary.dump() << "\n";
  return kDefinitive;
}

int run_densities(const Global& g, const std::string& form_path, uint64_t p, const std::string& range) {
  QuadraticForm q = load_form(form_path);
  auto [lo, hi] = parse_range(range);
  if (lo < 1 || hi < lo) throw std::invalid_argument("m range must be 1 <= lo <= hi");
  JordanDecomposition j = jordan_decompose(q, p);
  Sink sink(g, "densities_p" + std::to_string(p) + ".csv");
  sink.os() << "m,beta,good,zero,bad\n";
  for (int64_t m = lo; m <= hi; ++m) {
    DensityBreakdown b;
    Rational beta = local_density(j, m, &b);
    sink.os() << m << "," << beta << "," << b.good << "," << b.zero << "," << b.bad << "\n";
  }
  return kDefinitive;
}

int run_eligible(const Global& g, const std::string& constants_path, const std::string& emit) {
  BoundConstants c = load_constants(constants_path);
  auto primes = eligible_primes(c);
  auto numbers = squarefree_eligible(c, primes);
  json summary;
  summary["C_B"] = static_cast<double>(c.C_B);
  summary["eligible_primes"] = primes.size();
  summary["squarefree_eligible"] = numbers.size();
  summary["max_squarefree"] = numbers.empty() ? 0 : numbers.back();
  summary["max_support"] = max_support(c, primes);

  std::string primes_file = "primes.csv", numbers_file = "numbers.bin";
  if (!emit.empty()) {
    auto comma = emit.find(',');
    primes_file = emit.substr(0, comma);
    if (comma != std::string::npos) numbers_file = emit.substr(comma + 1);
  }
  auto place = [&](const std::string& name) { return g.out.empty() ? name : (fs::path(g.out) / name).string(); };
  if (!g.out.empty()) fs::create_directories(g.out);
  if (!emit.empty() || !g.out.empty()) {
    std::ofstream csv(place(primes_file));
    csv << "p,B\n";
    csv.precision(17);
    for (const auto& e : primes) csv << e.p << "," << static_cast<double>(e.B) << "\n";
    write_numbers(place(numbers_file), numbers);
    summary["primes_file"] = place(primes_file);
    summary["numbers_file"] = place(numbers_file);
  }
  std::cout << summary.dump(2) << "\n";
  return kDefinitive;
}

int run_check(const Global& g, const std::string& form_path, const std::string& numbers_path,
              const std::string& constants_path, int attempts, const std::string& mode) {
  if (numbers_path.empty() == constants_path.empty())
    throw std::invalid_argument("give exactly one of --numbers or --constants");
  QuadraticForm q = form_path.empty() ? load_constants(constants_path).form : load_form(form_path);
  SplitLocalCover cover = find_split_local_cover(q);
  CheckOptions opt;
  opt.attempts = attempts;
  opt.threads = g.threads;
  if (mode == "exact")
    opt.mode = BitsetMode::Exact;
  else if (mode == "approx")
    opt.mode = BitsetMode::Approximate;
  else
    throw std::invalid_argument("--mode must be approx or exact");

  json report;
  report["form"] = gram_json(q);
  report["cover"] = {{"d", cover.d}, {"T", gram_json(cover.T)}, {"verified_modulus", cover.verified_modulus}};
  if (!numbers_path.empty()) {
    auto numbers = read_numbers(numbers_path);
    CheckerReport r = check_with_fallback(cover, numbers, opt);
    report["checked"] = numbers.size();
    report["Y"] = r.approximate.Y;
    report["approximate_unresolved"] = r.approximate.unresolved.size();
    report["exceptions"] = r.exceptions;
  } else {
    BoundConstants c = load_constants(constants_path);
    if (!form_path.empty()) c = make_constants(q, c.C_f, c.C_E);
    auto filter = [&](const std::vector<uint64_t>& xs) { return check_with_fallback(cover, xs, opt).exceptions; };
    ClosureResult r = closure_loop(c, filter);
    json rounds = json::array();
    for (const auto& round : r.rounds)
      rounds.push_back({{"kind", round.kind}, {"candidates", round.candidates}, {"exceptions", round.exceptions}});
    report["rounds"] = rounds;
    report["eligible_primes"] = r.eligible_prime_count;
    report["exceptions"] = r.exceptions;
  }
  Sink sink(g, "check.json");
  sink.os() << report.dump(2) << "\n";
  return kDefinitive;
}

int run_classify(const Global& g, const std::string& form_path, bool type_b) {
  QuadraticForm q = load_form(form_path);
  json out;
  int code = kDefinitive;
  if (type_b) {
    TypeBResult r = higher_escalate_typeB(q, g.cap);
    out = to_json(r.classification);
    json seeds = json::array();
    for (const auto& s : r.seeds) {
      json forms = json::array();
      for (const auto& f : s.forms) forms.push_back(to_json(f));
      seeds.push_back({{"k", s.seed.k}, {"p", s.seed.p}, {"escalated_by", s.escalated_by}, {"forms", forms}});
    }
    out["escalations"] = seeds;
    out["escaped"] = r.escaped;
    if (!r.escaped.empty()) code = kUndecided;
  } else {
    out = to_json(classify(q, g.cap));
  }
  Sink sink(g, "classify.json");
  sink.os() << out.dump(2) << "\n";
  return code;
}

int run_pairs(const Global& g, std::vector<int64_t> ms, int max_dim, size_t escalation_cap, int64_t verify_bound,
              const std::string& reference_path) {
  if (ms.empty()) ms = {1, 2, 3, 5, 6, 7, 10, 14, 15};
  PipelineOptions opt;
  opt.max_dim = max_dim;
  opt.truant_cap = g.cap;
  opt.escalation_cap = escalation_cap;
  opt.verify_bound = verify_bound;
  opt.threads = g.threads;
  auto reference = load_reference_pairs(reference_path);
  PairTable table = enumerate_pairs(ms, reference, opt);

  json verdicts = json::array();
  for (const auto& row : table.rows) {
    if (row.dim == 0) continue;
    verdicts.push_back({{"pair", {row.m, row.n}},
                        {"witness", gram_json(*row.witness)},
                        {"dim", row.dim},
                        {"bound_checked", row.bound_checked},
                        {"method", row.method}});
  }
  if (!g.out.empty()) fs::create_directories(g.out);
  auto place = [&](const std::string& name) { return g.out.empty() ? name : (fs::path(g.out) / name).string(); };
  std::ofstream(place("pairs.json")) << verdicts.dump(2) << "\n";
  std::ofstream csv(place("pairs_table.csv"));
  csv << "m,n,dim,reference_dim,bound_checked,witness\n";
  for (const auto& row : table.rows)
    csv << row.m << "," << row.n << "," << row.dim << "," << row.expected_dim << "," << row.bound_checked << ",\""
        << (row.witness ? row.witness->str() : "") << "\"\n";

  json summary;
  summary["found"] = table.found();
  summary["matching_reference"] = table.matching_reference();
  json ranges = json::array();
  for (const auto& r : table.ranges)
    ranges.push_back({{"m", r.m}, {"n_max", r.n_max}, {"fixed_n", r.fixed_n}, {"candidates", r.candidates}});
  summary["ranges"] = ranges;
  json exhausted = json::array();
  for (const auto& b : table.exhausted) exhausted.push_back({{"pair", {b.m, b.n}}, {"note", b.note}});
  summary["exhausted"] = exhausted;
  json unverified = json::array();
  for (const auto& b : table.unverified) unverified.push_back({{"pair", {b.m, b.n}}, {"note", b.note}});
  summary["unverified"] = unverified;
  std::cout << summary.dump(2) << "\n";
  return table.exhausted.empty() && table.unverified.empty() ? kDefinitive : kUndecided;
}

int run_verify_halmos(const Global& g, const std::string& constants_path) {
  BoundConstants c = load_constants(constants_path);
  const QuadraticForm& q = c.form;
  json r;
  r["level"] = level(q);
  r["determinant"] = q.determinant();
  size_t mismatches = 0;
  for (int64_t m = 1; m <= 500; ++m) {
    mismatches += local_density(q, 2, m) != halmos_beta2(m);
    mismatches += local_density(q, 7, m) != halmos_beta7(m);
    mismatches += local_density(q, 13, m) != halmos_beta13(m);
  }
  r["closed_form_mismatches_to_500"] = mismatches;
  auto primes = eligible_primes(c);
  auto numbers = squarefree_eligible(c, primes);
  r["eligible_primes"] = primes.size();
  r["squarefree_eligible"] = numbers.size();
  r["max_squarefree"] = numbers.back();

  SplitLocalCover cover = find_split_local_cover(q);
  r["cover"] = {{"d", cover.d}, {"T", gram_json(cover.T)}};
  CheckOptions opt;
  opt.threads = g.threads;
  auto filter = [&](const std::vector<uint64_t>& xs) { return check_with_fallback(cover, xs, opt).exceptions; };
  ClosureResult closure = closure_loop(c, filter);
  json rounds = json::array();
  for (const auto& round : closure.rounds)
    rounds.push_back({{"kind", round.kind}, {"candidates", round.candidates}, {"exceptions", round.exceptions}});
  r["rounds"] = rounds;
  r["exceptions"] = closure.exceptions;
  Sink sink(g, "halmos.json");
  sink.os() << r.dump(2) << "\n";
  return mismatches == 0 ? kDefinitive : kUndecided;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic forms that miss a prescribed finite set"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--cap", g.cap, "truant and exception scan cap")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output directory");

  auto* esc = app.add_subcommand("escalate", "escalator tree as JSON lines");
  std::vector<int64_t> except;
  int max_dim = 4;
  esc->add_option("--except", except, "values the forms must miss")->delimiter(',');
  esc->add_option("--max-dim", max_dim)->check(CLI::Range(1, 6));

  auto* den = app.add_subcommand("densities", "local densities as CSV");
  std::string form_path;
  uint64_t prime = 2;
  std::string range = "1..100";
  den->add_option("--form", form_path)->required();
  den->add_option("--prime", prime)->required();
  den->add_option("--m-range", range);

  auto* eli = app.add_subcommand("eligible", "eligible primes and squarefree numbers");
  std::string constants_path;
  std::string emit;
  eli->add_option("--constants", constants_path)->required();
  eli->add_option("--emit", emit, "primes.csv,numbers.bin");

  auto* chk = app.add_subcommand("check", "representation check through a split cover");
  std::string numbers_path;
  int attempts = 5;
  std::string mode = "approx";
  chk->add_option("--form", form_path);
  chk->add_option("--numbers", numbers_path, "ELG1 numbers file");
  chk->add_option("--constants", constants_path, "run the eligible closure loop instead");
  chk->add_option("--c", attempts, "values of x tried per number")->check(CLI::PositiveNumber);
  chk->add_option("--mode", mode)->check(CLI::IsMember({"approx", "exact"}));

  auto* cls = app.add_subcommand("classify", "type A/B/C classification");
  bool type_b = false;
  cls->add_option("--form", form_path)->required();
  cls->add_flag("--escalate-families", type_b, "escalate type B forms by their family seeds");

  auto* prs = app.add_subcommand("pairs", "pair search over the critical m");
  std::vector<int64_t> ms;
  int pair_dim = 5;
  size_t escalation_cap = 2000000;
  int64_t verify_bound = 100000;
  std::string reference_path = std::string(QFORMS_DATA_DIR) + "/reference_pairs.json";
  prs->add_option("--m", ms, "critical m (default all)")->delimiter(',');
  prs->add_option("--max-dim", pair_dim)->check(CLI::Range(4, 6));
  prs->add_option("--escalation-cap", escalation_cap);
  prs->add_option("--verify-bound", verify_bound);
  prs->add_option("--reference", reference_path);

  auto* hal = app.add_subcommand("verify-halmos", "level, densities, eligibility and closure for diag(1,2,7,13)");
  std::string halmos_path = std::string(QFORMS_DATA_DIR) + "/halmos.json";
  hal->add_option("--constants", halmos_path);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*esc) return run_escalate(g, except, max_dim);
    if (*den) return run_densities(g, form_path, prime, range);
    if (*eli) return run_eligible(g, constants_path, emit);
    if (*chk) return run_check(g, form_path, numbers_path, constants_path, attempts, mode);
    if (*cls) return run_classify(g, form_path, type_b);
    if (*prs) return run_pairs(g, ms, pair_dim, escalation_cap, verify_bound, reference_path);
    if (*hal) return run_verify_halmos(g, halmos_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
