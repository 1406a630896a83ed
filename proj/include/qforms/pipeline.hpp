#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qforms/escalator.hpp"
#include "qforms/local_density.hpp"

namespace qforms {

enum class FormKind { TypeA, TypeB, TypeC };
std::string to_string(FormKind k);

/// F_k = {k p^(j * step) : j >= 0}
struct FamilySeed {
  int64_t k;
  uint64_t p;
  int step;  // 1 or 2
  [[nodiscard]] bool contains(int64_t m) const;
};

struct FormClassification {
  QuadraticForm form;
  FormKind kind = FormKind::TypeA;
  int64_t bound = 0;                // exceptions scanned up to here
  std::vector<int64_t> exceptions;  // all of them, up to bound
  std::vector<uint64_t> anisotropic;
  std::vector<FamilySeed> seeds;                 // TypeB
  std::vector<int64_t> outside_families;         // exceptions not in any seed family
  std::optional<LocalObstruction> obstruction;   // TypeC
};

/// TypeC on a local obstruction, TypeB when exceptions up to `bound` contain
/// a chain k, k p^s, k p^2s, ... (at least `min_chain` terms, every term up to
/// the bound missing) for an anisotropic p, TypeA otherwise.
FormClassification classify(const QuadraticForm& q, int64_t bound = 10000, int min_chain = 3);

nlohmann::json to_json(const FormClassification& c);

/// Search limits for the higher-dimensional steps.
struct PipelineOptions {
  int max_dim = 5;
  int64_t truant_cap = 10000;
  size_t escalation_cap = 2000000;  // escalations examined per pair
  int64_t verify_bound = 100000;   // exact theta check of every pair witness
  int threads = 1;
};

/// Whether w misses exactly m and n among 1..bound (exact theta).
bool verify_pair_witness(const QuadraticForm& w, int64_t m, int64_t n, int64_t bound);

enum class PairOutcome { Achieved, Impossible, Exhausted };
std::string to_string(PairOutcome o);

struct PairVerdict {
  int64_t m = 0;
  int64_t n = 0;
  PairOutcome outcome = PairOutcome::Impossible;
  std::optional<QuadraticForm> witness;
  int dim = 0;
  int64_t bound_checked = 0;
  std::vector<std::string> method;
  size_t examined = 0;
};

nlohmann::json to_json(const PairVerdict& v);

/// Escalates q by its truant relative to {m, n}, keeping forms that still miss
/// m and n, until a form misses nothing else up to the truant cap (Achieved),
/// every branch represents m or n (Impossible), or a cap is hit (Exhausted).
PairVerdict higher_escalate_typeA(const QuadraticForm& q, int64_t m, int64_t n, const PipelineOptions& options = {});

struct TypeBResult {
  FormClassification classification;
  /// per seed: TypeA escalations by k (or k p when k alone gives none)
  struct SeedEscalation {
    FamilySeed seed;
    int64_t escalated_by = 0;
    std::vector<FormClassification> forms;
  };
  std::vector<SeedEscalation> seeds;
  /// exceptions outside every family in the top half of the scan window;
  /// these contradict the family picture and need review
  std::vector<int64_t> escaped;
};
TypeBResult higher_escalate_typeB(const QuadraticForm& q, int64_t bound = 10000);

/// Rank-4 sublattice of a quinary form without local obstructions: first the
/// coordinate hyperplanes (dropping e5, e4, ...), then kernels of primitive
/// functionals with coefficients in [-box, box] by increasing L1 norm.
struct SubformSwitch {
  QuadraticForm form;
  IntMatrix basis;  // 5 x 4, basis^T A basis = form
  std::vector<int64_t> functional;
};
std::optional<SubformSwitch> subform_switch(const QuadraticForm& quinary, int box = 2);

struct PairRow {
  int64_t m = 0;
  int64_t n = 0;
  int dim = 0;           // dimension of the witness found, 0 if none
  int expected_dim = 0;  // reference table, 0 if the pair is not listed
  std::optional<QuadraticForm> witness;
  int64_t bound_checked = 0;
  std::vector<std::string> method;
};

struct PairTable {
  std::vector<PairRow> rows;  // sorted by (m, n)
  struct Branch {
    int64_t m;
    int64_t n;
    std::string note;
  };
  std::vector<Branch> exhausted;
  /// witnesses that failed the exact check up to verify_bound
  std::vector<Branch> unverified;
  /// candidate range used per m, and whether the fixed-n mode was needed
  struct Range {
    int64_t m;
    int64_t n_max;
    bool fixed_n;
    size_t candidates;
  };
  std::vector<Range> ranges;

  [[nodiscard]] size_t found() const;
  [[nodiscard]] size_t matching_reference() const;
};

struct ReferencePair {
  int64_t m;
  int64_t n;
  int dim;
};
std::vector<ReferencePair> load_reference_pairs(const std::string& path);

/// Critical-m pair search: escalation with S = {m}, a candidate range for n,
/// escalation with S = {m, n} to dim 4, then higher escalation of the leftover
/// quaternaries. Rows for reference pairs without a witness are kept with dim 0.
PairTable enumerate_pairs(const std::vector<int64_t>& critical, const std::vector<ReferencePair>& reference,
                          const PipelineOptions& options = {});

/// Candidate n for one m and how the range was chosen.
struct CandidateRange {
  int64_t n_max = 0;
  bool fixed_n = false;
  std::vector<int64_t> n;
};
CandidateRange candidate_range(int64_t m, const PipelineOptions& options = {});

}  // namespace qforms
