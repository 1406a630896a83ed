#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qforms/form.hpp"
#include "qforms/rational.hpp"

namespace qforms {

/// One Jordan component p^scale * Q_j. Q_j is a x^2 (dim 1, a a p-unit) or,
/// for p = 2 only, a x^2 + b xy + c y^2 with b odd (dim 2).
struct JordanBlock {
  int scale = 0;
  int dim = 1;
  int64_t a = 1;
  int64_t b = 0;
  int64_t c = 0;

  [[nodiscard]] i128 value(const int64_t* x) const;
  [[nodiscard]] std::string str() const;
};

struct JordanDecomposition {
  uint64_t p = 2;
  std::vector<JordanBlock> blocks;

  [[nodiscard]] int dim() const;
  /// number of coordinates in blocks of scale 0, 1, and >= 2
  [[nodiscard]] int s0() const;
  [[nodiscard]] int s1() const;
  [[nodiscard]] int s2() const;
  /// The integer form sum_j p^scale_j Q_j as a Gram matrix times 2 (so that
  /// 2-dim blocks with odd b stay integral).
  [[nodiscard]] IntMatrix doubled_gram() const;
  [[nodiscard]] i128 value(const int64_t* x) const;
};

/// Splitting of Q over Z_p into blocks of dimension <= 2 (dimension 1 for odd p).
/// The integer lifts are Z_p-equivalent to the true components.
JordanDecomposition jordan_decompose(const QuadraticForm& q, uint64_t p);

enum class SolutionType { All, Zero, Good, Bad };

/// #{x mod p^v : Q(x) = m mod p^v}, brute force on the Gram matrix. Throws
/// ResourceLimit above `cap` work units (about p^{(n-1)v} steps).
int64_t count_mod(const QuadraticForm& q, uint64_t p, int v, int64_t m, double cap = 2e9);

/// All residues at once: result[r] = #{x mod p^v : Q(x) = r}.
std::vector<int64_t> count_mod_histogram(const QuadraticForm& q, uint64_t p, int v, double cap = 2e9);

/// Type-restricted count, by brute force on the Jordan integer form (types
/// are defined in Jordan coordinates). Work is p^{nv}.
int64_t count_mod_typed(const JordanDecomposition& j, int v, int64_t m, SolutionType type, double cap = 1e8);

/// Level from which r_{p^v}(m) / p^{v(n-1)} is constant.
int stable_level(uint64_t p, int64_t m);

struct DensityBreakdown {
  Rational good;
  Rational zero;
  Rational bad;
};

/// Exact local density beta_p(m) via the Good/Zero/Bad reduction maps, for
/// m >= 1. Works for any dimension.
Rational local_density(const JordanDecomposition& j, int64_t m, DensityBreakdown* breakdown = nullptr);
Rational local_density(const QuadraticForm& q, uint64_t p, int64_t m, DensityBreakdown* breakdown = nullptr);

/// Closed form for an odd prime p not dividing D, quaternary Q:
/// (1 - chi(p)/p^2) * sum_{i <= ord_p m} (chi(p)/p)^i.
Rational unimodular_density(const QuadraticForm& q, uint64_t p, int64_t m);

/// beta_infinity(m) = coefficient * pi^2 / sqrt(D) for a quaternary form.
struct ArchimedeanDensity {
  Rational coefficient;
  int64_t det = 1;
  [[nodiscard]] std::string str() const;
};
ArchimedeanDensity beta_infinity(const QuadraticForm& q, int64_t m);

struct DensityReport {
  int64_t m = 0;
  struct Entry {
    uint64_t p;
    Rational beta;
    DensityBreakdown breakdown;
  };
  std::vector<Entry> primes;
  ArchimedeanDensity beta_inf;
  bool locally_represented = true;
};

/// Densities at every prime dividing 2 D m.
DensityReport density_report(const QuadraticForm& q, int64_t m);

/// Primes that can carry a local obstruction or anisotropy: those dividing 2D.
std::vector<uint64_t> bad_primes(const QuadraticForm& q);

bool is_locally_represented(const QuadraticForm& q, int64_t m);

/// A p-adic class (p, p^e * u) never represented, if any. Only meaningful
/// for dim >= 4 where primes outside 2D never obstruct.
struct LocalObstruction {
  uint64_t p;
  int64_t witness;  // smallest positive representative of the class
};
std::optional<LocalObstruction> find_local_obstruction(const QuadraticForm& q);

/// Per prime p | 2D: whether beta_p(p^e u) > 0 depends only on e and the
/// square class of u; this caches that table.
class LocalRepresentability {
 public:
  explicit LocalRepresentability(const QuadraticForm& q);
  [[nodiscard]] bool represented(int64_t m) const;
  [[nodiscard]] const std::vector<uint64_t>& primes() const { return primes_; }

 private:
  struct Table {
    uint64_t p;
    int max_exponent;
    // ok[e][class]; class is u mod 8 index (p = 2) or 0/1 residue/non-residue
    std::vector<std::vector<bool>> ok;
  };
  std::vector<uint64_t> primes_;
  std::vector<Table> tables_;
};

/// Hilbert symbol (a, b)_p for nonzero integers.
int hilbert_symbol(i128 a, i128 b, uint64_t p);

/// Primes p where Q = 0 has only the trivial solution over Q_p (dim 4).
std::vector<uint64_t> anisotropic_primes(const QuadraticForm& q);

}  // namespace qforms
