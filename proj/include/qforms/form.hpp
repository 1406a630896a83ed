#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qforms/lattice.hpp"
#include "qforms/matrix.hpp"

namespace qforms {

inline constexpr int kMaxFormDim = 6;

/// Classically integral positive definite quadratic form Q(x) = x^T A x,
/// stored by its integer Gram matrix A. Dimension 0 is the trivial lattice.
class QuadraticForm {
 public:
  QuadraticForm() = default;
  explicit QuadraticForm(IntMatrix gram);
  static QuadraticForm diagonal(const std::vector<int64_t>& entries);
  static QuadraticForm from_rows(const std::vector<std::vector<int64_t>>& rows);

  [[nodiscard]] int dim() const { return gram_.rows(); }
  [[nodiscard]] const IntMatrix& gram() const { return gram_; }
  [[nodiscard]] int64_t entry(int i, int j) const { return gram_(i, j); }
  [[nodiscard]] int64_t determinant() const { return det_; }
  [[nodiscard]] std::string str() const { return gram_.str(); }

  friend bool operator==(const QuadraticForm& a, const QuadraticForm& b) { return a.gram_ == b.gram_; }
  friend auto operator<=>(const QuadraticForm& a, const QuadraticForm& b) { return a.gram_ <=> b.gram_; }

 private:
  IntMatrix gram_;
  int64_t det_ = 1;
};

/// Sorted finite set of positive integers.
class ExceptionTarget {
 public:
  ExceptionTarget() = default;
  ExceptionTarget(std::initializer_list<int64_t> values);
  explicit ExceptionTarget(std::vector<int64_t> values);

  [[nodiscard]] bool contains(int64_t m) const;
  [[nodiscard]] const std::vector<int64_t>& values() const { return values_; }
  [[nodiscard]] bool empty() const { return values_.empty(); }
  [[nodiscard]] size_t size() const { return values_.size(); }
  [[nodiscard]] std::string str() const;
  [[nodiscard]] ExceptionTarget with(int64_t m) const;

  friend bool operator==(const ExceptionTarget&, const ExceptionTarget&) = default;

 private:
  std::vector<int64_t> values_;
};

int64_t evaluate(const QuadraticForm& q, std::span<const int64_t> x);
inline int64_t determinant(const QuadraticForm& q) { return q.determinant(); }

/// Least N >= 1 with N (2A)^{-1} integral and of even diagonal.
int64_t level(const QuadraticForm& q);

/// Kronecker symbol (D | p) for a prime p not dividing 2N.
int character(const QuadraticForm& q, uint64_t p);

/// Reduced representative and the unimodular change of basis.
struct ReducedForm {
  QuadraticForm form;
  IntMatrix basis;
};
ReducedForm reduce(const QuadraticForm& q);

/// Exact GL_n(Z) equivalence.
bool is_equivalent(const QuadraticForm& a, const QuadraticForm& b);

/// Explicit M with M^T A_b M = A_a if the forms are equivalent.
std::optional<IntMatrix> find_isometry(const QuadraticForm& a, const QuadraticForm& b);

/// Q restricted to the sublattice spanned by the columns of basis.
QuadraticForm sublattice(const QuadraticForm& q, const IntMatrix& basis);

/// Orthogonal sum.
QuadraticForm direct_sum(const QuadraticForm& a, const QuadraticForm& b);

nlohmann::json to_json(const QuadraticForm& q, bool include_reduced = true);
QuadraticForm form_from_json(const nlohmann::json& j);
QuadraticForm load_form(const std::string& path);

}  // namespace qforms
