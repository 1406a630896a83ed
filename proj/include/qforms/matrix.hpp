#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "qforms/arith.hpp"

namespace qforms {

/// Small dense integer matrix, row-major. Products use 128-bit accumulation
/// and throw std::overflow_error if an entry leaves int64 range.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<int64_t>> rows);
  static IntMatrix identity(int n);
  static IntMatrix from_rows(const std::vector<std::vector<int64_t>>& rows);

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  int64_t& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  int64_t operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }
  [[nodiscard]] std::span<const int64_t> flat() const { return data_; }
  [[nodiscard]] std::vector<int64_t> column(int j) const;
  [[nodiscard]] std::vector<std::vector<int64_t>> to_rows() const;

  [[nodiscard]] IntMatrix transpose() const;
  [[nodiscard]] bool is_symmetric() const;
  [[nodiscard]] IntMatrix leading(int k) const;

  /// Exact determinant (fraction-free Bareiss).
  [[nodiscard]] i128 determinant() const;
  /// Adjugate matrix; A * adj(A) = det(A) * I.
  [[nodiscard]] IntMatrix adjugate() const;

  void swap_columns(int a, int b);
  /// column a += k * column b
  void add_column(int a, int b, int64_t k);
  void negate_column(int a);

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;
  friend auto operator<=>(const IntMatrix& a, const IntMatrix& b) {
    return a.data_ <=> b.data_;
  }

  [[nodiscard]] std::string str() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int64_t> data_;
};

/// U^T * G * U
IntMatrix congruence(const IntMatrix& g, const IntMatrix& u);

/// Unimodular n x n matrix U with w^T U = (g, 0, ..., 0), g = gcd(w) > 0.
/// Columns 1..n-1 of U span the integer kernel of w^T.
IntMatrix kernel_completion(std::span<const int64_t> w, int64_t& g);

}  // namespace qforms
