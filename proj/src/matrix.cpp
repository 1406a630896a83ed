#include "qforms/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace qforms {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<int64_t>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("ragged matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<int64_t>>& rows) {
  IntMatrix m;
  m.rows_ = static_cast<int>(rows.size());
  m.cols_ = m.rows_ ? static_cast<int>(rows[0].size()) : 0;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != m.cols_) throw std::invalid_argument("ragged matrix");
    m.data_.insert(m.data_.end(), r.begin(), r.end());
  }
  return m;
}

std::vector<int64_t> IntMatrix::column(int j) const {
  std::vector<int64_t> c(rows_);
  for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

std::vector<std::vector<int64_t>> IntMatrix::to_rows() const {
  std::vector<std::vector<int64_t>> out(rows_, std::vector<int64_t>(cols_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool IntMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

IntMatrix IntMatrix::leading(int k) const {
  IntMatrix m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = (*this)(i, j);
  return m;
}

i128 IntMatrix::determinant() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
  const int n = rows_;
  if (n == 0) return 1;
  std::vector<i128> a(data_.begin(), data_.end());
  auto at = [&](int i, int j) -> i128& { return a[static_cast<size_t>(i) * n + j]; };
  i128 sign = 1;
  i128 prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (at(r, k) != 0) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        i128 v;
        i128 t1, t2;
        if (__builtin_mul_overflow(at(i, j), at(k, k), &t1) ||
            __builtin_mul_overflow(at(i, k), at(k, j), &t2) || __builtin_sub_overflow(t1, t2, &v))
          throw std::overflow_error("determinant overflow");
        at(i, j) = v / prev;
      }
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

IntMatrix IntMatrix::adjugate() const {
  const int n = rows_;
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (int r = 0, mr = 0; r < n; ++r) {
        if (r == j) continue;
        for (int c = 0, mc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(mr, mc++) = (*this)(r, c);
        }
        ++mr;
      }
      i128 cof = minor.determinant();
      adj(i, j) = narrow(((i + j) % 2 == 0) ? cof : -cof);
    }
  }
  return adj;
}

void IntMatrix::swap_columns(int a, int b) {
  for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_column(int a, int b, int64_t k) {
  for (int i = 0; i < rows_; ++i)
    (*this)(i, a) = narrow(static_cast<i128>((*this)(i, a)) + static_cast<i128>(k) * (*this)(i, b));
}

void IntMatrix::negate_column(int a) {
  for (int i = 0; i < rows_; ++i) (*this)(i, a) = -(*this)(i, a);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < b.cols_; ++j) {
      i128 s = 0;
      for (int k = 0; k < a.cols_; ++k) s += static_cast<i128>(a(i, k)) * b(k, j);
      c(i, j) = narrow(s);
    }
  return c;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < rows_; ++i) {
    if (i) os << ',';
    os << '[';
    for (int j = 0; j < cols_; ++j) {
      if (j) os << ',';
      os << (*this)(i, j);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix congruence(const IntMatrix& g, const IntMatrix& u) {
  return u.transpose() * g * u;
}

IntMatrix kernel_completion(std::span<const int64_t> w, int64_t& g) {
  const int n = static_cast<int>(w.size());
  IntMatrix u = IntMatrix::identity(n);
  std::vector<int64_t> row(w.begin(), w.end());
  // Column operations on [row; U] until row = (g, 0, ..., 0).
  for (int j = 1; j < n; ++j) {
    while (row[j] != 0) {
      if (row[0] == 0 || std::llabs(row[j]) < std::llabs(row[0])) {
        std::swap(row[0], row[j]);
        u.swap_columns(0, j);
        continue;
      }
      int64_t q = row[j] / row[0];
      row[j] -= q * row[0];
      u.add_column(j, 0, -q);
    }
  }
  if (row[0] < 0) {
    row[0] = -row[0];
    u.negate_column(0);
  }
  g = row[0];
  return u;
}

}  // namespace qforms
