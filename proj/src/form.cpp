#include "qforms/form.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qforms {

QuadraticForm::QuadraticForm(IntMatrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) throw std::invalid_argument("Gram matrix must be square");
  if (gram_.rows() > kMaxFormDim) throw std::invalid_argument("dimension above 6 is not supported");
  if (!gram_.is_symmetric()) throw std::invalid_argument("Gram matrix must be symmetric");
  for (int k = 1; k <= gram_.rows(); ++k) {
    if (gram_.leading(k).determinant() <= 0) throw std::invalid_argument("form is not positive definite");
  }
  det_ = narrow(gram_.determinant());
}

QuadraticForm QuadraticForm::diagonal(const std::vector<int64_t>& entries) {
  const int n = static_cast<int>(entries.size());
  IntMatrix g(n, n);
  for (int i = 0; i < n; ++i) g(i, i) = entries[i];
  return QuadraticForm(g);
}

QuadraticForm QuadraticForm::from_rows(const std::vector<std::vector<int64_t>>& rows) {
  return QuadraticForm(IntMatrix::from_rows(rows));
}

ExceptionTarget::ExceptionTarget(std::initializer_list<int64_t> values)
    : ExceptionTarget(std::vector<int64_t>(values)) {}

ExceptionTarget::ExceptionTarget(std::vector<int64_t> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  for (int64_t v : values_)
    if (v <= 0) throw std::invalid_argument("exception targets must be positive");
}

bool ExceptionTarget::contains(int64_t m) const {
  return std::binary_search(values_.begin(), values_.end(), m);
}

std::string ExceptionTarget::str() const {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < values_.size(); ++i) os << (i ? "," : "") << values_[i];
  os << '}';
  return os.str();
}

ExceptionTarget ExceptionTarget::with(int64_t m) const {
  auto v = values_;
  v.push_back(m);
  return ExceptionTarget(std::move(v));
}

int64_t evaluate(const QuadraticForm& q, std::span<const int64_t> x) {
  if (static_cast<int>(x.size()) != q.dim()) throw std::invalid_argument("vector length does not match dimension");
  i128 v = 0;
  for (int i = 0; i < q.dim(); ++i)
    for (int j = 0; j < q.dim(); ++j) v += static_cast<i128>(x[i]) * q.entry(i, j) * x[j];
  return narrow(v);
}

int64_t level(const QuadraticForm& q) {
  const int n = q.dim();
  if (n == 0) return 1;
  const int64_t d = q.determinant();
  IntMatrix adj = q.gram().adjugate();
  int64_t lvl = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // N * adj_ij / (2D) integral off the diagonal, N * adj_ii / (2D) even on it
      int64_t den = (i == j) ? 4 * d : 2 * d;
      int64_t g = gcd64(adj(i, j), den);
      lvl = lcm64(lvl, den / g);
    }
  }
  return lvl;
}

int character(const QuadraticForm& q, uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("character needs a prime");
  if ((2 * level(q)) % static_cast<int64_t>(p) == 0) throw std::invalid_argument("prime divides 2N");
  return kronecker(q.determinant(), static_cast<int64_t>(p));
}

ReducedForm reduce(const QuadraticForm& q) {
  if (q.dim() == 0) return {q, IntMatrix()};
  Reduction r = reduce_gram(q.gram());
  return {QuadraticForm(r.gram), r.basis};
}

QuadraticForm sublattice(const QuadraticForm& q, const IntMatrix& basis) {
  return QuadraticForm(congruence(q.gram(), basis));
}

QuadraticForm direct_sum(const QuadraticForm& a, const QuadraticForm& b) {
  const int n = a.dim() + b.dim();
  IntMatrix g(n, n);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) g(i, j) = a.entry(i, j);
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) g(a.dim() + i, a.dim() + j) = b.entry(i, j);
  return QuadraticForm(g);
}

namespace {

IntMatrix unimodular_inverse(const IntMatrix& u) {
  i128 det = u.determinant();
  IntMatrix adj = u.adjugate();
  if (det == -1) {
    for (int i = 0; i < adj.rows(); ++i)
      for (int j = 0; j < adj.cols(); ++j) adj(i, j) = -adj(i, j);
  } else if (det != 1) {
    throw std::invalid_argument("matrix is not unimodular");
  }
  return adj;
}

std::vector<int64_t> theta_prefix(const IntMatrix& g, int64_t bound) {
  std::vector<int64_t> counts(bound + 1, 0);
  for_each_vector(g, bound, [&](int64_t v, const int64_t*) { ++counts[v]; });
  return counts;
}

struct Candidate {
  std::vector<int64_t> v;
  std::vector<int64_t> bv;  // B v
};

// Column images for a' = M^T b' M, by backtracking over vectors of b' whose
// norms match the diagonal of a'.
std::optional<IntMatrix> search_isometry(const IntMatrix& a, const IntMatrix& b) {
  const int n = a.rows();
  int64_t max_norm = 0;
  for (int i = 0; i < n; ++i) max_norm = std::max(max_norm, a(i, i));
  std::map<int64_t, std::vector<Candidate>> by_norm;
  for_each_vector(b, max_norm, [&](int64_t v, const int64_t* z) {
    if (v == 0) return;
    bool wanted = false;
    for (int i = 0; i < n; ++i) wanted |= a(i, i) == v;
    if (!wanted) return;
    Candidate c;
    c.v.assign(z, z + n);
    c.bv.assign(n, 0);
    for (int i = 0; i < n; ++i) {
      i128 s = 0;
      for (int j = 0; j < n; ++j) s += static_cast<i128>(b(i, j)) * z[j];
      c.bv[i] = narrow(s);
    }
    by_norm[v].push_back(std::move(c));
  });
  for (int i = 0; i < n; ++i)
    if (by_norm[a(i, i)].empty()) return std::nullopt;

  std::vector<const Candidate*> chosen(n, nullptr);
  auto dot = [&](const Candidate& x, const Candidate& y) {
    i128 s = 0;
    for (int k = 0; k < n; ++k) s += static_cast<i128>(x.v[k]) * y.bv[k];
    return s;
  };
  auto first_positive = [&](const Candidate& c) {
    for (int64_t x : c.v)
      if (x != 0) return x > 0;
    return false;
  };
  auto rec = [&](auto&& self, int col) -> bool {
    if (col == n) return true;
    for (const Candidate& c : by_norm[a(col, col)]) {
      // the image of the first column may be taken up to sign
      if (col == 0 && !first_positive(c)) continue;
      bool ok = true;
      for (int j = 0; j < col && ok; ++j) ok = dot(*chosen[j], c) == a(j, col);
      if (!ok) continue;
      chosen[col] = &c;
      if (self(self, col + 1)) return true;
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  IntMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = chosen[j]->v[i];
  return m;
}

}  // namespace

std::optional<IntMatrix> find_isometry(const QuadraticForm& a, const QuadraticForm& b) {
  if (a.dim() != b.dim()) return std::nullopt;
  const int n = a.dim();
  if (n == 0) return IntMatrix();
  if (a.determinant() != b.determinant()) return std::nullopt;
  ReducedForm ra = reduce(a);
  ReducedForm rb = reduce(b);
  IntMatrix inner;
  if (ra.form == rb.form) {
    inner = IntMatrix::identity(n);
  } else {
    int64_t max_diag = 0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, ra.form.entry(i, i));
    int64_t bound = 2 * max_diag;
    if (theta_prefix(ra.form.gram(), bound) != theta_prefix(rb.form.gram(), bound)) return std::nullopt;
    auto m = search_isometry(ra.form.gram(), rb.form.gram());
    if (!m) return std::nullopt;
    inner = *m;
  }
  // ra = Ua^T A Ua, rb = Ub^T B Ub, ra = inner^T rb inner
  // => A = (Ub inner Ua^{-1})^T B (Ub inner Ua^{-1})
  IntMatrix m = rb.basis * inner * unimodular_inverse(ra.basis);
  if (congruence(b.gram(), m) != a.gram()) throw std::logic_error("isometry check failed");
  return m;
}

bool is_equivalent(const QuadraticForm& a, const QuadraticForm& b) {
  return find_isometry(a, b).has_value();
}

nlohmann::json to_json(const QuadraticForm& q, bool include_reduced) {
  nlohmann::json j;
  j["dim"] = q.dim();
  j["gram"] = q.gram().to_rows();
  if (include_reduced && q.dim() > 0) j["reduced"] = reduce(q).form.gram().to_rows();
  return j;
}

QuadraticForm form_from_json(const nlohmann::json& j) {
  const nlohmann::json& src = j.contains("form") ? j.at("form") : j;
  auto rows = src.at("gram").get<std::vector<std::vector<int64_t>>>();
  QuadraticForm q = QuadraticForm::from_rows(rows);
  if (src.contains("dim") && src.at("dim").get<int>() != q.dim())
    throw std::invalid_argument("declared dim does not match Gram matrix");
  return q;
}

QuadraticForm load_form(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return form_from_json(nlohmann::json::parse(in));
}

}  // namespace qforms
