#include "dmt/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace dmt {

Mat Mat::identity(FieldPtr k, size_t n) {
  Mat m(std::move(k), n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::from_rows(FieldPtr k, const std::vector<std::vector<uint8_t>>& rows) {
  size_t nc = rows.empty() ? 0 : rows[0].size();
  Mat m(std::move(k), rows.size(), nc);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != nc) throw std::invalid_argument("ragged row list");
    for (size_t j = 0; j < nc; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

Mat Mat::from_cols(FieldPtr k, const std::vector<std::vector<uint8_t>>& cols) {
  size_t nr = cols.empty() ? 0 : cols[0].size();
  Mat m(std::move(k), nr, cols.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != nr) throw std::invalid_argument("ragged column list");
    for (size_t i = 0; i < nr; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

Mat Mat::operator*(const Mat& o) const {
  require_same_field(*k_, *o.k_);
  if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
  Mat r(k_, rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t t = 0; t < cols_; ++t) {
      uint8_t c = at(i, t);
      if (!c) continue;
      for (size_t j = 0; j < o.cols_; ++j)
        r.at(i, j) = k_->add(r.at(i, j), k_->mul(c, o.at(t, j)));
    }
  return r;
}

std::vector<uint8_t> Mat::apply(const std::vector<uint8_t>& v) const {
  if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
  std::vector<uint8_t> r(rows_, 0);
  for (size_t i = 0; i < rows_; ++i) {
    uint8_t acc = 0;
    for (size_t j = 0; j < cols_; ++j)
      if (at(i, j) && v[j]) acc = k_->add(acc, k_->mul(at(i, j), v[j]));
    r[i] = acc;
  }
  return r;
}

Mat Mat::transpose() const {
  Mat r(k_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

Mat Mat::stacked_below(const Mat& o) const {
  require_same_field(*k_, *o.k_);
  if (cols_ != o.cols_) throw std::invalid_argument("column count mismatch");
  Mat r(k_, rows_ + o.rows_, cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
  for (size_t i = 0; i < o.rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
  return r;
}

Rref rref(const Mat& A) {
  const Field& k = *A.field();
  Rref f{A, Mat::identity(A.field(), A.rows()), {}};
  Mat& R = f.R;
  Mat& E = f.E;
  size_t row = 0;
  for (size_t col = 0; col < A.cols() && row < A.rows(); ++col) {
    size_t piv = row;
    while (piv < A.rows() && R.at(piv, col) == 0) ++piv;
    if (piv == A.rows()) continue;
    if (piv != row) {
      for (size_t j = 0; j < R.cols(); ++j) std::swap(R.at(row, j), R.at(piv, j));
      for (size_t j = 0; j < E.cols(); ++j) std::swap(E.at(row, j), E.at(piv, j));
    }
    uint8_t inv = k.inv(R.at(row, col));
    if (inv != 1) {
      for (size_t j = 0; j < R.cols(); ++j) R.at(row, j) = k.mul(inv, R.at(row, j));
      for (size_t j = 0; j < E.cols(); ++j) E.at(row, j) = k.mul(inv, E.at(row, j));
    }
    for (size_t i = 0; i < A.rows(); ++i) {
      if (i == row) continue;
      uint8_t c = R.at(i, col);
      if (!c) continue;
      for (size_t j = 0; j < R.cols(); ++j)
        R.at(i, j) = k.sub(R.at(i, j), k.mul(c, R.at(row, j)));
      for (size_t j = 0; j < E.cols(); ++j)
        E.at(i, j) = k.sub(E.at(i, j), k.mul(c, E.at(row, j)));
    }
    f.pivot_cols.push_back(col);
    ++row;
  }
  return f;
}

size_t rank(const Mat& A) { return rref(A).rank(); }

LinearSolver::LinearSolver(Mat A) : A_(std::move(A)), f_(rref(A_)) {
  // kernel from the reduced form: one basis vector per free column
  const Field& k = *A_.field();
  std::vector<bool> is_pivot(A_.cols(), false);
  for (size_t c : f_.pivot_cols) is_pivot[c] = true;
  for (size_t free = 0; free < A_.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<uint8_t> v(A_.cols(), 0);
    v[free] = 1;
    for (size_t r = 0; r < f_.pivot_cols.size(); ++r)
      v[f_.pivot_cols[r]] = k.neg(f_.R.at(r, free));
    kernel_.push_back(std::move(v));
  }
}

std::optional<std::vector<uint8_t>> LinearSolver::particular(
    const std::vector<uint8_t>& b) const {
  if (b.size() != A_.rows()) throw std::invalid_argument("rhs length mismatch");
  std::vector<uint8_t> eb = f_.E.apply(b);
  for (size_t i = f_.rank(); i < eb.size(); ++i)
    if (eb[i]) return std::nullopt;
  std::vector<uint8_t> x(A_.cols(), 0);
  for (size_t r = 0; r < f_.pivot_cols.size(); ++r) x[f_.pivot_cols[r]] = eb[r];
  return x;
}

std::vector<std::vector<uint8_t>> LinearSolver::all_solutions(
    const std::vector<uint8_t>& b, size_t cap) const {
  auto x0 = particular(b);
  if (!x0) return {};
  long q = A_.field()->order();
  size_t count = 1;
  for (size_t i = 0; i < kernel_.size(); ++i) {
    if (count > cap / static_cast<size_t>(q))
      throw cap_error("solution set size " + std::to_string(kernel_.size()) +
                      "-dimensional over F_" + std::to_string(q) + " exceeds cap " +
                      std::to_string(cap));
    count *= q;
  }
  const Field& k = *A_.field();
  std::vector<std::vector<uint8_t>> out;
  out.reserve(count);
  std::vector<uint8_t> t(kernel_.size(), 0);
  do {
    std::vector<uint8_t> x = *x0;
    for (size_t i = 0; i < kernel_.size(); ++i)
      if (t[i])
        for (size_t j = 0; j < x.size(); ++j)
          x[j] = k.add(x[j], k.mul(t[i], kernel_[i][j]));
    out.push_back(std::move(x));
  } while (increment_tuple(t, q));
  return out;
}

std::optional<std::vector<uint8_t>> solve(const Mat& A, const std::vector<uint8_t>& b) {
  return LinearSolver(A).particular(b);
}

std::vector<std::vector<uint8_t>> kernel_basis(const Mat& A) {
  return LinearSolver(A).kernel();
}

std::optional<Mat> inverse(const Mat& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("inverse of non-square matrix");
  Rref f = rref(A);
  if (f.rank() != A.rows()) return std::nullopt;
  return f.E;
}

std::vector<uint8_t> vec_add(const Field& k, const std::vector<uint8_t>& a,
                             const std::vector<uint8_t>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  std::vector<uint8_t> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = k.add(a[i], b[i]);
  return r;
}

std::vector<uint8_t> vec_sub(const Field& k, const std::vector<uint8_t>& a,
                             const std::vector<uint8_t>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  std::vector<uint8_t> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = k.sub(a[i], b[i]);
  return r;
}

std::vector<uint8_t> vec_scale(const Field& k, uint8_t c, const std::vector<uint8_t>& a) {
  std::vector<uint8_t> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = k.mul(c, a[i]);
  return r;
}

bool vec_is_zero(const std::vector<uint8_t>& a) {
  for (uint8_t c : a)
    if (c) return false;
  return true;
}

bool increment_tuple(std::vector<uint8_t>& t, long q) {
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] + 1 < q) {
      ++t[i];
      return true;
    }
    t[i] = 0;
  }
  return false;
}

std::vector<size_t> EchelonSet::pivots() const {
  std::vector<size_t> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r.first);
  return out;
}

std::vector<uint8_t> EchelonSet::reduce(std::vector<uint8_t> v) const {
  if (v.size() != width_) throw std::invalid_argument("EchelonSet width mismatch");
  const Field& k = *k_;
  for (const auto& [p, row] : rows_) {
    uint8_t c = v[p];
    if (c == 0) continue;
    for (size_t j = p; j < width_; ++j)
      if (row[j] != 0) v[j] = k.sub(v[j], k.mul(c, row[j]));
  }
  return v;
}

bool EchelonSet::insert(const std::vector<uint8_t>& v) {
  std::vector<uint8_t> r = reduce(v);
  size_t p = 0;
  while (p < width_ && r[p] == 0) ++p;
  if (p == width_) return false;
  const Field& k = *k_;
  uint8_t inv = k.inv(r[p]);
  for (size_t j = p; j < width_; ++j) r[j] = k.mul(inv, r[j]);
  // clear column p in the existing rows to keep the set fully reduced
  for (auto& [q, row] : rows_) {
    uint8_t c = row[p];
    if (c == 0) continue;
    for (size_t j = p; j < width_; ++j)
      if (r[j] != 0) row[j] = k.sub(row[j], k.mul(c, r[j]));
  }
  auto it = std::lower_bound(rows_.begin(), rows_.end(), p,
                             [](const auto& a, size_t col) { return a.first < col; });
  rows_.insert(it, {p, std::move(r)});
  return true;
}

bool EchelonSet::contains(const std::vector<uint8_t>& v) const { return vec_is_zero(reduce(v)); }

bool in_span(FieldPtr k, const std::vector<std::vector<uint8_t>>& basis,
             const std::vector<uint8_t>& v) {
  if (basis.empty()) return vec_is_zero(v);
  return solve(Mat::from_cols(std::move(k), basis), v).has_value();
}

std::vector<std::vector<uint8_t>> span_intersection(
    FieldPtr k, const std::vector<std::vector<uint8_t>>& a,
    const std::vector<std::vector<uint8_t>>& b) {
  if (a.empty() || b.empty()) return {};
  const Field& kk = *k;
  Mat A = Mat::from_cols(k, a);
  Mat B = Mat::from_cols(k, b);
  if (A.rows() != B.rows()) throw std::invalid_argument("ambient dimension mismatch");
  // x = A u = B w  <=>  (u, w) in ker [A | -B]
  Mat M(k, A.rows(), A.cols() + B.cols());
  for (size_t i = 0; i < A.rows(); ++i) {
    for (size_t j = 0; j < A.cols(); ++j) M.at(i, j) = A.at(i, j);
    for (size_t j = 0; j < B.cols(); ++j) M.at(i, A.cols() + j) = kk.neg(B.at(i, j));
  }
  std::vector<std::vector<uint8_t>> raw;
  for (const auto& kv : kernel_basis(M)) {
    std::vector<uint8_t> u(kv.begin(), kv.begin() + A.cols());
    raw.push_back(A.apply(u));
  }
  if (raw.empty()) return {};
  // reduce to an independent spanning set
  Rref f = rref(Mat::from_rows(k, raw));
  std::vector<std::vector<uint8_t>> out;
  for (size_t r = 0; r < f.rank(); ++r) {
    std::vector<uint8_t> row(f.R.cols());
    for (size_t j = 0; j < f.R.cols(); ++j) row[j] = f.R.at(r, j);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace dmt
