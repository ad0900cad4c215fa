#pragma once
// Dense linear algebra over the byte-table fields. Everything downstream that
// solves for group-like elements, kernels of F and V, or isomorphisms reduces
// to RREF over F_q; systems that get many right-hand sides factor once
// through LinearSolver.

#include "dmt/field.hpp"

#include <optional>
#include <vector>

namespace dmt {

class Mat {
 public:
  Mat() = default;
  Mat(FieldPtr k, size_t rows, size_t cols)
      : k_(std::move(k)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static Mat identity(FieldPtr k, size_t n);
  static Mat from_rows(FieldPtr k, const std::vector<std::vector<uint8_t>>& rows);
  static Mat from_cols(FieldPtr k, const std::vector<std::vector<uint8_t>>& cols);

  const FieldPtr& field() const { return k_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  uint8_t at(size_t i, size_t j) const { return a_[i * cols_ + j]; }
  uint8_t& at(size_t i, size_t j) { return a_[i * cols_ + j]; }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  Mat operator*(const Mat& o) const;
  std::vector<uint8_t> apply(const std::vector<uint8_t>& v) const;
  Mat transpose() const;
  Mat stacked_below(const Mat& o) const;  // [this; o]

 private:
  FieldPtr k_;
  size_t rows_ = 0, cols_ = 0;
  std::vector<uint8_t> a_;
};

// E * A = R with R in reduced row echelon form
struct Rref {
  Mat R;
  Mat E;
  std::vector<size_t> pivot_cols;
  size_t rank() const { return pivot_cols.size(); }
};

Rref rref(const Mat& A);
size_t rank(const Mat& A);

std::optional<std::vector<uint8_t>> solve(const Mat& A, const std::vector<uint8_t>& b);
std::vector<std::vector<uint8_t>> kernel_basis(const Mat& A);
std::optional<Mat> inverse(const Mat& A);

// factor A once, then answer many Ax = b queries
class LinearSolver {
 public:
  explicit LinearSolver(Mat A);

  const Mat& matrix() const { return A_; }
  size_t rank() const { return f_.rank(); }
  const std::vector<std::vector<uint8_t>>& kernel() const { return kernel_; }

  // one solution with free coordinates set to zero, or nullopt
  std::optional<std::vector<uint8_t>> particular(const std::vector<uint8_t>& b) const;

  // the full affine solution set, particular + span(kernel); throws cap_error
  // if its size q^dim(kernel) would exceed cap
  std::vector<std::vector<uint8_t>> all_solutions(const std::vector<uint8_t>& b,
                                                  size_t cap) const;

 private:
  Mat A_;
  Rref f_;
  std::vector<std::vector<uint8_t>> kernel_;
};

// a row space maintained in reduced echelon form, grown one vector at a time;
// cheaper than re-running rref when vectors arrive incrementally (ideal
// closures, span fingerprints)
class EchelonSet {
 public:
  EchelonSet(FieldPtr k, size_t width) : k_(std::move(k)), width_(width) {}

  size_t width() const { return width_; }
  size_t rank() const { return rows_.size(); }
  const FieldPtr& field() const { return k_; }

  // rows sorted by pivot column, each normalized with cleared pivot columns
  const std::vector<std::pair<size_t, std::vector<uint8_t>>>& rows() const { return rows_; }
  std::vector<size_t> pivots() const;

  // residue of v modulo the row space
  std::vector<uint8_t> reduce(std::vector<uint8_t> v) const;

  // adds v's residue when nonzero; true iff the rank grew
  bool insert(const std::vector<uint8_t>& v);

  bool contains(const std::vector<uint8_t>& v) const;

 private:
  FieldPtr k_;
  size_t width_;
  std::vector<std::pair<size_t, std::vector<uint8_t>>> rows_;
};

// componentwise helpers
std::vector<uint8_t> vec_add(const Field& k, const std::vector<uint8_t>& a,
                             const std::vector<uint8_t>& b);
std::vector<uint8_t> vec_sub(const Field& k, const std::vector<uint8_t>& a,
                             const std::vector<uint8_t>& b);
std::vector<uint8_t> vec_scale(const Field& k, uint8_t c, const std::vector<uint8_t>& a);
bool vec_is_zero(const std::vector<uint8_t>& a);

// odometer over F_q^d encoded as byte tuples; returns false after wrapping to 0
bool increment_tuple(std::vector<uint8_t>& t, long q);

// membership of v in the span of basis vectors (as columns)
bool in_span(FieldPtr k, const std::vector<std::vector<uint8_t>>& basis,
             const std::vector<uint8_t>& v);

// intersection of the column spans, as a basis
std::vector<std::vector<uint8_t>> span_intersection(
    FieldPtr k, const std::vector<std::vector<uint8_t>>& a,
    const std::vector<std::vector<uint8_t>>& b);

}  // namespace dmt
