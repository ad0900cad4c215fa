#pragma once
// Finite-dimensional commutative algebras with a distinguished basis, in the
// three shapes the scheme layer needs: truncated polynomial (monomial) rings,
// explicit structure-constant quotients, and tensor products. Elements come
// dense (for linear algebra) and sparse (for tensor workspaces, whose
// dimension can be the square of the ring's). Nested tensor indices flatten
// associatively, so (A(x)B)(x)C and A(x)(B(x)C) agree element-by-element.

#include "dmt/field.hpp"
#include "dmt/linalg.hpp"
#include "dmt/poly.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dmt {

constexpr size_t kAlgebraDimCap = 4096;

using AlgElem = std::vector<uint8_t>;                    // dense over the basis
using SparseElem = std::vector<std::pair<size_t, uint8_t>>;  // sorted, no zeros

SparseElem sparse_of(const AlgElem& a);
AlgElem dense_of(const SparseElem& a, size_t dim);
SparseElem sparse_add(const Field& k, const SparseElem& a, const SparseElem& b);
SparseElem sparse_sub(const Field& k, const SparseElem& a, const SparseElem& b);
SparseElem sparse_scale(const Field& k, uint8_t c, const SparseElem& a);

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

class Algebra {
 public:
  virtual ~Algebra() = default;

  const FieldPtr& field() const { return k_; }
  size_t dim() const { return dim_; }

  virtual SparseElem basis_mul(size_t i, size_t j) const = 0;
  virtual size_t unit_index() const = 0;
  virtual std::string basis_name(size_t i) const = 0;

  AlgElem zero() const { return AlgElem(dim_, 0); }
  AlgElem one() const;
  AlgElem basis_elem(size_t i) const;

  SparseElem mul(const SparseElem& a, const SparseElem& b) const;
  AlgElem mul(const AlgElem& a, const AlgElem& b) const;
  SparseElem pow(const SparseElem& a, unsigned long e) const;
  AlgElem pow(const AlgElem& a, unsigned long e) const;

  // (sum c_m e_m)^p = sum c_m^p e_m^p: exact in any commutative F_q-algebra
  SparseElem pth_power(const SparseElem& a) const;
  AlgElem pth_power(const AlgElem& a) const;

  std::string to_string(const SparseElem& a) const;
  std::string to_string(const AlgElem& a) const;

 protected:
  Algebra(FieldPtr k, size_t dim) : k_(std::move(k)), dim_(dim) {}

 private:
  FieldPtr k_;
  size_t dim_;
};

// F_q[x_0..x_r] / (x_v^{bound_v}); basis monomials are indexed mixed-radix
// with variable 0 as the lowest digit
class MonomialAlgebra final : public Algebra,
                              public std::enable_shared_from_this<MonomialAlgebra> {
 public:
  static std::shared_ptr<const MonomialAlgebra> make(FieldPtr k,
                                                     std::vector<std::string> var_names,
                                                     std::vector<uint32_t> bounds);

  size_t nvars() const { return bounds_.size(); }
  const std::vector<uint32_t>& bounds() const { return bounds_; }
  const std::vector<std::string>& var_names() const { return var_names_; }

  size_t index_of(const Exps& e) const;
  Exps exps_of(size_t idx) const;
  uint32_t digit(size_t idx, size_t v) const { return (idx / stride_[v]) % bounds_[v]; }
  size_t var_index(size_t v) const { return stride_[v]; }

  // product of basis monomials: an index, or nullopt once some exponent
  // reaches its bound
  std::optional<size_t> mono_mul(size_t i, size_t j) const;

  SparseElem basis_mul(size_t i, size_t j) const override;
  size_t unit_index() const override { return 0; }
  std::string basis_name(size_t i) const override;

 private:
  MonomialAlgebra(FieldPtr k, std::vector<std::string> names, std::vector<uint32_t> bounds);
  std::vector<std::string> var_names_;
  std::vector<uint32_t> bounds_;
  std::vector<size_t> stride_;
};

// explicit multiplication table; arises as a quotient of a monomial ring
class StructureAlgebra final : public Algebra,
                               public std::enable_shared_from_this<StructureAlgebra> {
 public:
  // table[i][j] = e_i e_j, full square table; symmetry and the unit row are
  // checked, associativity is checked when the dimension allows
  static std::shared_ptr<const StructureAlgebra> make(FieldPtr k,
                                                      std::vector<std::string> basis_names,
                                                      std::vector<std::vector<SparseElem>> table,
                                                      size_t unit, bool check_associative);

  SparseElem basis_mul(size_t i, size_t j) const override { return table_[i][j]; }
  size_t unit_index() const override { return unit_; }
  std::string basis_name(size_t i) const override { return basis_names_[i]; }

 private:
  StructureAlgebra(FieldPtr k, std::vector<std::string> names,
                   std::vector<std::vector<SparseElem>> table, size_t unit);
  std::vector<std::string> basis_names_;
  std::vector<std::vector<SparseElem>> table_;
  size_t unit_;
};

// A (x) B with pair index i * dim(B) + j; not dimension-capped, because it is
// a workspace rather than a coordinate ring
class TensorAlgebra final : public Algebra,
                            public std::enable_shared_from_this<TensorAlgebra> {
 public:
  static std::shared_ptr<const TensorAlgebra> make(AlgebraPtr a, AlgebraPtr b);

  const AlgebraPtr& left() const { return a_; }
  const AlgebraPtr& right() const { return b_; }
  size_t pair_index(size_t i, size_t j) const { return i * b_->dim() + j; }
  size_t left_of(size_t idx) const { return idx / b_->dim(); }
  size_t right_of(size_t idx) const { return idx % b_->dim(); }

  SparseElem tensor(const SparseElem& a, const SparseElem& b) const;
  SparseElem embed_left(const SparseElem& a) const;   // a (x) 1
  SparseElem embed_right(const SparseElem& b) const;  // 1 (x) b

  SparseElem basis_mul(size_t i, size_t j) const override;
  size_t unit_index() const override { return pair_index(a_->unit_index(), b_->unit_index()); }
  std::string basis_name(size_t i) const override;

 private:
  TensorAlgebra(AlgebraPtr a, AlgebraPtr b);
  AlgebraPtr a_, b_;
};

// evaluate an integer-coefficient polynomial on algebra elements, with a
// per-argument power cache
SparseElem eval_poly(const Algebra& alg, const MultiPoly& poly,
                     const std::vector<SparseElem>& args);

// algebra homomorphism, stored either by generator images (monomial source)
// or by full basis images
class AlgHom {
 public:
  // checks unit and nilpotency of each image (img_v^{bound_v} = 0), which is
  // exactly well-definedness on a truncated polynomial source
  static AlgHom from_generator_images(std::shared_ptr<const MonomialAlgebra> src,
                                      AlgebraPtr dst, std::vector<SparseElem> gen_images);

  // multiplicativity is the caller's responsibility unless check is set
  static AlgHom from_basis_images(AlgebraPtr src, AlgebraPtr dst,
                                  std::vector<SparseElem> basis_images, bool check);

  const AlgebraPtr& source() const { return src_; }
  const AlgebraPtr& target() const { return dst_; }
  bool generator_form() const { return gen_form_; }
  const std::vector<SparseElem>& generator_images() const;

  const SparseElem& basis_image(size_t i) const;
  SparseElem apply(const SparseElem& a) const;
  AlgElem apply(const AlgElem& a) const;
  Mat matrix() const;  // dst.dim x src.dim

 private:
  AlgHom(AlgebraPtr src, AlgebraPtr dst);
  AlgebraPtr src_, dst_;
  bool gen_form_ = false;
  std::vector<SparseElem> gen_images_;
  mutable std::vector<std::optional<SparseElem>> image_memo_;
};

AlgHom identity_hom(AlgebraPtr a);
AlgHom compose_hom(const AlgHom& outer, const AlgHom& inner);  // outer after inner
AlgHom hom_from_matrix(AlgebraPtr src, AlgebraPtr dst, const Mat& M, bool check);

}  // namespace dmt
