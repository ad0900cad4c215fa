#include "dmt/algebra.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dmt {

SparseElem sparse_of(const AlgElem& a) {
  SparseElem s;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i]) s.emplace_back(i, a[i]);
  return s;
}

AlgElem dense_of(const SparseElem& a, size_t dim) {
  AlgElem d(dim, 0);
  for (const auto& [i, c] : a) {
    if (i >= dim) throw std::out_of_range("sparse index beyond dimension");
    d[i] = c;
  }
  return d;
}

namespace {

SparseElem from_accum(const std::map<size_t, uint8_t>& acc) {
  SparseElem s;
  for (const auto& [i, c] : acc)
    if (c) s.emplace_back(i, c);
  return s;
}

void accum_add(const Field& k, std::map<size_t, uint8_t>& acc, size_t i, uint8_t c) {
  auto [it, fresh] = acc.emplace(i, c);
  if (!fresh) it->second = k.add(it->second, c);
}

}  // namespace

SparseElem sparse_add(const Field& k, const SparseElem& a, const SparseElem& b) {
  std::map<size_t, uint8_t> acc;
  for (const auto& [i, c] : a) accum_add(k, acc, i, c);
  for (const auto& [i, c] : b) accum_add(k, acc, i, c);
  return from_accum(acc);
}

SparseElem sparse_sub(const Field& k, const SparseElem& a, const SparseElem& b) {
  std::map<size_t, uint8_t> acc;
  for (const auto& [i, c] : a) accum_add(k, acc, i, c);
  for (const auto& [i, c] : b) accum_add(k, acc, i, k.neg(c));
  return from_accum(acc);
}

SparseElem sparse_scale(const Field& k, uint8_t c, const SparseElem& a) {
  if (!c) return {};
  SparseElem s;
  s.reserve(a.size());
  for (const auto& [i, x] : a) s.emplace_back(i, k.mul(c, x));
  return s;
}

AlgElem Algebra::one() const { return basis_elem(unit_index()); }

AlgElem Algebra::basis_elem(size_t i) const {
  AlgElem a(dim_, 0);
  a.at(i) = 1;
  return a;
}

SparseElem Algebra::mul(const SparseElem& a, const SparseElem& b) const {
  const Field& k = *field();
  std::map<size_t, uint8_t> acc;
  for (const auto& [i, ci] : a)
    for (const auto& [j, cj] : b) {
      uint8_t c = k.mul(ci, cj);
      for (const auto& [t, ct] : basis_mul(i, j)) accum_add(k, acc, t, k.mul(c, ct));
    }
  return from_accum(acc);
}

AlgElem Algebra::mul(const AlgElem& a, const AlgElem& b) const {
  return dense_of(mul(sparse_of(a), sparse_of(b)), dim_);
}

SparseElem Algebra::pth_power(const SparseElem& a) const {
  const Field& k = *field();
  long p = k.p();
  std::map<size_t, uint8_t> acc;
  for (const auto& [i, c] : a) {
    SparseElem mp = {{i, uint8_t(1)}};
    for (long t = 1; t < p; ++t) mp = mul(mp, {{i, uint8_t(1)}});
    uint8_t cp = k.frobenius(c);
    for (const auto& [t, ct] : mp) accum_add(k, acc, t, k.mul(cp, ct));
  }
  return from_accum(acc);
}

AlgElem Algebra::pth_power(const AlgElem& a) const {
  return dense_of(pth_power(sparse_of(a)), dim_);
}

SparseElem Algebra::pow(const SparseElem& a, unsigned long e) const {
  // base-p decomposition: a^e = prod (a^{p^i})^{d_i}, with each p-power step
  // linear in the number of terms
  SparseElem result = {{unit_index(), uint8_t(1)}};
  unsigned long p = static_cast<unsigned long>(field()->p());
  SparseElem ppow = a;
  while (e) {
    unsigned long d = e % p;
    for (unsigned long t = 0; t < d; ++t) result = mul(result, ppow);
    e /= p;
    if (e) ppow = pth_power(ppow);
  }
  return result;
}

AlgElem Algebra::pow(const AlgElem& a, unsigned long e) const {
  return dense_of(pow(sparse_of(a), e), dim_);
}

std::string Algebra::to_string(const SparseElem& a) const {
  if (a.empty()) return "0";
  const Field& k = *field();
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : a) {
    if (!first) os << " + ";
    first = false;
    if (i == unit_index()) {
      os << k.to_string(c);
    } else {
      if (c != 1) os << k.to_string(c) << "*";
      os << basis_name(i);
    }
  }
  return os.str();
}

std::string Algebra::to_string(const AlgElem& a) const { return to_string(sparse_of(a)); }

// ---- monomial ----

MonomialAlgebra::MonomialAlgebra(FieldPtr k, std::vector<std::string> names,
                                 std::vector<uint32_t> bounds)
    : Algebra(std::move(k), [&] {
        size_t d = 1;
        for (uint32_t b : bounds) {
          if (b < 2) throw std::invalid_argument("nilpotency bound must be >= 2");
          if (d > kAlgebraDimCap / b)
            throw cap_error("algebra dimension exceeds cap " + std::to_string(kAlgebraDimCap));
          d *= b;
        }
        return d;
      }()),
      var_names_(std::move(names)),
      bounds_(std::move(bounds)) {
  if (var_names_.size() != bounds_.size())
    throw std::invalid_argument("one bound per variable required");
  size_t s = 1;
  for (uint32_t b : bounds_) {
    stride_.push_back(s);
    s *= b;
  }
}

std::shared_ptr<const MonomialAlgebra> MonomialAlgebra::make(FieldPtr k,
                                                             std::vector<std::string> names,
                                                             std::vector<uint32_t> bounds) {
  return std::shared_ptr<const MonomialAlgebra>(
      new MonomialAlgebra(std::move(k), std::move(names), std::move(bounds)));
}

size_t MonomialAlgebra::index_of(const Exps& e) const {
  if (e.size() != bounds_.size()) throw std::invalid_argument("exponent arity mismatch");
  size_t idx = 0;
  for (size_t v = 0; v < e.size(); ++v) {
    if (e[v] >= bounds_[v]) throw std::out_of_range("exponent at or beyond bound");
    idx += e[v] * stride_[v];
  }
  return idx;
}

Exps MonomialAlgebra::exps_of(size_t idx) const {
  Exps e(bounds_.size());
  for (size_t v = 0; v < bounds_.size(); ++v) e[v] = digit(idx, v);
  return e;
}

std::optional<size_t> MonomialAlgebra::mono_mul(size_t i, size_t j) const {
  size_t idx = 0;
  for (size_t v = 0; v < bounds_.size(); ++v) {
    uint32_t s = digit(i, v) + digit(j, v);
    if (s >= bounds_[v]) return std::nullopt;
    idx += s * stride_[v];
  }
  return idx;
}

SparseElem MonomialAlgebra::basis_mul(size_t i, size_t j) const {
  auto m = mono_mul(i, j);
  if (!m) return {};
  return {{*m, uint8_t(1)}};
}

std::string MonomialAlgebra::basis_name(size_t i) const {
  if (i == 0) return "1";
  std::ostringstream os;
  bool first = true;
  for (size_t v = 0; v < bounds_.size(); ++v) {
    uint32_t e = digit(i, v);
    if (!e) continue;
    if (!first) os << "*";
    first = false;
    os << var_names_[v];
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

// ---- structure constants ----

StructureAlgebra::StructureAlgebra(FieldPtr k, std::vector<std::string> names,
                                   std::vector<std::vector<SparseElem>> table, size_t unit)
    : Algebra(std::move(k), names.size()),
      basis_names_(std::move(names)),
      table_(std::move(table)),
      unit_(unit) {}

std::shared_ptr<const StructureAlgebra> StructureAlgebra::make(
    FieldPtr k, std::vector<std::string> names, std::vector<std::vector<SparseElem>> table,
    size_t unit, bool check_associative) {
  size_t d = names.size();
  if (d == 0 || d > kAlgebraDimCap)
    throw cap_error("structure algebra dimension out of range");
  if (table.size() != d) throw std::invalid_argument("table must be square");
  for (const auto& row : table) {
    if (row.size() != d) throw std::invalid_argument("table must be square");
    for (const auto& e : row)
      for (const auto& [i, c] : e)
        if (i >= d || c == 0 || c >= k->order())
          throw std::invalid_argument("bad table entry");
  }
  if (unit >= d) throw std::invalid_argument("unit index out of range");
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < i; ++j)
      if (table[i][j] != table[j][i])
        throw std::invalid_argument("multiplication table is not symmetric");
  for (size_t i = 0; i < d; ++i)
    if (table[unit][i] != SparseElem{{i, uint8_t(1)}})
      throw std::invalid_argument("unit row is not the identity");
  auto alg = std::shared_ptr<const StructureAlgebra>(
      new StructureAlgebra(std::move(k), std::move(names), std::move(table), unit));
  if (check_associative) {
    for (size_t i = 0; i < d; ++i)
      for (size_t j = i; j < d; ++j) {
        SparseElem ij = alg->basis_mul(i, j);
        for (size_t t = j; t < d; ++t) {
          SparseElem jt = alg->basis_mul(j, t);
          if (alg->mul(ij, {{t, uint8_t(1)}}) != alg->mul({{i, uint8_t(1)}}, jt))
            throw std::invalid_argument("multiplication table is not associative");
        }
      }
  }
  return alg;
}

// ---- tensor ----

TensorAlgebra::TensorAlgebra(AlgebraPtr a, AlgebraPtr b)
    : Algebra(a->field(), a->dim() * b->dim()), a_(std::move(a)), b_(std::move(b)) {}

std::shared_ptr<const TensorAlgebra> TensorAlgebra::make(AlgebraPtr a, AlgebraPtr b) {
  require_same_field(*a->field(), *b->field());
  if (a->dim() > (size_t(1) << 40) / b->dim())
    throw cap_error("tensor workspace index space exceeds cap");
  return std::shared_ptr<const TensorAlgebra>(new TensorAlgebra(std::move(a), std::move(b)));
}

SparseElem TensorAlgebra::tensor(const SparseElem& a, const SparseElem& b) const {
  const Field& k = *field();
  SparseElem out;
  out.reserve(a.size() * b.size());
  for (const auto& [i, ci] : a)
    for (const auto& [j, cj] : b) out.emplace_back(pair_index(i, j), k.mul(ci, cj));
  return out;
}

SparseElem TensorAlgebra::embed_left(const SparseElem& a) const {
  return tensor(a, {{b_->unit_index(), uint8_t(1)}});
}

SparseElem TensorAlgebra::embed_right(const SparseElem& b) const {
  return tensor({{a_->unit_index(), uint8_t(1)}}, b);
}

SparseElem TensorAlgebra::basis_mul(size_t i, size_t j) const {
  SparseElem pa = a_->basis_mul(left_of(i), left_of(j));
  if (pa.empty()) return {};
  SparseElem pb = b_->basis_mul(right_of(i), right_of(j));
  if (pb.empty()) return {};
  return tensor(pa, pb);
}

std::string TensorAlgebra::basis_name(size_t i) const {
  return a_->basis_name(left_of(i)) + "(x)" + b_->basis_name(right_of(i));
}

// ---- polynomial evaluation ----

SparseElem eval_poly(const Algebra& alg, const MultiPoly& poly,
                     const std::vector<SparseElem>& args) {
  if (args.size() != poly.vars().size())
    throw std::invalid_argument("one argument per variable required");
  const Field& k = *alg.field();
  // incremental power chains per argument
  std::vector<std::vector<SparseElem>> powers(args.size());
  auto arg_pow = [&](size_t i, uint32_t e) -> const SparseElem& {
    auto& chain = powers[i];
    if (chain.empty()) chain.push_back({{alg.unit_index(), uint8_t(1)}});
    while (chain.size() <= e) chain.push_back(alg.mul(chain.back(), args[i]));
    return chain[e];
  };
  std::map<size_t, uint8_t> acc;
  for (const auto& [exps, coeff] : poly.terms()) {
    uint8_t c = k.from_int(rational_mod_p(coeff, k.p()));
    if (!c) continue;
    SparseElem term = {{alg.unit_index(), c}};
    for (size_t i = 0; i < exps.size() && !term.empty(); ++i)
      if (exps[i]) term = alg.mul(term, arg_pow(i, exps[i]));
    for (const auto& [t, ct] : term) accum_add(k, acc, t, ct);
  }
  return from_accum(acc);
}

// ---- homomorphisms ----

AlgHom::AlgHom(AlgebraPtr src, AlgebraPtr dst)
    : src_(std::move(src)), dst_(std::move(dst)), image_memo_(src_->dim()) {}

AlgHom AlgHom::from_generator_images(std::shared_ptr<const MonomialAlgebra> src,
                                     AlgebraPtr dst, std::vector<SparseElem> gen_images) {
  if (gen_images.size() != src->nvars())
    throw std::invalid_argument("one image per generator required");
  for (size_t v = 0; v < gen_images.size(); ++v)
    if (!dst->pow(gen_images[v], src->bounds()[v]).empty())
      throw std::invalid_argument("generator image violates the nilpotency relation of " +
                                  src->var_names()[v]);
  AlgHom h(src, std::move(dst));
  h.gen_form_ = true;
  h.gen_images_ = std::move(gen_images);
  h.image_memo_[src->unit_index()] = SparseElem{{h.dst_->unit_index(), uint8_t(1)}};
  return h;
}

AlgHom AlgHom::from_basis_images(AlgebraPtr src, AlgebraPtr dst,
                                 std::vector<SparseElem> basis_images, bool check) {
  if (basis_images.size() != src->dim())
    throw std::invalid_argument("one image per basis element required");
  AlgHom h(src, dst);
  if (basis_images[src->unit_index()] != SparseElem{{dst->unit_index(), uint8_t(1)}})
    throw std::invalid_argument("unit is not preserved");
  for (size_t i = 0; i < src->dim(); ++i) h.image_memo_[i] = std::move(basis_images[i]);
  if (check) {
    for (size_t i = 0; i < src->dim(); ++i)
      for (size_t j = i; j < src->dim(); ++j) {
        if (h.apply(src->basis_mul(i, j)) != dst->mul(*h.image_memo_[i], *h.image_memo_[j]))
          throw std::invalid_argument("basis images are not multiplicative");
      }
  }
  return h;
}

const std::vector<SparseElem>& AlgHom::generator_images() const {
  if (!gen_form_) throw std::logic_error("homomorphism is not in generator form");
  return gen_images_;
}

const SparseElem& AlgHom::basis_image(size_t i) const {
  if (image_memo_[i]) return *image_memo_[i];
  if (!gen_form_) throw std::logic_error("missing basis image");
  const auto& mono = static_cast<const MonomialAlgebra&>(*src_);
  // peel the lowest set variable and recurse toward the unit
  size_t v = 0;
  while (mono.digit(i, v) == 0) ++v;
  const SparseElem& prev = basis_image(i - mono.var_index(v));
  image_memo_[i] = dst_->mul(prev, gen_images_[v]);
  return *image_memo_[i];
}

SparseElem AlgHom::apply(const SparseElem& a) const {
  const Field& k = *dst_->field();
  std::map<size_t, uint8_t> acc;
  for (const auto& [i, c] : a)
    for (const auto& [t, ct] : basis_image(i)) accum_add(k, acc, t, k.mul(c, ct));
  return from_accum(acc);
}

AlgElem AlgHom::apply(const AlgElem& a) const {
  return dense_of(apply(sparse_of(a)), dst_->dim());
}

Mat AlgHom::matrix() const {
  if (src_->dim() > (size_t(1) << 28) / dst_->dim())
    throw cap_error("homomorphism matrix too large to materialize");
  Mat m(dst_->field(), dst_->dim(), src_->dim());
  for (size_t j = 0; j < src_->dim(); ++j)
    for (const auto& [i, c] : basis_image(j)) m.at(i, j) = c;
  return m;
}

AlgHom identity_hom(AlgebraPtr a) {
  std::vector<SparseElem> images(a->dim());
  for (size_t i = 0; i < a->dim(); ++i) images[i] = {{i, 1}};
  return AlgHom::from_basis_images(a, a, std::move(images), false);
}

AlgHom compose_hom(const AlgHom& outer, const AlgHom& inner) {
  if (inner.target() != outer.source())
    throw std::invalid_argument("compose_hom: inner target differs from outer source");
  std::vector<SparseElem> images(inner.source()->dim());
  for (size_t i = 0; i < images.size(); ++i) images[i] = outer.apply(inner.basis_image(i));
  return AlgHom::from_basis_images(inner.source(), outer.target(), std::move(images), false);
}

AlgHom hom_from_matrix(AlgebraPtr src, AlgebraPtr dst, const Mat& M, bool check) {
  if (M.rows() != dst->dim() || M.cols() != src->dim())
    throw std::invalid_argument("hom_from_matrix: shape mismatch");
  std::vector<SparseElem> images(src->dim());
  for (size_t j = 0; j < src->dim(); ++j) {
    for (size_t i = 0; i < dst->dim(); ++i)
      if (M.at(i, j)) images[j].emplace_back(i, M.at(i, j));
  }
  return AlgHom::from_basis_images(std::move(src), std::move(dst), std::move(images), check);
}

}  // namespace dmt
