#include "dmt/algebra.hpp"

#include "doctest.h"

#include <random>

using namespace dmt;

namespace {

std::shared_ptr<const MonomialAlgebra> small_ring(long p) {
  // F_p[x, y] / (x^p, y^{p^2})
  auto k = Field::make(p);
  uint32_t pp = static_cast<uint32_t>(p);
  return MonomialAlgebra::make(k, {"x", "y"}, {pp, pp * pp});
}

SparseElem random_elem(const Algebra& alg, std::mt19937& rng, int terms) {
  std::uniform_int_distribution<size_t> di(0, alg.dim() - 1);
  std::uniform_int_distribution<int> dc(0, static_cast<int>(alg.field()->order()) - 1);
  AlgElem a(alg.dim(), 0);
  for (int t = 0; t < terms; ++t) a[di(rng)] = static_cast<uint8_t>(dc(rng));
  return sparse_of(a);
}

}  // namespace

TEST_CASE("monomial index encoding round trips") {
  auto alg = small_ring(3);
  CHECK(alg->dim() == 27);
  for (size_t i = 0; i < alg->dim(); ++i) CHECK(alg->index_of(alg->exps_of(i)) == i);
  CHECK(alg->basis_name(0) == "1");
  CHECK(alg->basis_name(alg->var_index(0)) == "x");
  CHECK(alg->basis_name(alg->index_of({2, 3})) == "x^2*y^3");
  CHECK_THROWS_AS(alg->index_of({3, 0}), std::out_of_range);
}

TEST_CASE("monomial products truncate at the bounds") {
  auto alg = small_ring(2);  // x^2 = 0, y^4 = 0
  size_t x = alg->var_index(0), y = alg->var_index(1);
  CHECK(alg->mono_mul(x, y).has_value());
  CHECK_FALSE(alg->mono_mul(x, x).has_value());
  auto y2 = *alg->mono_mul(y, y);
  auto y3 = *alg->mono_mul(y2, y);
  CHECK_FALSE(alg->mono_mul(y3, y).has_value());
  CHECK(alg->basis_mul(x, x).empty());
  CHECK(alg->basis_mul(x, y) == SparseElem{{alg->index_of({1, 1}), uint8_t(1)}});
}

TEST_CASE("algebra dimension cap") {
  auto k = Field::make(2);
  CHECK_THROWS_AS(MonomialAlgebra::make(k, {"a", "b", "c", "d", "e", "f", "g"},
                                        {8, 8, 8, 8, 8, 8, 8}),
                  cap_error);
  CHECK_THROWS_AS(MonomialAlgebra::make(k, {"a"}, {1}), std::invalid_argument);
}

TEST_CASE("ring axioms on random sparse elements") {
  std::mt19937 rng(5);
  for (long p : {2, 3}) {
    auto alg = small_ring(p);
    const Field& k = *alg->field();
    SparseElem one = {{alg->unit_index(), uint8_t(1)}};
    for (int trial = 0; trial < 25; ++trial) {
      auto a = random_elem(*alg, rng, 4);
      auto b = random_elem(*alg, rng, 4);
      auto c = random_elem(*alg, rng, 3);
      CHECK(alg->mul(a, b) == alg->mul(b, a));
      CHECK(alg->mul(alg->mul(a, b), c) == alg->mul(a, alg->mul(b, c)));
      CHECK(alg->mul(a, one) == a);
      CHECK(alg->mul(a, sparse_add(k, b, c)) ==
            sparse_add(k, alg->mul(a, b), alg->mul(a, c)));
    }
  }
}

TEST_CASE("powers by base-p decomposition match repeated multiplication") {
  std::mt19937 rng(9);
  auto alg = small_ring(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_elem(*alg, rng, 3);
    SparseElem acc = {{alg->unit_index(), uint8_t(1)}};
    for (unsigned long e = 0; e <= 10; ++e) {
      CHECK(alg->pow(a, e) == acc);
      acc = alg->mul(acc, a);
    }
    CHECK(alg->pth_power(a) == alg->pow(a, 3));
  }
}

TEST_CASE("sparse and dense arithmetic agree") {
  std::mt19937 rng(13);
  auto alg = small_ring(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_elem(*alg, rng, 5);
    auto b = random_elem(*alg, rng, 5);
    AlgElem da = dense_of(a, alg->dim()), db = dense_of(b, alg->dim());
    CHECK(sparse_of(alg->mul(da, db)) == alg->mul(a, b));
    CHECK(sparse_of(alg->pth_power(da)) == alg->pth_power(a));
  }
}

TEST_CASE("tensor algebra multiplies factorwise") {
  auto alg = small_ring(2);
  auto tt = TensorAlgebra::make(alg, alg);
  CHECK(tt->dim() == alg->dim() * alg->dim());
  size_t x = alg->var_index(0), y = alg->var_index(1);
  SparseElem sx = {{x, uint8_t(1)}}, sy = {{y, uint8_t(1)}};
  // (x(x)1)(1(x)y) = x(x)y
  CHECK(tt->mul(tt->embed_left(sx), tt->embed_right(sy)) == tt->tensor(sx, sy));
  // (x(x)1)^2 = 0 since x^2 = 0
  CHECK(tt->mul(tt->embed_left(sx), tt->embed_left(sx)).empty());
  CHECK(tt->basis_name(tt->pair_index(x, y)) == "x(x)y");
  CHECK(tt->unit_index() == tt->pair_index(0, 0));
}

TEST_CASE("nested tensor indices flatten associatively") {
  auto alg = small_ring(2);
  auto ab = TensorAlgebra::make(alg, alg);
  auto left = TensorAlgebra::make(ab, alg);   // (A(x)A)(x)A
  auto right = TensorAlgebra::make(alg, ab);  // A(x)(A(x)A)
  CHECK(left->dim() == right->dim());
  std::mt19937 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = random_elem(*alg, rng, 3);
    auto b = random_elem(*alg, rng, 3);
    auto c = random_elem(*alg, rng, 3);
    SparseElem l = left->tensor(ab->tensor(a, b), c);
    SparseElem r = right->tensor(a, ab->tensor(b, c));
    CHECK(l == r);
    // products agree too
    auto a2 = random_elem(*alg, rng, 2);
    SparseElem l2 = left->tensor(ab->tensor(a2, b), c);
    SparseElem r2 = right->tensor(a2, ab->tensor(b, c));
    CHECK(left->mul(l, l2) == right->mul(r, r2));
  }
}

TEST_CASE("structure constants validate their axioms") {
  auto k = Field::make(2);
  // F_2[t]/(t^2): basis {1, t}
  std::vector<std::vector<SparseElem>> table = {
      {{{0, 1}}, {{1, 1}}},
      {{{1, 1}}, {}},
  };
  auto alg = StructureAlgebra::make(k, {"1", "t"}, table, 0, true);
  CHECK(alg->mul(SparseElem{{1, uint8_t(1)}}, SparseElem{{1, uint8_t(1)}}).empty());
  // broken symmetry rejected
  auto bad = table;
  bad[0][1] = {};
  CHECK_THROWS_AS(StructureAlgebra::make(k, {"1", "t"}, bad, 0, false),
                  std::invalid_argument);
  // broken unit row rejected
  auto bad2 = table;
  bad2[0][0] = {{1, 1}};
  CHECK_THROWS_AS(StructureAlgebra::make(k, {"1", "t"}, bad2, 0, false),
                  std::invalid_argument);
  // broken associativity rejected: e1 e1 = 1 but e1 e2 = 0, e2 = e1 e1 e1...
  std::vector<std::vector<SparseElem>> bad3 = {
      {{{0, 1}}, {{1, 1}}, {{2, 1}}},
      {{{1, 1}}, {{0, 1}}, {}},
      {{{2, 1}}, {}, {}},
  };
  CHECK_THROWS_AS(StructureAlgebra::make(k, {"1", "a", "b"}, bad3, 0, true),
                  std::invalid_argument);
}

TEST_CASE("polynomial evaluation with the power cache") {
  auto alg = small_ring(2);
  size_t xi = alg->var_index(0), yi = alg->var_index(1);
  SparseElem x = {{xi, uint8_t(1)}}, y = {{yi, uint8_t(1)}};
  std::vector<std::string> vars = {"u", "v"};
  // u^2 + u v + 1 evaluated at (y, y^2): y^2 + y^3 + 1
  MultiPoly f(vars);
  f.add_term({2, 0}, 1);
  f.add_term({1, 1}, 1);
  f.add_term({0, 0}, 1);
  auto got = eval_poly(*alg, f, {y, alg->mul(y, y)});
  SparseElem expect = {{alg->unit_index(), uint8_t(1)},
                       {alg->index_of({0, 2}), uint8_t(1)},
                       {alg->index_of({0, 3}), uint8_t(1)}};
  CHECK(got == expect);
  // coefficients reduce mod p: 2u = 0 over F_2
  MultiPoly g(vars);
  g.add_term({1, 0}, 2);
  CHECK(eval_poly(*alg, g, {x, y}).empty());
  // rational coefficients with unit denominator reduce too: (1/3) = 1 mod 2
  MultiPoly h(vars);
  h.add_term({1, 0}, Rational(1, 3));
  CHECK(eval_poly(*alg, h, {x, y}) == x);
}

TEST_CASE("generator-form homomorphisms") {
  auto alg = small_ring(2);  // x^2 = 0, y^4 = 0
  size_t xi = alg->var_index(0), yi = alg->var_index(1);
  SparseElem x = {{xi, uint8_t(1)}}, y = {{yi, uint8_t(1)}};
  // x -> y^2, y -> y is well defined
  auto h = AlgHom::from_generator_images(alg, alg, {alg->mul(y, y), y});
  CHECK(h.apply(x) == alg->mul(y, y));
  CHECK(h.apply(alg->mul(x, y)) == alg->pow(y, 3));
  // multiplicativity on random elements
  std::mt19937 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_elem(*alg, rng, 4);
    auto b = random_elem(*alg, rng, 4);
    CHECK(h.apply(alg->mul(a, b)) == alg->mul(h.apply(a), h.apply(b)));
  }
  // x -> y would need y^2 = 0: rejected
  CHECK_THROWS_AS(AlgHom::from_generator_images(alg, alg, {y, y}),
                  std::invalid_argument);
  // images violating nothing but nilpotency bounds of the source are fine
  // even when they mix generators
  auto h2 = AlgHom::from_generator_images(alg, alg, {alg->mul(x, y), y});
  CHECK(h2.apply(alg->mul(x, x)).empty());
  CHECK(h2.basis_image(alg->index_of({1, 1})) ==
        SparseElem{{alg->index_of({1, 2}), uint8_t(1)}});
}

TEST_CASE("basis-form homomorphisms check what they are told to") {
  auto k = Field::make(2);
  auto alg = MonomialAlgebra::make(k, {"t"}, {2});
  // identity map in basis form
  auto id = AlgHom::from_basis_images(alg, alg, {{{0, 1}}, {{1, 1}}}, true);
  CHECK(id.apply(SparseElem{{1, uint8_t(1)}}) == SparseElem{{1, uint8_t(1)}});
  // t -> t + 1 does not preserve the unit structure multiplicatively
  CHECK_THROWS_AS(
      AlgHom::from_basis_images(alg, alg, {{{0, 1}}, {{0, 1}, {1, 1}}}, true),
      std::invalid_argument);
  Mat m = id.matrix();
  CHECK(m == Mat::identity(k, 2));
}

TEST_CASE("homomorphism matrices agree with apply") {
  std::mt19937 rng(31);
  auto alg = small_ring(3);
  SparseElem y = {{alg->var_index(1), uint8_t(1)}};
  auto h = AlgHom::from_generator_images(alg, alg, {alg->mul(y, alg->mul(y, y)), y});
  Mat m = h.matrix();
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_elem(*alg, rng, 4);
    CHECK(m.apply(dense_of(a, alg->dim())) == h.apply(dense_of(a, alg->dim())));
  }
}
