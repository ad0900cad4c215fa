#include "doctest.h"

#include "dmt/dieudonne.hpp"

#include <algorithm>
#include <set>

using namespace dmt;

namespace {

AlgElem var_elem(const Scheme& G, size_t v) {
  AlgElem x(G.dim(), 0);
  x[G.monomial_ring()->var_index(v)] = 1;
  return x;
}

void check_module_axioms(const DieudonneModule& M, size_t pair_cap = 400) {
  const Scheme& G = *M.scheme();
  long p = G.field()->p();
  const auto& E = M.elements();
  REQUIRE(E.size() >= 1);
  CHECK(vec_is_zero(E[0]));

  size_t checked = 0;
  for (size_t i = 0; i < E.size() && checked < pair_cap; ++i)
    for (size_t j = i; j < E.size() && checked < pair_cap; ++j, ++checked) {
      AlgElem s = M.add(E[i], E[j]);
      CHECK(M.contains(s));
      CHECK(s == M.add(E[j], E[i]));
      CHECK(M.frob(s) == M.add(M.frob(E[i]), M.frob(E[j])));
      CHECK(M.versch(s) == M.add(M.versch(E[i]), M.versch(E[j])));
    }
  for (auto& x : E) {
    CHECK(M.add(E[0], x) == x);
    CHECK(vec_is_zero(M.add(x, M.neg(x))));
    CHECK(M.versch(M.frob(x)) == M.frob(M.versch(x)));
    CHECK(vec_is_zero(M.int_mul(BigInt(1) << 40, M.int_mul(0, x))));
    long pn1 = 1;
    for (long i = 0; i <= M.level(); ++i) pn1 *= p;
    CHECK(vec_is_zero(M.int_mul(pn1, x)));
  }
  // associativity on a deterministic sample
  size_t n = E.size();
  for (size_t t = 0; t < std::min<size_t>(60, n * n * n); ++t) {
    size_t i = (t * 7919) % n, j = (t * 104729 + 1) % n, k = (t * 1299709 + 2) % n;
    CHECK(M.add(M.add(E[i], E[j]), E[k]) == M.add(E[i], M.add(E[j], E[k])));
  }
}

void check_scalar_action(const DieudonneModule& M) {
  const Scheme& G = *M.scheme();
  FieldPtr k = G.field();
  long p = k->p(), n = M.level();
  long pn1 = 1;
  for (long i = 0; i <= n; ++i) pn1 *= p;
  for (long c = 0; c < pn1; ++c) {
    WittVec w = witt_int(k, n, c);
    for (auto& x : M.elements()) CHECK(M.scalar(w, x) == M.int_mul(c, x));
  }
  // multiplicativity on Teichmuller representatives over the sample
  for (uint8_t a = 0; a < (uint8_t)p; ++a)
    for (uint8_t b = 0; b < (uint8_t)p; ++b) {
      WittVec ta = teichmuller(k, a, n), tb = teichmuller(k, b, n);
      WittVec tab = teichmuller(k, k->mul(a, b), n);
      for (size_t i = 0; i < std::min<size_t>(M.size(), 8); ++i) {
        const AlgElem& x = M.elements()[i];
        CHECK(M.scalar(ta, M.scalar(tb, x)) == M.scalar(tab, x));
      }
    }
}

}  // namespace

TEST_CASE("levels across the catalog") {
  auto k2 = Field::make_default(2), k3 = Field::make_default(3);
  CHECK(dieudonne_level(*build_alpha(k2, 1)) == 0);
  CHECK(dieudonne_level(*build_alpha(k2, 3)) == 0);
  CHECK(dieudonne_level(*build_witt(k2, 0, 1)) == 0);
  CHECK(dieudonne_level(*build_witt(k2, 1, 0)) == 1);
  CHECK(dieudonne_level(*build_witt(k2, 1, 1)) == 1);
  CHECK(dieudonne_level(*build_witt(k2, 2, 2)) == 2);
  CHECK(dieudonne_level(*build_ep(k2)) == 1);
  CHECK(dieudonne_level(*build_ep(k3)) == 1);
  CHECK(dieudonne_level(*product(build_alpha(k2, 1), build_witt(k2, 1, 1))) == 1);
}

TEST_CASE("enumeration matches the brute-force membership scan") {
  auto k2 = Field::make_default(2), k3 = Field::make_default(3), k5 = Field::make_default(5);
  std::vector<SchemePtr> cat = {
      build_alpha(k2, 1), build_alpha(k2, 2),          build_alpha(k2, 3),
      build_alpha(k3, 1), build_alpha(k3, 2),          build_alpha(k5, 1),
      build_witt(k2, 0, 1), build_witt(k2, 1, 0),      build_witt(k2, 1, 1),
      build_witt(k3, 0, 1), build_witt(k3, 1, 0),      build_ep(k2),
      build_ep(k3),       product(build_alpha(k2, 1), build_alpha(k2, 1)),
      cartier_dual(build_alpha(k2, 2))};
  for (auto& G : cat) {
    CAPTURE(G->name);
    auto M = enumerate_D(G);
    auto bf = brute_force_D(*G, size_t(1) << 16);
    REQUIRE(bf.has_value());
    CHECK(M.elements() == *bf);
  }
}

TEST_CASE("module size is p to the length") {
  auto k2 = Field::make_default(2), k3 = Field::make_default(3);
  std::vector<SchemePtr> cat = {build_alpha(k2, 1),
                                build_alpha(k2, 3),
                                build_witt(k2, 1, 1),
                                build_witt(k3, 1, 1),
                                build_ep(k2),
                                build_ep(k3),
                                product(build_alpha(k3, 1), build_alpha(k3, 2)),
                                cartier_dual(build_alpha(k3, 2))};
  for (auto& G : cat) {
    CAPTURE(G->name);
    auto M = enumerate_D(G);
    size_t expect = 1;
    for (long i = 0; i < length(*G); ++i) expect *= (size_t)G->field()->p();
    CHECK(M.size() == expect);
  }
}

TEST_CASE("witt coordinates add with carries") {
  auto k = Field::make_default(2);
  auto G = build_witt(k, 1, 1);
  auto M = enumerate_D(G);
  AlgElem x0 = var_elem(*G, 0), x1 = var_elem(*G, 1);
  CHECK(M.contains(x0));
  CHECK(M.contains(x1));
  // (0,x) + (0,x) = (0, 2x + x^2 carry) = (x^2 in the first slot)
  AlgElem sq(G->dim(), 0);
  sq[G->monomial_ring()->index_of({2, 0})] = 1;
  CHECK(M.add(x1, x1) == sq);
  CHECK(M.p_mul(x1) == sq);
  CHECK(M.versch(x1) == x0);
  // chain of the generator
  auto ch = M.chain(x1);
  REQUIRE(ch.size() == 2);
  CHECK(ch[0] == x0);
  CHECK(ch[1] == x1);
}

TEST_CASE("self-dual kernel has additive order p") {
  auto k = Field::make_default(2);
  auto M = enumerate_D(build_ep(k));
  CHECK(M.size() == 4);
  for (auto& x : M.elements()) CHECK(vec_is_zero(M.add(x, x)));
  // F and V agree on every element
  for (auto& x : M.elements()) CHECK(M.frob(x) == M.versch(x));
}

TEST_CASE("membership is stable above the minimal level") {
  auto k = Field::make_default(2);
  auto G = build_witt(k, 1, 1);
  AlgElem x0 = var_elem(*G, 0), x1 = var_elem(*G, 1);
  for (long n = 1; n <= 3; ++n) {
    CHECK(is_dieudonne(*G, x0, n));
    CHECK(is_dieudonne(*G, x1, n));
  }
  CHECK(is_dieudonne(*G, x0, 0));   // primitive with V x = 0
  CHECK(!is_dieudonne(*G, x1, 0));  // V x1 != 0
  AlgElem prod(G->dim(), 0);
  prod[G->monomial_ring()->index_of({1, 1})] = 1;
  CHECK(!is_dieudonne(*G, prod, 1));
}

TEST_CASE("module axioms hold on enumerated modules") {
  auto k2 = Field::make_default(2), k3 = Field::make_default(3);
  for (auto& G : {build_witt(k2, 1, 1), build_ep(k2), build_alpha(k2, 3),
                  product(build_alpha(k2, 1), build_alpha(k2, 1)), build_witt(k3, 1, 0),
                  build_ep(k3), cartier_dual(build_alpha(k2, 2))}) {
    CAPTURE(G->name);
    auto M = enumerate_D(G);
    check_module_axioms(M);
  }
}

TEST_CASE("witt scalar action agrees with the integer action") {
  auto k2 = Field::make_default(2), k3 = Field::make_default(3);
  for (auto& G : {build_witt(k2, 1, 1), build_ep(k2), build_alpha(k3, 2)}) {
    CAPTURE(G->name);
    auto M = enumerate_D(G);
    check_scalar_action(M);
  }
}

TEST_CASE("the nine-length module enumerates quickly") {
  auto k = Field::make_default(2);
  auto M = enumerate_D(build_witt(k, 2, 2));
  CHECK(M.size() == 512);
  CHECK(M.level() == 2);
  check_module_axioms(M, 200);
}

TEST_CASE("exact sequences induce exact module sequences") {
  auto k = Field::make_default(2);

  // ker(first coordinate) inside W_{1,0}
  {
    auto G = build_witt(k, 1, 0);
    auto sub = quotient_by_dieudonne_ideal(G, {var_elem(*G, 0)});
    auto quo = build_alpha(k, 1);
    auto proj = scheme_hom(G, quo,
                           AlgHom::from_generator_images(quo->monomial_ring(), G->ring,
                                                         {sparse_of(var_elem(*G, 0))}));
    CHECK(is_scheme_hom(proj));
    auto rep = check_exactness(enumerate_D(sub.scheme), enumerate_D(G), enumerate_D(quo),
                               sub.immersion, proj);
    CAPTURE(rep.detail);
    CHECK(rep.ok());
  }

  // ker(first coordinate) inside W_{1,1}, cokernel alpha_{p^2}
  {
    auto G = build_witt(k, 1, 1);
    auto sub = quotient_by_dieudonne_ideal(G, {var_elem(*G, 0)});
    auto quo = build_alpha(k, 2);
    auto proj = scheme_hom(G, quo,
                           AlgHom::from_generator_images(quo->monomial_ring(), G->ring,
                                                         {sparse_of(var_elem(*G, 0))}));
    CHECK(is_scheme_hom(proj));
    auto rep = check_exactness(enumerate_D(sub.scheme), enumerate_D(G), enumerate_D(quo),
                               sub.immersion, proj);
    CAPTURE(rep.detail);
    CHECK(rep.ok());
  }

  // Frobenius kernel of the p-divisible kernel scheme
  {
    auto G = build_ep(k);
    AlgElem x = var_elem(*G, 0);
    auto sub = quotient_by_dieudonne_ideal(G, {G->ring->pth_power(x)});
    auto quo = build_alpha(k, 1);
    auto proj = scheme_hom(G, quo,
                           AlgHom::from_generator_images(quo->monomial_ring(), G->ring,
                                                         {sparse_of(G->ring->pth_power(x))}));
    CHECK(is_scheme_hom(proj));
    auto rep = check_exactness(enumerate_D(sub.scheme), enumerate_D(G), enumerate_D(quo),
                               sub.immersion, proj);
    CAPTURE(rep.detail);
    CHECK(rep.ok());
  }
}

TEST_CASE("canonical presentations of the catalog modules") {
  auto k2 = Field::make_default(2), k3 = Field::make_default(3);
  auto disp = [](SchemePtr G) { return module_presentation(enumerate_D(G)).display; };
  CHECK(disp(build_witt(k2, 1, 1)) == "A/(F^2,V^2)");
  CHECK(disp(build_ep(k2)) == "A/(F-V,p)");
  CHECK(disp(build_ep(k3)) == "A/(F-V,p)");
  CHECK(disp(build_alpha(k2, 2)) == "A/(F^2,V)");
  CHECK(disp(cartier_dual(build_alpha(k2, 2))) == "A/(F,V^2)");
  CHECK(disp(build_alpha(k3, 1)) == "A/(F,V)");
  CHECK(disp(product(build_alpha(k2, 1), build_alpha(k2, 1))) == "(A/(F,V))^2");
  CHECK(disp(product(build_alpha(k2, 1), build_alpha(k2, 2))) == "A/(F,V) x A/(F^2,V)");

  auto pres = module_presentation(enumerate_D(build_witt(k2, 1, 1)));
  CHECK(pres.generators == 1);
  REQUIRE(pres.generator_elems.size() == 1);
  auto M = enumerate_D(build_witt(k2, 1, 1));
  auto pm = parse_module_text(pres.blocks[0]);
  for (auto& r : pm.components[0].relations)
    CHECK(vec_is_zero(apply_relation(M, r, pres.generator_elems[0])));
}

TEST_CASE("module text parses and round-trips") {
  CHECK(module_text(parse_module_text("A/(F^2,V^2)")) == "A/(F^2,V^2)");
  CHECK(module_text(parse_module_text("A/A(F-V,p)")) == "A/(F-V,p)");
  CHECK(module_text(parse_module_text("(A/(F,V))^2")) == "(A/(F,V))^2");
  CHECK(module_text(parse_module_text(" A / ( F - V , p ) ")) == "A/(F-V,p)");
  CHECK(module_text(parse_module_text("A/(V,F)")) == "A/(F,V)");
  CHECK(module_text(parse_module_text("A/(F,V) x A/(F,V)")) == "(A/(F,V))^2");
  CHECK_THROWS_AS(parse_module_text("A/()"), std::invalid_argument);
  CHECK_THROWS_AS(parse_module_text("B/(F)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_module_text("A/(F^0)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_module_text("A/(F) junk"), std::invalid_argument);
}

TEST_CASE("abstract lengths by p-adic elimination") {
  CHECK(parsed_module_length(parse_module_text("A/(F,V)"), 2) == 1);
  CHECK(parsed_module_length(parse_module_text("A/(F^2,V^2)"), 2) == 4);
  CHECK(parsed_module_length(parse_module_text("A/(F^2,V^2)"), 5) == 4);
  CHECK(parsed_module_length(parse_module_text("A/(F-V,p)"), 2) == 2);
  CHECK(parsed_module_length(parse_module_text("A/(F-V,p)"), 3) == 2);
  CHECK(parsed_module_length(parse_module_text("A/(F-V,p^2)"), 2) == 4);
  CHECK(parsed_module_length(parse_module_text("(A/(F,V))^3"), 2) == 3);
  CHECK(parsed_module_length(parse_module_text("A/(F^2,V^2,F-V)"), 2) == 2);
  CHECK(parsed_module_length(parse_module_text("A/(F^3,V^2)"), 2) == 6);
  CHECK(parsed_module_length(parse_module_text("A/(F,V,p)"), 2) == 1);
  CHECK_THROWS_AS(parsed_module_length(parse_module_text("A/(p^2)"), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(parsed_module_length(parse_module_text("A/(F-V)"), 2),
                  std::invalid_argument);
}

TEST_CASE("module isomorphism certificates") {
  auto k = Field::make_default(2);
  auto MW = enumerate_D(build_witt(k, 1, 1));
  auto ME = enumerate_D(build_ep(k));
  CHECK(modules_isomorphic(parse_module_text("A/(F^2,V^2)"), MW));
  CHECK(!modules_isomorphic(parse_module_text("A/(F^2,V^2)"), ME));
  CHECK(modules_isomorphic(parse_module_text("A/(F-V,p)"), ME));
  CHECK(modules_isomorphic(parse_module_text("A/(F^2,V^2,F-V)"), ME));
  CHECK(!modules_isomorphic(parse_module_text("A/(F,V)"), ME));
}

TEST_CASE("dieudonne ideal quotients validate their generators") {
  auto k = Field::make_default(2);
  auto G = build_witt(k, 1, 1);
  AlgElem prod(G->dim(), 0);
  prod[G->monomial_ring()->index_of({1, 1})] = 1;
  CHECK_THROWS_AS(quotient_by_dieudonne_ideal(G, {prod}), std::invalid_argument);
  auto q = quotient_by_dieudonne_ideal(G, {var_elem(*G, 0)});
  CHECK(q.scheme->dim() == 4);
  CHECK(verify_hopf(*q.scheme).empty());
}

TEST_CASE("inverse functor round-trips the length-two classification") {
  auto k = Field::make_default(2);
  std::vector<std::string> texts = {"(A/(F,V))^2", "A/(F^2,V)", "A/(F,V^2)", "A/(F-V,p)",
                                    "A/(F^2,V^2)"};
  for (auto& t : texts) {
    CAPTURE(t);
    auto S = inverse_functor(t, k);
    CHECK(verify_hopf(*S).empty());
    auto M = enumerate_D(S);
    CHECK(modules_isomorphic(parse_module_text(t), M));
  }
}

TEST_CASE("length-two schemes are pairwise distinct with the right invariants") {
  auto k = Field::make_default(2);
  auto cls = classify_length2(k);
  REQUIRE(cls.size() == 4);
  for (auto& [t, S] : cls) {
    CAPTURE(t);
    CHECK(S->dim() == 4);
    CHECK(verify_hopf(*S).empty());
  }
  std::map<std::string, long> an;
  for (auto& [t, S] : cls) an[t] = a_number(*S);
  CHECK(an["(A/(F,V))^2"] == 2);
  CHECK(an["A/(F^2,V)"] == 1);
  CHECK(an["A/(F,V^2)"] == 1);
  CHECK(an["A/(F-V,p)"] == 1);
  for (size_t i = 0; i < cls.size(); ++i)
    for (size_t j = i + 1; j < cls.size(); ++j) {
      CAPTURE(cls[i].first);
      CAPTURE(cls[j].first);
      CHECK(!is_isomorphic_small(cls[i].second, cls[j].second).has_value());
    }
}

TEST_CASE("the self-dual inverse matches the kernel scheme") {
  auto k = Field::make_default(2);
  auto S = inverse_functor("A/(F-V,p)", k);
  CHECK(S->dim() == 4);
  CHECK(is_isomorphic_small(S, build_ep(k)).has_value());
  auto A = inverse_functor("A/(F,V)", k);
  CHECK(is_isomorphic_small(A, build_alpha(k, 1)).has_value());
  auto A2 = inverse_functor("A/(F^2,V)", k);
  CHECK(is_isomorphic_small(A2, build_alpha(k, 2)).has_value());
  auto A2d = inverse_functor("A/(F,V^2)", k);
  CHECK(is_isomorphic_small(A2d, cartier_dual(build_alpha(k, 2))).has_value());
}

TEST_CASE("induced maps demand compatibility") {
  auto k = Field::make_default(2);
  auto G = build_witt(k, 1, 1);
  auto M = enumerate_D(G);
  auto f = frobenius_hom(G);
  auto im = induced_map(f, M, M);
  // Frobenius pullback raises to the p-th power, the module operation frob
  for (size_t i = 0; i < M.size(); ++i)
    CHECK(M.elements()[im[i]] == M.frob(M.elements()[i]));
}
