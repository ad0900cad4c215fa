#include "dmt/poly.hpp"

#include "doctest.h"

using namespace dmt;

namespace {

const std::vector<std::string> XY = {"x", "y"};

MultiPoly X() { return MultiPoly::variable(XY, 0); }
MultiPoly Y() { return MultiPoly::variable(XY, 1); }

}  // namespace

TEST_CASE("ring arithmetic identities") {
  auto f = (X() + Y()).pow(2);
  auto g = X() * X() + X() * Y() * Rational(2) + Y() * Y();
  CHECK(f == g);
  CHECK((f - g).zero());
  CHECK(-(X() - Y()) == Y() - X());
  CHECK((X() * Y()) * X() == X().pow(2) * Y());
  auto h = X() + Y();
  CHECK(h * MultiPoly::constant(XY, Rational(0)) == MultiPoly(XY));
}

TEST_CASE("pow matches repeated multiplication") {
  auto f = X() + Y() * Rational(3) + MultiPoly::constant(XY, Rational(1, 2));
  MultiPoly acc = MultiPoly::constant(XY, Rational(1));
  for (unsigned long e = 0; e <= 6; ++e) {
    CHECK(f.pow(e) == acc);
    acc = acc * f;
  }
}

TEST_CASE("zero coefficients are dropped") {
  auto f = X() - X();
  CHECK(f.zero());
  CHECK(f.term_count() == 0);
  auto g = X() + Y();
  g.add_term({1, 0}, Rational(-1));
  CHECK(g == Y());
}

TEST_CASE("remap embeds into a larger variable list") {
  std::vector<std::string> big = {"a", "x", "y", "b"};
  auto f = X() * Y() + X().pow(3);
  auto g = f.remap(big, {1, 2});
  MultiPoly expect(big);
  expect.add_term({0, 1, 1, 0}, Rational(1));
  expect.add_term({0, 3, 0, 0}, Rational(1));
  CHECK(g == expect);
}

TEST_CASE("substitute composes polynomials") {
  auto f = X().pow(2) + Y();                    // x^2 + y
  std::vector<MultiPoly> images = {X() + Y(), X() * Y()};
  auto g = f.substitute(images);                // (x+y)^2 + xy
  auto expect = (X() + Y()).pow(2) + X() * Y();
  CHECK(g == expect);
  // constants survive substitution
  auto c = MultiPoly::constant(XY, Rational(5, 3));
  CHECK(c.substitute(images) == c);
}

TEST_CASE("exact division by p powers") {
  auto f = X() * Rational(12) + Y() * Rational(4);
  auto g = f.divide_by_p_power(2, 2);
  CHECK(g == X() * Rational(3) + Y());
  CHECK_THROWS_AS(f.divide_by_p_power(2, 3), std::domain_error);
  CHECK_THROWS_AS((X() * Rational(1, 2)).divide_by_p_power(2, 1), std::domain_error);
}

TEST_CASE("integrality detection") {
  CHECK((X() * Rational(7) - Y() * Rational(3)).is_integral());
  CHECK_FALSE((X() * Rational(1, 3)).is_integral());
  CHECK(MultiPoly(XY).is_integral());
}

TEST_CASE("weighted homogeneity") {
  std::vector<std::string> v = {"x0", "x1", "y0", "y1"};
  MultiPoly f(v);
  f.add_term({0, 1, 0, 0}, Rational(1));   // x1, weight 2
  f.add_term({0, 0, 0, 1}, Rational(1));   // y1, weight 2
  f.add_term({1, 0, 1, 0}, Rational(-1));  // x0 y0, weight 1+1
  std::vector<long> w = {1, 2, 1, 2};
  CHECK(f.is_weighted_homogeneous(w, 2));
  CHECK_FALSE(f.is_weighted_homogeneous(w, 3));
  f.add_term({1, 0, 0, 0}, Rational(1));
  CHECK_FALSE(f.is_weighted_homogeneous(w, 2));
}

TEST_CASE("json round trip") {
  auto f = X().pow(4) * Rational(-3, 7) + X() * Y() * Rational(2) +
           MultiPoly::constant(XY, Rational(1));
  auto j = f.to_json();
  CHECK(MultiPoly::from_json(j) == f);
  // coefficient serialization stays exact
  auto big = X() * Rational(BigInt("123456789012345678901234567890"));
  CHECK(MultiPoly::from_json(big.to_json()) == big);
}

TEST_CASE("display ordering follows weight then display sequence") {
  std::vector<std::string> v = {"x0", "x1", "y0", "y1"};
  MultiPoly f(v);
  f.add_term({0, 1, 0, 0}, Rational(1));
  f.add_term({0, 0, 0, 1}, Rational(1));
  f.add_term({1, 0, 1, 0}, Rational(-1));
  std::vector<long> w = {1, 2, 1, 2};
  std::vector<size_t> seq = {1, 3, 0, 2};  // x1, y1, x0, y0
  CHECK(f.to_display_string(w, seq) == "x1 + y1 - x0*y0");
}

TEST_CASE("display handles coefficients and powers") {
  std::vector<std::string> v = {"x0", "y0"};
  MultiPoly f(v);
  f.add_term({2, 2}, Rational(-2));
  f.add_term({3, 1}, Rational(-1));
  f.add_term({0, 0}, Rational(1, 3));
  std::string s = f.to_display_string({1, 1}, {0, 1});
  CHECK(s == "-x0^3*y0 - 2*x0^2*y0^2 + 1/3");
  CHECK(MultiPoly(v).to_display_string() == "0");
}
