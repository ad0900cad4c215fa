#pragma once
// Divided-power differential operators on the integral line: the operators
// (1/p^i!) d^{p^i}/dx^{p^i}, the factorial congruences that keep them working
// modulo p, the Leibniz laws lambda_r they satisfy, and the dual of the
// Frobenius-kernel tower alpha_{p^{r+1}} presented through those laws.

#include "dmt/duality.hpp"

#include <vector>

namespace dmt {

// dense integer polynomial in one variable, coefficient at index d is the
// coefficient of x^d
using ZPoly = std::vector<BigInt>;

// apply (1/p^i!) d^{p^i}/dx^{p^i}.  Sends x^m to binom(m, p^i) x^{m-p^i},
// so the image of an integer polynomial is again integral.
ZPoly divided_power_apply(long p, long i, const ZPoly& f);

// factorial congruences behind the divided-power calculus, checked exactly
// over the integers across the full declared range:
//   * for m < p^{r+1} with base-p digits i_j, the quotient
//     m! / prod_j (p^j!)^{i_j} is congruent to prod_j i_j! mod p, a unit
//   * p^s! / p^{(p^s-1)/(p-1)} is congruent to (-1)^s mod p for s <= r
//   * p^s! / (p^i! (p^s - p^i)! p^{s-i}) is congruent to 1 mod p for i < s <= r
//   * p^{s+t}! / (p^s! (p^t!)^{p^s}) is congruent to 1 mod p for s + t <= r
CheckReport congruence_suite(long p, long r);

// for i < r the operator D^{(p^i)} maps the ideal (p, x^{p^r}) into itself,
// so it descends to Z[x]/(p, x^{p^r}); the bound is sharp, as the negative
// control D^{(p^r)}(x^{p^r}) = 1 escapes the ideal
CheckReport stability_check(long p, long r);

// on the subring generated by y = x^{p^r} the operator D^{(p^r)} reduces to
// d/dy modulo p: the coefficient binom(q p^r, p^r) is congruent to q
CheckReport derivation_check(long p, long r);

// the p^r composites D^{(p^0)e_0} ... D^{(p^{r-1})e_{r-1}} with exponents
// below p, evaluated at the origin, form a basis of the linear dual of
// k[x]/(x^{p^r}); verified as a full-rank p^r by p^r matrix
CheckReport functional_basis_check(long p, long r);

// Leibniz law of D^{(p^r)}: a polynomial in x_0..x_r, y_0..y_r with
// p-integral coefficients and every exponent below p such that
//   D^{(p^r)}(ab) = lambda_r(..., x_j := D^{(p^j)} acting on a,
//                              y_j := D^{(p^j)} acting on b, ...)
// where a monomial in the slots composes the operators on each tensor factor
// before multiplying the two results.  Variables follow law_vars(r): the
// x block then the y block.
struct LambdaLaw {
  long p = 0;
  long r = 0;
  MultiPoly poly;
};

// largest r admitted by lambda_poly for this prime
long lambda_level_cap(long p);

// construct lambda_r from the digit expansion of the binomial Leibniz
// formula and validate it exactly on all monomial pairs (x^s, x^t) with
// s + t <= 2 p^r.  Memoized; throws cap_error beyond lambda_level_cap and
// logic_error if integrality or validation ever failed.
const LambdaLaw& lambda_poly(long p, long r);

// lambda_i matches the Witt addition law phi_i after reducing both modulo p
// and the p-th powers of all variables, for every i <= r
CheckReport lambda_phi_congruence(long p, long r);

// the dual of the Frobenius-kernel tower alpha_{p^{r+1}}, computed two ways:
// the categorical Cartier dual, and the direct presentation
// k[y_0..y_r]/(y_0^p, ..., y_r^p) whose coaddition is the lambda chain
//   y_i |-> lambda_i(y_0 x 1, 1 x y_0, ..., y_i x 1, 1 x y_i).
// iso is the scheme isomorphism dual -> direct whose pullback sends y_i to
// ybar[i], the functional dual to the basis monomial x^{p^i}.
struct AlphaDualTower {
  SchemePtr tower;
  SchemePtr dual;
  SchemePtr direct;
  SchemeHom iso;
  std::vector<AlgElem> ybar;
};

AlphaDualTower dual_of_alpha_tower(FieldPtr k, long r);

// operator content of the tower functionals: ybar[i] acts on the tower ring
// as the divided power D^{(p^i)} (so it kills every x^{p^j} with j != i and
// sends x^{p^i} to 1), the ybar[i] form the shift chain of a Dieudonne
// module generator ybar[r] of the dual, and Frobenius kills all of them
CheckReport alpha_tower_check(FieldPtr k, long r);

}  // namespace dmt
