// Explicit Cartier duality for Witt truncation schemes: the distinguished
// functional on A_{n,m}, the induced isomorphism W_{n,m}^D -> W_{m,n}, the
// bilinear pairing D(G) x D(G^D) -> W_r(F_p) with its F/V adjunctions, and
// left-invariant differential operators attached to linear functionals.
#pragma once

#include <map>
#include <memory>
#include <string>

#include "dmt/dieudonne.hpp"

namespace dmt {

// pass/fail verdict carrying the first counterexample
struct CheckReport {
  std::string check;
  bool pass = true;
  std::string counterexample;
  std::string note;  // recorded observations that are not part of the verdict

  void record(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      counterexample = why;
    }
  }
};

// functionals on a ring are row vectors on its monomial basis; the
// distinguished one takes value 1 on x_0^{p^m} and 0 elsewhere
AlgElem standard_functional(const Scheme& w);

// Verschiebung acting on functionals of G: transpose of the p-th power matrix
// of the ring of G (agrees with the categorical Verschiebung of the dual)
Mat dual_versch_matrix(const Scheme& G);

// left-invariant operator of a functional: a |-> (id (x) ybar)(comul a)
Mat operator_of_functional(const Scheme& G, const AlgElem& ybar);

// product of functionals in the dual algebra
AlgElem convolve(const Scheme& G, const AlgElem& a, const AlgElem& b);

// comul o D = (id (x) D) o comul
CheckReport left_invariance_check(const Scheme& G, const AlgElem& ybar);

// composition of operators realizes convolution of functionals
CheckReport operator_product_check(const Scheme& G, const AlgElem& a, const AlgElem& b);
// same, over every pair of dual-basis functionals
CheckReport operator_product_full_check(const Scheme& G);

// the distinguished functional is a Dieudonne generator of the dual of
// W_{n,m}: module membership, generation of the dual algebra by its V-chain,
// and the evaluation grid (V^j ybar^{p^i})(x_r^{p^{m-s}}) = [i==r][j==s]
CheckReport verify_standard_is_dieudonne(FieldPtr k, long n, long m);

// the iso W_{n,m}^D -> W_{m,n}, pullback x'_i -> V^{m-i} ybar
SchemeHom standard_iso(FieldPtr k, long n, long m);
// bijectivity plus Hopf-hom verification of standard_iso
CheckReport standard_iso_check(FieldPtr k, long n, long m);

// dual of a hom f: the pullback transposed, mapping dual(target) -> dual(source);
// the duals must be the Cartier duals of f's target and source
SchemeHom dual_hom(const SchemeHom& f, SchemePtr dual_of_target, SchemePtr dual_of_source);

// compares standard_iso(n,m) with the double-dual transport of
// standard_iso(m,n); the outcome is recorded in the note, never asserted
CheckReport standard_iso_composite_report(FieldPtr k, long n, long m);

// multiplicative behaviour of the standard operator on A_{n,m}:
// D(x_0^{p^m} x') = x' + x_0^{p^m} D(x') and D(x_i^{p^m} x') = x_i^{p^m} D(x')
CheckReport leibniz_witt_check(FieldPtr k, long n, long m);
// weight grading: the p^i-th power of the operator of V^j ybar drops weight-d
// monomials into the single component of weight d - p^(i+m-j)
CheckReport grading_check(FieldPtr k, long n, long m);

constexpr long kPairingGridCap = 8;  // digit-grid cells of the receiving module

// Cartier pairing D(G) x D(G^D) -> W_r(F_p), r = min(n,m), for a scheme G
// whose dual embeds into a power of W_{n,m}: V^{n+1} and F^{m+1} must kill
// D(G^D) (equivalently F^{n+1} and V^{m+1} kill D(G)).
//
// An element y of D(G^D) is the top of a chain realizing a hom G^D -> W_{n,m};
// transporting its dual through standard_iso(n,m) gives y^D : W_{m,n} -> G.
// The value <x,y> reads the pullback of x through y^D inside
// D(W_{m,n}) = A/(F^{n+1}, V^{m+1}): writing that module on the digit grid
// {F^i V^j g} (g the top coordinate, one digit below p per cell), the value
// is the Witt vector of digits along the diagonal of cells
// F^{n-r+t} V^{m-r+t} g (t = 0..r), the p^t-multiples of F^{n-r}V^{m-r}g.
// That diagonal ends at the socle cell F^n V^m g; reading it keeps the form
// nondegenerate, since a functional on a local module ring induces a perfect
// multiplication form exactly when it does not kill the socle. When n = m it
// is the plain constant term c of the normal form c*g + sum a_i F^i g +
// sum b_j V^j g; when n != m it is the coefficient of V^{m-n} g (resp.
// F^{n-m} g), the plain constant term being degenerate there.
class DualPairing {
 public:
  DualPairing(SchemePtr G, long n, long m);

  const SchemePtr& primal() const { return G_; }
  const SchemePtr& dual() const { return Gd_; }
  long n() const { return n_; }
  long m() const { return m_; }
  long r() const { return r_; }
  const DieudonneModule& primal_module() const { return *DG_; }
  const DieudonneModule& dual_module() const { return *DGd_; }

  // y^D : W_{m,n} -> G, verified as a scheme hom
  SchemeHom hom_of(const AlgElem& y) const;

  // <x, y> for x in D(G), y in D(G^D)
  WittVec pair(const AlgElem& x, const AlgElem& y) const;

  // <Fx,y> = <x,Vy> and <Vx,y> = <x,Fy> over every enumerated pair
  CheckReport adjunction_check() const;
  // trivial kernels on both sides, equal sizes, unit generator pairing
  CheckReport perfectness_check() const;

 private:
  Mat dual_pullback_matrix(const AlgElem& y) const;
  std::vector<uint8_t> socle_diagonal(const std::vector<uint8_t>& cell_digits) const;

  SchemePtr G_, Gd_;
  SchemePtr Wsrc_;  // W_{m,n}, the source of every hom_of(y)
  SchemePtr Wtgt_;  // W_{n,m}, the receptacle of the chain hom of y
  long n_, m_, r_;
  std::unique_ptr<DieudonneModule> DG_, DGd_, DW_;
  Mat Vd_;    // Verschiebung on functionals of G
  Mat Sinv_;  // inverse pullback matrix of standard_iso(n, m)
  std::vector<AlgElem> grid_;                       // cells F^i V^j g, i-major
  std::map<AlgElem, std::vector<uint8_t>> digits_;  // element -> grid digits
};

}  // namespace dmt
