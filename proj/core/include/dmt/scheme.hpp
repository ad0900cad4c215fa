#pragma once
// Finite commutative infinitesimal group schemes as explicit Hopf algebras:
// catalog constructors (additive towers, truncated Witt schemes, the
// supersingular E[p] kernel, products), axiom verification, Frobenius and
// Verschiebung, Cartier duality, quotients by Hopf ideals, and the numeric
// invariants (length, a-number, cotangent/Lie dimensions).
//
// Conventions: the counit is always the unit-coordinate functional (every
// construction here preserves that), so the augmentation ideal is spanned by
// the non-unit basis elements. Base field F_p is assumed wherever Frobenius
// descent would otherwise need twist bookkeeping.

#include "dmt/algebra.hpp"
#include "dmt/witt.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dmt {

struct Scheme;
using SchemePtr = std::shared_ptr<const Scheme>;

struct Scheme {
  AlgebraPtr ring;
  std::shared_ptr<const TensorAlgebra> square;  // ring (x) ring
  AlgHom comul;                                 // ring -> square
  AlgHom antipode;                              // ring -> ring
  std::string name;

  // set by builders that know the coordinate Verschiebung pullback (the shift
  // on Witt schemes); otherwise computed categorically on demand
  std::optional<AlgHom> shift_versch;

  const FieldPtr& field() const { return ring->field(); }
  size_t dim() const { return ring->dim(); }

  // counit as a functional: coordinate at the unit basis index
  uint8_t counit(const AlgElem& a) const { return a[ring->unit_index()]; }

  // non-unit basis indices span the augmentation ideal
  std::vector<size_t> augmentation_basis() const;

  // monomial-presented schemes expose their generators
  std::shared_ptr<const MonomialAlgebra> monomial_ring() const;

  static SchemePtr make(AlgebraPtr ring, AlgHom comul, AlgHom antipode, std::string name,
                        std::optional<AlgHom> shift_versch = std::nullopt);
};

// group-scheme homomorphism f : source -> target, stored contravariantly
struct SchemeHom {
  SchemePtr source, target;
  AlgHom pullback;  // target.ring -> source.ring
};

// builds the hom and checks Hopf compatibility of the pullback
SchemeHom scheme_hom(SchemePtr source, SchemePtr target, AlgHom pullback);
bool is_scheme_hom(const SchemeHom& f, std::string* complaint = nullptr);

// ---- catalog builders ----

SchemePtr build_alpha(FieldPtr k, long n);            // alpha_{p^n} = k[x]/(x^{p^n}), primitive x
SchemePtr build_witt(FieldPtr k, long n, long m);     // W_{n,m}
SchemePtr build_ep(FieldPtr k);                       // E[p] kernel, k[x]/(x^{p^2})
SchemePtr product(SchemePtr G, SchemePtr H);

// ---- verification ----

// empty report = all Hopf axioms pass; otherwise the first failure
std::string verify_hopf(const Scheme& G);

// ---- Frobenius / Verschiebung / p ----

SchemeHom frobenius_hom(SchemePtr G);      // pullback a -> a^p (base F_p)
SchemeHom verschiebung_hom(SchemePtr G);   // shift if preset, else categorical
SchemeHom categorical_verschiebung(SchemePtr G);  // (F_{G^D})^D, always computed

// pullback of the multiplication-by-c endomorphism, by the convolution
// recursion [c]^* = mu ((c-1)^* (x) id) Delta
Mat multiplication_by(const Scheme& G, long c);

// ---- duality ----

// dual Hopf algebra on the dual basis; multiplication = Delta^T, Delta = mu^T
SchemePtr cartier_dual(SchemePtr G);

// ---- quotients ----

struct QuotientResult {
  SchemePtr scheme;        // Spec(R/I), a closed subgroup scheme of G
  SchemeHom immersion;     // scheme -> G, pullback = the projection R -> R/I
  Mat projection;          // dim(R/I) x dim(R)
  std::vector<AlgElem> ideal_basis;
};

// quotient by the ideal generated by the given augmentation-ideal elements;
// throws if the induced comultiplication or antipode is ill-defined (the
// generators were not a Hopf ideal)
QuotientResult quotient_scheme(SchemePtr G, const std::vector<AlgElem>& gens);

// ---- invariants ----

std::vector<AlgElem> alpha_module(const Scheme& G);  // basis of primitives
long length(const Scheme& G);
long a_number(const Scheme& G);           // via the largest alpha-subgroup
long a_number_oracle(const Scheme& G);    // dim of primitives killed by F
long cotangent_dim(const Scheme& G);
long lie_dim(const Scheme& G);

// ---- isomorphism testing ----

constexpr size_t kIsoSearchCap = 1u << 20;

// re-present a scheme on a truncated polynomial ring (possible for every
// finite connected commutative Hopf algebra); returns the scheme plus the
// iso pullback new.ring -> old ring direction is recorded inside
struct Coordinatized {
  SchemePtr scheme;   // monomial-presented
  AlgHom to_old;      // new ring -> old ring, an isomorphism
};
Coordinatized coordinatize(SchemePtr G);

// brute-force Hopf-isomorphism search on generator images (after
// coordinatizing both sides); returns the pullback H.ring -> G.ring of an
// isomorphism G -> H, or nullopt when none exists
std::optional<AlgHom> is_isomorphic_small(SchemePtr G, SchemePtr H);

// ---- graded structure of Witt-shaped algebras ----

// d(x_0^{i_0} ... x_n^{i_n}) = i_0 + p i_1 + ... + p^n i_n
long witt_weight(const MonomialAlgebra& A, size_t basis_index);
std::vector<size_t> graded_component(const MonomialAlgebra& A, long d);

}  // namespace dmt
