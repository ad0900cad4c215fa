#pragma once
// Universal Witt vector laws at desk scale. The addition/multiplication/
// negation families are produced by the ghost-component recursion over exact
// rationals, with an integrality assertion before every division by p^i, and
// cached on disk keyed by (p, n, kind).

#include "dmt/field.hpp"
#include "dmt/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dmt {

enum class LawKind { add, mul, neg };

std::string law_kind_name(LawKind k);
LawKind law_kind_from_name(const std::string& s);

struct WittLaw {
  long p = 0;
  long n = 0;
  LawKind kind = LawKind::add;
  // polys[i] is the level-i component; add/mul use vars (x0..xi, y0..yi),
  // neg uses (x0..xi)
  std::vector<MultiPoly> polys;

  nlohmann::json to_json() const;
  static WittLaw from_json(const nlohmann::json& j);
};

// variable lists in block order: all x's, then y's (then z's)
std::vector<std::string> law_vars(long n, int blocks = 2);

// ghost polynomial w_n of one block inside a blocks-many-block variable list
MultiPoly ghost_poly(long p, long n, int block = 0, int blocks = 2);

long law_level_cap(long p);

// pure generation, no cache involved
WittLaw generate_law(long p, long n, LawKind kind);

// memoized front end; honors DIEUDONNE_CACHE for the on-disk law store
const WittLaw& get_law(long p, long n, LawKind kind);
std::string law_cache_dir();

// weights p^i on both blocks; every monomial of polys[i] must have weighted
// degree exactly p^i (addition family)
bool check_homogeneity(const WittLaw& add_law, std::string* complaint = nullptr);

// symbolic identities used by the verify battery
bool ghost_identity_ok(const WittLaw& law);
bool lower_terms_ok(const WittLaw& add_law);      // phi_i - x_i - y_i avoids level i
bool shift_compat_ok(const WittLaw& add_law);     // phi_i(0,0,X,Y) = phi_{i-1}(X,Y)
bool symmetry_ok(const WittLaw& add_law);         // phi_i(X,Y) = phi_i(Y,X)
bool coassociativity_ok(long p, long n);          // phi(X, phi(Y,Z)) = phi(phi(X,Y), Z)

// ---- truncated Witt vectors over a coefficient field ----

struct WittVec {
  FieldPtr k;
  std::vector<uint8_t> a;  // components a_0..a_n

  long level() const { return static_cast<long>(a.size()) - 1; }
  bool operator==(const WittVec& o) const { return a == o.a; }
  std::string to_string() const;
};

WittVec witt_zero(FieldPtr k, long n);
WittVec witt_one(FieldPtr k, long n);
WittVec witt_add(const WittVec& u, const WittVec& v);
WittVec witt_mul(const WittVec& u, const WittVec& v);
WittVec witt_neg(const WittVec& u);
WittVec witt_sub(const WittVec& u, const WittVec& v);
WittVec teichmuller(FieldPtr k, uint8_t a, long n);
WittVec verschiebung_vec(const WittVec& u);  // (0, a_0, .., a_{n-1})
WittVec sigma_vec(const WittVec& u);         // componentwise Frobenius
WittVec witt_int(FieldPtr k, long n, long c);  // c * 1 by repeated addition

// W_n(F_p) <-> Z/p^{n+1}: the Teichmuller-expansion bijection, used as the
// arithmetic oracle for the law-based operations (prime fields only)
long teichmuller_lift_mod(long a, long p, long n);  // tau(a) mod p^{n+1}
long to_residue(const WittVec& u);
WittVec from_residue(FieldPtr k, long n, long r);

}  // namespace dmt
