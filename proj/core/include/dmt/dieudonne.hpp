#pragma once
// Dieudonné elements of a finite connected group scheme over F_p: ring
// elements whose comultiplication expands through a Witt addition law along
// their Verschiebung chain. The full set forms a module over the ring
// generated by F, V, and Witt-vector scalars; this header exposes its
// enumeration, the module operations, exactness checks, presentations by
// generators and relations, and the constructive inverse of the functor.

#include "dmt/scheme.hpp"
#include "dmt/witt.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dmt {

constexpr size_t kDieudonneEnumCap = size_t(1) << 16;

// smallest n with V^{(n+1)*} = 0 on the augmentation ideal
long dieudonne_level(const Scheme& G);

// x qualifies at level n when it is augmentation-free, its chain closes
// (V^{(n+1)*} x = 0), and Delta(x) equals the level-n addition law applied to
// the two tensor embeddings of the chain
bool is_dieudonne(const Scheme& G, const AlgElem& x, long n);

class DieudonneModule {
 public:
  const SchemePtr& scheme() const { return G_; }
  long level() const { return n_; }
  const Mat& versch_matrix() const { return V_; }
  const std::vector<AlgElem>& elements() const { return elems_; }
  size_t size() const { return elems_.size(); }
  size_t index_of(const AlgElem& x) const;
  bool contains(const AlgElem& x) const { return index_.count(x) != 0; }

  // [V^n x, ..., V x, x]
  std::vector<AlgElem> chain(const AlgElem& x) const;

  // the operations act on arbitrary ring elements; membership of the result
  // is a theorem for module elements, not a precondition checked here
  AlgElem add(const AlgElem& x, const AlgElem& y) const;
  AlgElem neg(const AlgElem& x) const;
  AlgElem frob(const AlgElem& x) const;
  AlgElem versch(const AlgElem& x) const;
  AlgElem p_mul(const AlgElem& x) const { return versch(frob(x)); }
  AlgElem int_mul(BigInt c, const AlgElem& x) const;
  // Teichmuller-digit action of a Witt scalar over F_p of length level+1
  AlgElem scalar(const WittVec& c, const AlgElem& x) const;

  friend DieudonneModule enumerate_D(SchemePtr G);

 private:
  DieudonneModule(SchemePtr G, long n, Mat V);
  SchemePtr G_;
  long n_;
  Mat V_;
  std::vector<AlgElem> elems_;  // sorted; index 0 is the zero element
  std::map<AlgElem, size_t> index_;
};

// level-by-level affine enumeration; throws cap_error past 2^16 elements
DieudonneModule enumerate_D(SchemePtr G);

// full scan of the augmentation ideal against is_dieudonne; nullopt when the
// candidate count exceeds cap
std::optional<std::vector<AlgElem>> brute_force_D(const Scheme& G, size_t cap);

// action of a scheme homomorphism f : G -> H on Dieudonné elements by
// precomposition: dom must be D(H), cod must be D(G); returns the index in
// cod of each dom element's image and verifies linearity over F and V
std::vector<size_t> induced_map(const SchemeHom& f, const DieudonneModule& dom,
                                const DieudonneModule& cod);

struct ExactnessReport {
  bool pullback_injective = false;
  bool middle_exact = false;
  bool restriction_surjective = false;
  std::string detail;
  bool ok() const { return pullback_injective && middle_exact && restriction_surjective; }
};

// for a short exact sequence sub -> mid -> quo (incl a closed immersion,
// proj an epimorphism), checks exactness of the induced sequence
// 0 -> D(quo) -> D(mid) -> D(sub) -> 0
ExactnessReport check_exactness(const DieudonneModule& dsub, const DieudonneModule& dmid,
                                const DieudonneModule& dquo, const SchemeHom& incl,
                                const SchemeHom& proj);

// ---- presentations ----

// one relation in the Dieudonné ring: lhs - rhs with each side c * F^a,
// c * V^b, or c * p^e acting on a single generator
struct RelTerm {
  char kind = 'p';  // 'F', 'V', or 'p'; kind 'p' with exp 0 is a plain scalar
  long exp = 0;
  BigInt coeff = 1;
};
struct Relation {
  RelTerm lhs;
  std::optional<RelTerm> rhs;  // present for mixed relations such as F - V
};
struct CyclicBlock {
  std::vector<Relation> relations;
};
struct ParsedModule {
  std::vector<CyclicBlock> components;
};

// grammar: "A/(F^2,V^2)", "A/A(F-V,p)", "(A/(F,V))^2", products with "x"
ParsedModule parse_module_text(const std::string& text);

// literal rendering of the relations as given
std::string module_text(const ParsedModule& m);

// canonical rendering at the prime p: each finite block is replaced by its
// minimal relation ladder, trivial blocks are dropped
std::string module_text(const ParsedModule& m, long p);

// log_p of the size of the abstract module, by elimination over Z/p^N
long parsed_module_length(const ParsedModule& m, long p);

struct ModulePresentation {
  size_t generators = 0;
  std::vector<AlgElem> generator_elems;   // aligned with blocks
  std::vector<std::string> blocks;        // canonical "A/(...)" text per generator
  std::string display;                    // grouped, e.g. "(A/(F,V))^2"
};

// greedy canonical generators, then a ladder of canonical relations per
// cyclic block, each block verified against the abstract quotient size
ModulePresentation module_presentation(const DieudonneModule& M);

// evaluate a relation on a candidate generator through the module operations
AlgElem apply_relation(const DieudonneModule& M, const Relation& r, const AlgElem& g);

// certifies D isomorphic to the abstract module described by m
bool modules_isomorphic(const ParsedModule& m, const DieudonneModule& D);

// validates that each x is a Dieudonné element, closes the set under the
// module operations, and quotients by the generated ideal
QuotientResult quotient_by_dieudonne_ideal(SchemePtr G, const std::vector<AlgElem>& xs);

// constructive inverse: a scheme whose Dieudonné module realizes m, built as
// a quotient of a product of truncated Witt schemes
SchemePtr inverse_functor(const ParsedModule& m, FieldPtr k);
SchemePtr inverse_functor(const std::string& text, FieldPtr k);

// the four pairwise non-isomorphic schemes of length two, with their modules
std::vector<std::pair<std::string, SchemePtr>> classify_length2(FieldPtr k);

}  // namespace dmt
