#include "dmt/scheme.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dmt {

namespace {

constexpr size_t kDualDimCap = 512;
constexpr size_t kFullBasisVerifyCap = 256;

SparseElem gen_sparse(const MonomialAlgebra& R, size_t v) {
  return {{R.var_index(v), 1}};
}

SparseElem from_accum_map(const std::map<size_t, uint8_t>& acc) {
  SparseElem out;
  for (const auto& [i, c] : acc)
    if (c) out.emplace_back(i, c);
  return out;
}

void accum(const Field& k, std::map<size_t, uint8_t>& acc, size_t i, uint8_t c) {
  if (!c) return;
  auto [it, fresh] = acc.emplace(i, c);
  if (!fresh) {
    it->second = k.add(it->second, c);
    if (!it->second) acc.erase(it);
  }
}

SparseElem swap_tensor(const TensorAlgebra& sq, const SparseElem& a) {
  SparseElem out;
  out.reserve(a.size());
  for (const auto& [t, c] : a) out.emplace_back(sq.pair_index(sq.right_of(t), sq.left_of(t)), c);
  std::sort(out.begin(), out.end());
  return out;
}

// bound^ of a single variable, guarded against blowing the dimension cap
uint32_t checked_pow(long p, long e) {
  size_t b = 1;
  for (long i = 0; i < e; ++i) {
    b *= static_cast<size_t>(p);
    if (b > kAlgebraDimCap) throw cap_error("variable bound exceeds the algebra dimension cap");
  }
  return static_cast<uint32_t>(b);
}

int p_power_order(const Algebra& R, const SparseElem& z) {
  SparseElem cur = z;
  int s = 0;
  while (!cur.empty()) {
    cur = R.pth_power(cur);
    if (++s > 64) throw std::logic_error("element is not nilpotent under p-th powers");
  }
  return s;
}

}  // namespace

std::vector<size_t> Scheme::augmentation_basis() const {
  std::vector<size_t> out;
  out.reserve(dim() - 1);
  for (size_t i = 0; i < dim(); ++i)
    if (i != ring->unit_index()) out.push_back(i);
  return out;
}

std::shared_ptr<const MonomialAlgebra> Scheme::monomial_ring() const {
  return std::dynamic_pointer_cast<const MonomialAlgebra>(ring);
}

SchemePtr Scheme::make(AlgebraPtr ring, AlgHom comul, AlgHom antipode, std::string name,
                       std::optional<AlgHom> shift_versch) {
  auto sq = std::dynamic_pointer_cast<const TensorAlgebra>(comul.target());
  if (!sq || sq->left() != ring || sq->right() != ring)
    throw std::invalid_argument("comultiplication must land in ring (x) ring");
  if (comul.source() != ring) throw std::invalid_argument("comultiplication source mismatch");
  if (antipode.source() != ring || antipode.target() != ring)
    throw std::invalid_argument("antipode must be an endomorphism of the ring");
  if (shift_versch && (shift_versch->source() != ring || shift_versch->target() != ring))
    throw std::invalid_argument("Verschiebung pullback must be an endomorphism of the ring");
  return std::shared_ptr<Scheme>(new Scheme{std::move(ring), std::move(sq), std::move(comul),
                                            std::move(antipode), std::move(name),
                                            std::move(shift_versch)});
}

// ---- builders ----

SchemePtr build_alpha(FieldPtr k, long n) {
  if (n < 1) throw std::invalid_argument("alpha tower height must be at least 1");
  uint32_t bound = checked_pow(k->p(), n);
  auto R = MonomialAlgebra::make(k, {"x"}, {bound});
  auto sq = TensorAlgebra::make(R, R);
  SparseElem x = gen_sparse(*R, 0);
  SparseElem dx = sparse_add(*k, sq->embed_left(x), sq->embed_right(x));
  AlgHom comul = AlgHom::from_generator_images(R, sq, {dx});
  AlgHom s = AlgHom::from_generator_images(R, R, {sparse_scale(*k, k->neg(1), x)});
  std::ostringstream nm;
  nm << "alpha:" << bound;
  return Scheme::make(R, std::move(comul), std::move(s), nm.str());
}

SchemePtr build_witt(FieldPtr k, long n, long m) {
  if (n < 0 || m < 0) throw std::invalid_argument("Witt scheme parameters must be nonnegative");
  long p = k->p();
  uint32_t bound = checked_pow(p, m + 1);
  std::vector<std::string> names;
  std::vector<uint32_t> bounds;
  for (long i = 0; i <= n; ++i) {
    names.push_back("x" + std::to_string(i));
    bounds.push_back(bound);
  }
  auto R = MonomialAlgebra::make(k, names, bounds);
  auto sq = TensorAlgebra::make(R, R);
  const WittLaw& add = get_law(p, n, LawKind::add);
  const WittLaw& neg = get_law(p, n, LawKind::neg);

  std::vector<SparseElem> comul_imgs, s_imgs;
  for (long i = 0; i <= n; ++i) {
    std::vector<SparseElem> args;
    for (long t = 0; t <= i; ++t) args.push_back(sq->embed_left(gen_sparse(*R, t)));
    for (long t = 0; t <= i; ++t) args.push_back(sq->embed_right(gen_sparse(*R, t)));
    comul_imgs.push_back(eval_poly(*sq, add.polys[i], args));
    std::vector<SparseElem> nargs;
    for (long t = 0; t <= i; ++t) nargs.push_back(gen_sparse(*R, t));
    s_imgs.push_back(eval_poly(*R, neg.polys[i], nargs));
  }
  AlgHom comul = AlgHom::from_generator_images(R, sq, std::move(comul_imgs));
  AlgHom s = AlgHom::from_generator_images(R, R, std::move(s_imgs));

  // coordinate Verschiebung: the one-step shift
  std::vector<SparseElem> v_imgs;
  v_imgs.push_back({});
  for (long i = 1; i <= n; ++i) v_imgs.push_back(gen_sparse(*R, i - 1));
  AlgHom shift = AlgHom::from_generator_images(R, R, std::move(v_imgs));

  std::ostringstream nm;
  nm << "witt:" << n << "," << m;
  return Scheme::make(R, std::move(comul), std::move(s), nm.str(), std::move(shift));
}

SchemePtr build_ep(FieldPtr k) {
  long p = k->p();
  uint32_t bound = checked_pow(p, 2);
  auto R = MonomialAlgebra::make(k, {"x"}, {bound});
  auto sq = TensorAlgebra::make(R, R);
  SparseElem x = gen_sparse(*R, 0);
  std::map<size_t, uint8_t> acc;
  const Field& kk = *k;
  for (const auto& [t, c] : sq->embed_left(x)) accum(kk, acc, t, c);
  for (const auto& [t, c] : sq->embed_right(x)) accum(kk, acc, t, c);
  for (long j = 1; j <= p - 1; ++j) {
    Rational coeff = Rational(1) / Rational(factorial(j) * factorial(p - j));
    uint8_t c = kk.from_int(rational_mod_p(coeff, p));
    // x^{jp} has basis index jp in a single-variable ring
    size_t t = sq->pair_index(static_cast<size_t>(j * p), static_cast<size_t>((p - j) * p));
    accum(kk, acc, t, c);
  }
  AlgHom comul = AlgHom::from_generator_images(R, sq, {from_accum_map(acc)});
  // negation is the antipode here: every middle term of the comultiplication
  // multiplies out to x^{p^2} = 0, so the convolution identity closes on x
  AlgHom s = AlgHom::from_generator_images(R, R, {sparse_scale(kk, kk.neg(1), x)});
  return Scheme::make(R, std::move(comul), std::move(s), "ep");
}

SchemePtr product(SchemePtr G, SchemePtr H) {
  auto A = G->monomial_ring();
  auto B = H->monomial_ring();
  if (!A || !B) throw std::invalid_argument("product needs monomial-presented factors");
  if (!G->field()->same(*H->field())) throw std::invalid_argument("product factors over different fields");
  FieldPtr k = G->field();

  std::vector<std::string> names = A->var_names();
  {
    std::set<std::string> seen(names.begin(), names.end());
    for (const auto& nm : B->var_names()) {
      std::string cand = nm;
      while (seen.count(cand)) cand += "'";
      seen.insert(cand);
      names.push_back(cand);
    }
  }
  std::vector<uint32_t> bounds = A->bounds();
  bounds.insert(bounds.end(), H->monomial_ring()->bounds().begin(), H->monomial_ring()->bounds().end());
  auto R = MonomialAlgebra::make(k, names, bounds);
  auto sq = TensorAlgebra::make(R, R);

  size_t da = A->dim();
  // with A's variables in the low strides, an A-basis index embeds unchanged
  // and a B-basis index embeds as j * dim(A)
  auto embedA = [&](size_t i) { return i; };
  auto embedB = [&](size_t j) { return j * da; };

  std::vector<SparseElem> comul_imgs, s_imgs;
  std::optional<std::vector<SparseElem>> v_imgs;
  if (G->shift_versch && H->shift_versch) v_imgs.emplace();

  auto push_factor = [&](const Scheme& F, auto embed) {
    auto M = F.monomial_ring();
    const TensorAlgebra& fsq = *F.square;
    for (size_t v = 0; v < M->nvars(); ++v) {
      SparseElem img;
      for (const auto& [t, c] : F.comul.basis_image(M->var_index(v)))
        img.emplace_back(sq->pair_index(embed(fsq.left_of(t)), embed(fsq.right_of(t))), c);
      std::sort(img.begin(), img.end());
      comul_imgs.push_back(std::move(img));

      SparseElem simg;
      for (const auto& [t, c] : F.antipode.basis_image(M->var_index(v))) simg.emplace_back(embed(t), c);
      std::sort(simg.begin(), simg.end());
      s_imgs.push_back(std::move(simg));

      if (v_imgs) {
        SparseElem vimg;
        for (const auto& [t, c] : F.shift_versch->basis_image(M->var_index(v)))
          vimg.emplace_back(embed(t), c);
        std::sort(vimg.begin(), vimg.end());
        v_imgs->push_back(std::move(vimg));
      }
    }
  };
  push_factor(*G, embedA);
  push_factor(*H, embedB);

  AlgHom comul = AlgHom::from_generator_images(R, sq, std::move(comul_imgs));
  AlgHom s = AlgHom::from_generator_images(R, R, std::move(s_imgs));
  std::optional<AlgHom> shift;
  if (v_imgs) shift = AlgHom::from_generator_images(R, R, std::move(*v_imgs));
  return Scheme::make(R, std::move(comul), std::move(s), G->name + " x " + H->name,
                      std::move(shift));
}

// ---- verification ----

namespace {

std::string check_one_comul_image(const Scheme& G, size_t idx, const std::string& label) {
  const Algebra& R = *G.ring;
  const Field& k = *R.field();
  const TensorAlgebra& sq = *G.square;
  size_t unit = R.unit_index();
  const SparseElem& D = G.comul.basis_image(idx);

  // counit laws
  std::map<size_t, uint8_t> accL, accR;
  for (const auto& [t, c] : D) {
    if (sq.left_of(t) == unit) accum(k, accL, sq.right_of(t), c);
    if (sq.right_of(t) == unit) accum(k, accR, sq.left_of(t), c);
  }
  SparseElem self{{idx, uint8_t(1)}};
  if (idx == unit) self = {{unit, uint8_t(1)}};
  if (from_accum_map(accL) != self) return "left counit law fails at " + label;
  if (from_accum_map(accR) != self) return "right counit law fails at " + label;

  if (swap_tensor(sq, D) != D) return "cocommutativity fails at " + label;

  // coassociativity in the flattened triple tensor power
  size_t d = R.dim();
  std::map<size_t, uint8_t> lhs, rhs;
  for (const auto& [t, c] : D) {
    size_t i = sq.left_of(t), j = sq.right_of(t);
    for (const auto& [t2, c2] : G.comul.basis_image(i))
      accum(k, lhs, t2 * d + j, k.mul(c, c2));
    for (const auto& [t2, c2] : G.comul.basis_image(j))
      accum(k, rhs, i * d * d + t2, k.mul(c, c2));
  }
  if (lhs != rhs) return "coassociativity fails at " + label;

  // antipode convolution identities
  std::map<size_t, uint8_t> convL, convR;
  for (const auto& [t, c] : D) {
    size_t i = sq.left_of(t), j = sq.right_of(t);
    for (const auto& [u, cu] : R.mul(G.antipode.basis_image(i), SparseElem{{j, uint8_t(1)}}))
      accum(k, convL, u, k.mul(c, cu));
    for (const auto& [u, cu] : R.mul(SparseElem{{i, uint8_t(1)}}, G.antipode.basis_image(j)))
      accum(k, convR, u, k.mul(c, cu));
  }
  SparseElem want;
  if (idx == unit) want = {{unit, uint8_t(1)}};
  if (from_accum_map(convL) != want) return "antipode law (left) fails at " + label;
  if (from_accum_map(convR) != want) return "antipode law (right) fails at " + label;
  return "";
}

}  // namespace

std::string verify_hopf(const Scheme& G) {
  const Algebra& R = *G.ring;
  const TensorAlgebra& sq = *G.square;
  size_t d = R.dim();
  size_t unit = R.unit_index();
  auto mono = G.monomial_ring();
  bool generator_mode = mono && G.comul.generator_form() && G.antipode.generator_form();

  if (generator_mode) {
    // the structure maps are algebra homomorphisms by construction, and both
    // sides of every law are algebra homomorphisms out of a truncated
    // polynomial ring, so checking on the variables is conclusive
    for (size_t v = 0; v < mono->nvars(); ++v) {
      std::string r = check_one_comul_image(G, mono->var_index(v), mono->var_names()[v]);
      if (!r.empty()) return r;
    }
    return "";
  }

  if (d > kFullBasisVerifyCap)
    throw cap_error("full-basis Hopf verification capped at dimension 256");

  // algebra-hom checks for the structure maps
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = i; j < d; ++j) {
      SparseElem prod = R.basis_mul(i, j);
      if (G.comul.apply(prod) != sq.mul(G.comul.basis_image(i), G.comul.basis_image(j)))
        return "comultiplication is not multiplicative at " + R.basis_name(i) + " * " + R.basis_name(j);
      if (G.antipode.apply(prod) != R.mul(G.antipode.basis_image(i), G.antipode.basis_image(j)))
        return "antipode is not multiplicative at " + R.basis_name(i) + " * " + R.basis_name(j);
      uint8_t eps = dense_of(prod, d)[unit];
      uint8_t want = (i == unit && j == unit) ? 1 : 0;
      if (eps != want) return "counit is not multiplicative at " + R.basis_name(i) + " * " + R.basis_name(j);
    }
  }
  if (G.comul.basis_image(unit) != SparseElem{{sq.unit_index(), uint8_t(1)}})
    return "comultiplication does not fix the unit";
  if (G.antipode.basis_image(unit) != SparseElem{{unit, uint8_t(1)}})
    return "antipode does not fix the unit";

  for (size_t i = 0; i < d; ++i) {
    std::string r = check_one_comul_image(G, i, R.basis_name(i));
    if (!r.empty()) return r;
  }
  return "";
}

// ---- homomorphisms ----

bool is_scheme_hom(const SchemeHom& f, std::string* complaint) {
  auto fail = [&](const std::string& why) {
    if (complaint) *complaint = why;
    return false;
  };
  if (!f.source || !f.target) return fail("missing endpoint");
  if (f.pullback.source() != f.target->ring || f.pullback.target() != f.source->ring)
    return fail("pullback endpoints do not match the schemes");
  const Scheme& S = *f.source;
  const Scheme& T = *f.target;
  const TensorAlgebra& ssq = *S.square;

  auto check_at = [&](size_t idx, const std::string& label) -> std::string {
    SparseElem lhs = S.comul.apply(f.pullback.basis_image(idx));
    std::map<size_t, uint8_t> acc;
    const Field& k = *S.field();
    for (const auto& [t, c] : T.comul.basis_image(idx)) {
      SparseElem piece = ssq.tensor(f.pullback.basis_image(T.square->left_of(t)),
                                    f.pullback.basis_image(T.square->right_of(t)));
      for (const auto& [u, cu] : piece) accum(k, acc, u, k.mul(c, cu));
    }
    if (lhs != from_accum_map(acc)) return "comultiplication compatibility fails at " + label;
    if (f.pullback.apply(T.antipode.basis_image(idx)) !=
        S.antipode.apply(f.pullback.basis_image(idx)))
      return "antipode compatibility fails at " + label;
    AlgElem img = dense_of(f.pullback.basis_image(idx), S.dim());
    uint8_t eps = img[S.ring->unit_index()];
    uint8_t want = (idx == T.ring->unit_index()) ? 1 : 0;
    if (eps != want) return "counit compatibility fails at " + label;
    return "";
  };

  auto tmono = T.monomial_ring();
  if (tmono) {
    for (size_t v = 0; v < tmono->nvars(); ++v) {
      std::string r = check_at(tmono->var_index(v), tmono->var_names()[v]);
      if (!r.empty()) return fail(r);
    }
    return true;
  }
  if (T.dim() > kFullBasisVerifyCap)
    throw cap_error("full-basis homomorphism verification capped at dimension 256");
  for (size_t i = 0; i < T.dim(); ++i) {
    std::string r = check_at(i, T.ring->basis_name(i));
    if (!r.empty()) return fail(r);
  }
  return true;
}

SchemeHom scheme_hom(SchemePtr source, SchemePtr target, AlgHom pullback) {
  SchemeHom f{std::move(source), std::move(target), std::move(pullback)};
  std::string why;
  if (!is_scheme_hom(f, &why)) throw std::invalid_argument("not a group-scheme homomorphism: " + why);
  return f;
}

// ---- Frobenius, Verschiebung, multiplication by p ----

SchemeHom frobenius_hom(SchemePtr G) {
  if (G->field()->degree() != 1)
    throw cap_error("Frobenius as an endomorphism is supported over prime fields only");
  std::vector<SparseElem> imgs(G->dim());
  for (size_t i = 0; i < G->dim(); ++i) imgs[i] = G->ring->pth_power(SparseElem{{i, uint8_t(1)}});
  AlgHom f = AlgHom::from_basis_images(G->ring, G->ring, std::move(imgs), false);
  return SchemeHom{G, G, std::move(f)};
}

SchemeHom categorical_verschiebung(SchemePtr G) {
  if (G->field()->degree() != 1)
    throw cap_error("Verschiebung is supported over prime fields only");
  SchemePtr GD = cartier_dual(G);
  // V on G is the dual of Frobenius on the dual, and dualizing a morphism
  // transposes its pullback
  size_t d = G->dim();
  std::vector<SparseElem> imgs(d);
  for (size_t j = 0; j < d; ++j) {
    for (const auto& [i, c] : GD->ring->pth_power(SparseElem{{j, uint8_t(1)}}))
      imgs[i].emplace_back(j, c);
  }
  AlgHom v = AlgHom::from_basis_images(G->ring, G->ring, std::move(imgs), false);
  return SchemeHom{G, G, std::move(v)};
}

SchemeHom verschiebung_hom(SchemePtr G) {
  if (G->shift_versch) return SchemeHom{G, G, *G->shift_versch};
  return categorical_verschiebung(std::move(G));
}

Mat multiplication_by(const Scheme& G, long c) {
  if (c < 0) throw std::invalid_argument("multiplication_by expects a nonnegative multiplier");
  size_t d = G.dim();
  const Field& k = *G.field();
  const TensorAlgebra& sq = *G.square;
  Mat M(G.field(), d, d);
  M.at(G.ring->unit_index(), G.ring->unit_index()) = 1;
  for (long step = 0; step < c; ++step) {
    Mat next(G.field(), d, d);
    for (size_t j = 0; j < d; ++j) {
      std::map<size_t, uint8_t> acc;
      for (const auto& [t, cc] : G.comul.basis_image(j)) {
        size_t a = sq.left_of(t), b = sq.right_of(t);
        SparseElem ma;
        for (size_t i = 0; i < d; ++i)
          if (M.at(i, a)) ma.emplace_back(i, M.at(i, a));
        for (const auto& [u, cu] : G.ring->mul(ma, SparseElem{{b, uint8_t(1)}}))
          accum(k, acc, u, k.mul(cc, cu));
      }
      for (const auto& [i, ci] : acc) next.at(i, j) = ci;
    }
    M = std::move(next);
  }
  return M;
}

// ---- Cartier duality ----

SchemePtr cartier_dual(SchemePtr G) {
  size_t d = G->dim();
  if (d > kDualDimCap) throw cap_error("Cartier dual is materialized up to dimension 512 only");
  const Algebra& R = *G->ring;
  const TensorAlgebra& sq = *G->square;
  FieldPtr k = G->field();

  // dual multiplication table from the comultiplication
  std::vector<std::vector<SparseElem>> table(d, std::vector<SparseElem>(d));
  for (size_t m = 0; m < d; ++m) {
    for (const auto& [t, c] : G->comul.basis_image(m))
      table[sq.left_of(t)][sq.right_of(t)].emplace_back(m, c);
  }
  std::vector<std::string> names(d);
  for (size_t i = 0; i < d; ++i) names[i] = R.basis_name(i) + "^";
  auto dual = StructureAlgebra::make(k, std::move(names), std::move(table), R.unit_index(), d <= 48);
  auto dsq = TensorAlgebra::make(dual, dual);

  // dual comultiplication from the multiplication
  std::vector<SparseElem> comul_imgs(d);
  auto mono = G->monomial_ring();
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) {
      if (mono) {
        if (auto prod = mono->mono_mul(i, j))
          comul_imgs[*prod].emplace_back(dsq->pair_index(i, j), 1);
      } else {
        for (const auto& [m, c] : R.basis_mul(i, j))
          comul_imgs[m].emplace_back(dsq->pair_index(i, j), c);
      }
    }
  }
  AlgHom dcomul = AlgHom::from_basis_images(dual, dsq, std::move(comul_imgs), false);

  std::vector<SparseElem> s_imgs(d);
  for (size_t j = 0; j < d; ++j)
    for (const auto& [i, c] : G->antipode.basis_image(j)) s_imgs[i].emplace_back(j, c);
  AlgHom ds = AlgHom::from_basis_images(dual, dual, std::move(s_imgs), false);

  // Cartier duality swaps Frobenius and Verschiebung, so the dual's
  // Verschiebung pullback is the transpose of the p-th power map
  std::optional<AlgHom> dv;
  if (k->degree() == 1) {
    std::vector<SparseElem> v_imgs(d);
    for (size_t j = 0; j < d; ++j)
      for (const auto& [i, c] : R.pth_power(SparseElem{{j, uint8_t(1)}})) v_imgs[i].emplace_back(j, c);
    dv = AlgHom::from_basis_images(dual, dual, std::move(v_imgs), false);
  }

  return Scheme::make(dual, std::move(dcomul), std::move(ds), G->name + "^D", std::move(dv));
}

// ---- quotients ----

QuotientResult quotient_scheme(SchemePtr G, const std::vector<AlgElem>& gens) {
  const Algebra& R = *G->ring;
  FieldPtr k = G->field();
  const Field& kk = *k;
  size_t d = R.dim();
  size_t unit = R.unit_index();

  EchelonSet ideal(k, d);
  for (const auto& g : gens) {
    if (g.size() != d) throw std::invalid_argument("ideal generator has the wrong dimension");
    if (g[unit]) throw std::invalid_argument("ideal generators must lie in the augmentation ideal");
    SparseElem gs = sparse_of(g);
    if (gs.empty()) continue;
    for (size_t m = 0; m < d; ++m)
      ideal.insert(dense_of(R.mul(SparseElem{{m, uint8_t(1)}}, gs), d));
  }
  for (const auto& [piv, row] : ideal.rows()) {
    (void)row;
    if (piv == unit) throw std::invalid_argument("ideal is the whole augmentation-free ring");
  }

  std::vector<size_t> pivots = ideal.pivots();
  std::vector<size_t> lift;
  std::vector<size_t> pos(d, SIZE_MAX);
  {
    std::set<size_t> pset(pivots.begin(), pivots.end());
    for (size_t j = 0; j < d; ++j)
      if (!pset.count(j)) {
        pos[j] = lift.size();
        lift.push_back(j);
      }
  }
  size_t qd = lift.size();

  // columns of the projection map
  std::vector<std::vector<uint8_t>> redcol(d, std::vector<uint8_t>(qd, 0));
  for (size_t j = 0; j < d; ++j)
    if (pos[j] != SIZE_MAX) redcol[j][pos[j]] = 1;
  for (const auto& [piv, row] : ideal.rows()) {
    for (size_t s = 0; s < d; ++s)
      if (pos[s] != SIZE_MAX && row[s]) redcol[piv][pos[s]] = kk.neg(row[s]);
  }
  std::vector<SparseElem> redS(d);
  for (size_t j = 0; j < d; ++j) redS[j] = sparse_of(redcol[j]);

  auto project = [&](const SparseElem& a) {
    std::map<size_t, uint8_t> acc;
    for (const auto& [t, c] : a)
      for (const auto& [i, ci] : redS[t]) accum(kk, acc, i, kk.mul(c, ci));
    return from_accum_map(acc);
  };

  std::vector<std::vector<SparseElem>> table(qd, std::vector<SparseElem>(qd));
  for (size_t i = 0; i < qd; ++i)
    for (size_t j = 0; j < qd; ++j) table[i][j] = project(R.basis_mul(lift[i], lift[j]));
  std::vector<std::string> names(qd);
  for (size_t i = 0; i < qd; ++i) names[i] = R.basis_name(lift[i]);
  if (pos[unit] == SIZE_MAX) throw std::logic_error("the unit class was eliminated");
  auto sc = StructureAlgebra::make(k, std::move(names), std::move(table), pos[unit], qd <= 48);
  auto scsq = TensorAlgebra::make(sc, sc);

  const TensorAlgebra& sq = *G->square;
  auto project_sq = [&](const SparseElem& a) {
    std::map<size_t, uint8_t> acc;
    for (const auto& [t, c] : a) {
      size_t l = sq.left_of(t), r = sq.right_of(t);
      for (const auto& [il, cl] : redS[l])
        for (const auto& [ir, cr] : redS[r])
          accum(kk, acc, scsq->pair_index(il, ir), kk.mul(c, kk.mul(cl, cr)));
    }
    return from_accum_map(acc);
  };

  std::vector<AlgElem> ideal_basis;
  for (const auto& [piv, row] : ideal.rows()) {
    (void)piv;
    ideal_basis.push_back(row);
    if (!project_sq(G->comul.apply(sparse_of(row))).empty())
      throw std::invalid_argument("ideal is not a Hopf ideal: comultiplication does not descend");
    if (!project(G->antipode.apply(sparse_of(row))).empty())
      throw std::invalid_argument("ideal is not a Hopf ideal: antipode does not preserve it");
  }

  std::vector<SparseElem> comul_imgs(qd), s_imgs(qd);
  for (size_t i = 0; i < qd; ++i) {
    comul_imgs[i] = project_sq(G->comul.basis_image(lift[i]));
    s_imgs[i] = project(G->antipode.basis_image(lift[i]));
  }
  AlgHom qcomul = AlgHom::from_basis_images(sc, scsq, std::move(comul_imgs), false);
  AlgHom qs = AlgHom::from_basis_images(sc, sc, std::move(s_imgs), false);

  std::optional<AlgHom> qshift;
  if (G->shift_versch) {
    bool descends = true;
    for (const auto& row : ideal_basis)
      if (!project(G->shift_versch->apply(sparse_of(row))).empty()) {
        descends = false;
        break;
      }
    if (descends) {
      std::vector<SparseElem> v_imgs(qd);
      for (size_t i = 0; i < qd; ++i) v_imgs[i] = project(G->shift_versch->basis_image(lift[i]));
      qshift = AlgHom::from_basis_images(sc, sc, std::move(v_imgs), false);
    }
  }

  SchemePtr Q = Scheme::make(sc, std::move(qcomul), std::move(qs), "(" + G->name + ")/ideal",
                             std::move(qshift));
  Mat proj = Mat::from_cols(k, redcol);
  AlgHom pb = hom_from_matrix(G->ring, sc, proj, false);
  return QuotientResult{Q, SchemeHom{Q, G, std::move(pb)}, std::move(proj), std::move(ideal_basis)};
}

// ---- invariants ----

namespace {

struct PrimSystem {
  std::vector<size_t> support;                    // square indices carrying constraints
  std::unordered_map<size_t, size_t> row_of;
  std::vector<size_t> aug_cols;
  std::optional<LinearSolver> solver;
};

SparseElem reduced_coproduct(const Scheme& G, size_t idx) {
  const Field& k = *G.field();
  const TensorAlgebra& sq = *G.square;
  size_t unit = G.ring->unit_index();
  std::map<size_t, uint8_t> acc;
  for (const auto& [t, c] : G.comul.basis_image(idx)) accum(k, acc, t, c);
  accum(k, acc, sq.pair_index(idx, unit), k.neg(1));
  accum(k, acc, sq.pair_index(unit, idx), k.neg(1));
  return from_accum_map(acc);
}

PrimSystem make_prim_system(const Scheme& G) {
  if (G.dim() > kFullBasisVerifyCap)
    throw cap_error("primitive-element system capped at dimension 256");
  PrimSystem ps;
  ps.aug_cols = G.augmentation_basis();
  std::vector<SparseElem> cols;
  cols.reserve(ps.aug_cols.size());
  std::set<size_t> supp;
  for (size_t m : ps.aug_cols) {
    cols.push_back(reduced_coproduct(G, m));
    for (const auto& [t, c] : cols.back()) {
      (void)c;
      supp.insert(t);
    }
  }
  ps.support.assign(supp.begin(), supp.end());
  for (size_t r = 0; r < ps.support.size(); ++r) ps.row_of[ps.support[r]] = r;
  Mat A(G.field(), ps.support.size(), ps.aug_cols.size());
  for (size_t j = 0; j < cols.size(); ++j)
    for (const auto& [t, c] : cols[j]) A.at(ps.row_of.at(t), j) = c;
  ps.solver.emplace(std::move(A));
  return ps;
}

}  // namespace

std::vector<AlgElem> alpha_module(const Scheme& G) {
  PrimSystem ps = make_prim_system(G);
  std::vector<AlgElem> out;
  for (const auto& kv : ps.solver->kernel()) {
    AlgElem z(G.dim(), 0);
    for (size_t j = 0; j < ps.aug_cols.size(); ++j) z[ps.aug_cols[j]] = kv[j];
    out.push_back(std::move(z));
  }
  return out;
}

long length(const Scheme& G) {
  long p = G.field()->p();
  size_t t = G.dim();
  long l = 0;
  while (t > 1 && t % static_cast<size_t>(p) == 0) {
    t /= static_cast<size_t>(p);
    ++l;
  }
  if (t != 1) throw std::logic_error("algebra dimension is not a power of p");
  return l;
}

long a_number(const Scheme& G) {
  SchemePtr Gp = std::make_shared<Scheme>(G);
  SchemeHom V = verschiebung_hom(Gp);
  const Algebra& R = *G.ring;
  std::vector<AlgElem> gens;
  for (size_t m : G.augmentation_basis()) {
    gens.push_back(dense_of(R.pth_power(SparseElem{{m, uint8_t(1)}}), R.dim()));
    gens.push_back(dense_of(V.pullback.basis_image(m), R.dim()));
  }
  QuotientResult H = quotient_scheme(Gp, gens);
  return length(*H.scheme);
}

long a_number_oracle(const Scheme& G) {
  if (G.field()->degree() != 1)
    throw cap_error("the direct a-number count needs a prime base field");
  PrimSystem ps = make_prim_system(G);
  size_t nc = ps.aug_cols.size();
  const Mat& A = ps.solver->matrix();
  Mat B(G.field(), A.rows() + G.dim(), nc);
  for (size_t i = 0; i < A.rows(); ++i)
    for (size_t j = 0; j < nc; ++j) B.at(i, j) = A.at(i, j);
  for (size_t j = 0; j < nc; ++j)
    for (const auto& [i, c] : G.ring->pth_power(SparseElem{{ps.aug_cols[j], uint8_t(1)}}))
      B.at(A.rows() + i, j) = c;
  return static_cast<long>(kernel_basis(B).size());
}

long cotangent_dim(const Scheme& G) {
  auto aug = G.augmentation_basis();
  auto mono = G.monomial_ring();
  if (mono) {
    // products of augmentation monomials are single monomials, so the square
    // of the ideal is spanned by an index set
    std::set<size_t> sq_span;
    for (size_t a : aug)
      for (size_t b : aug)
        if (auto t = mono->mono_mul(a, b)) sq_span.insert(*t);
    return static_cast<long>(aug.size() - sq_span.size());
  }
  EchelonSet span(G.field(), G.dim());
  for (size_t i = 0; i < aug.size(); ++i)
    for (size_t j = i; j < aug.size(); ++j)
      span.insert(dense_of(G.ring->basis_mul(aug[i], aug[j]), G.dim()));
  return static_cast<long>(aug.size() - span.rank());
}

long lie_dim(const Scheme& G) { return cotangent_dim(G); }

// ---- coordinatization ----

Coordinatized coordinatize(SchemePtr G) {
  auto mono = G->monomial_ring();
  if (mono && G->comul.generator_form() && G->antipode.generator_form())
    return Coordinatized{G, identity_hom(G->ring)};
  const Algebra& R = *G->ring;
  FieldPtr k = G->field();
  size_t d = R.dim();
  if (d > kFullBasisVerifyCap) throw cap_error("coordinatization capped at dimension 256");
  long p = k->p();

  auto aug = G->augmentation_basis();
  EchelonSet isq(k, d);
  for (size_t i = 0; i < aug.size(); ++i)
    for (size_t j = i; j < aug.size(); ++j)
      isq.insert(dense_of(R.basis_mul(aug[i], aug[j]), d));
  size_t g = aug.size() - isq.rank();

  // generators are sought among single basis elements whose classes span the
  // cotangent space; the Hopf algebras arising here always admit such a set
  std::vector<size_t> chosen;
  size_t attempts = 0;
  std::function<bool(EchelonSet&)> dfs = [&](EchelonSet& span) -> bool {
    if (chosen.size() == g) {
      size_t total = 1;
      for (size_t j : chosen) {
        size_t b = 1;
        int s = p_power_order(R, SparseElem{{j, uint8_t(1)}});
        for (int t = 0; t < s; ++t) {
          b *= static_cast<size_t>(p);
          if (b > d) return false;
        }
        total *= b;
        if (total > d) return false;
      }
      return total == d;
    }
    if (++attempts > 1024) return false;
    for (size_t j : aug) {
      if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      AlgElem ej(d, 0);
      ej[j] = 1;
      EchelonSet next = span;
      if (!next.insert(ej)) continue;
      chosen.push_back(j);
      if (dfs(next)) return true;
      chosen.pop_back();
    }
    return false;
  };
  {
    EchelonSet span = isq;
    if (!dfs(span)) throw std::runtime_error("coordinatization failed: no monomial generator set found");
  }

  std::vector<std::string> names;
  std::vector<uint32_t> bounds;
  std::vector<SparseElem> gen_imgs;
  for (size_t i = 0; i < g; ++i) {
    names.push_back("u" + std::to_string(i));
    int s = p_power_order(R, SparseElem{{chosen[i], uint8_t(1)}});
    bounds.push_back(checked_pow(p, s));
    gen_imgs.push_back({{chosen[i], uint8_t(1)}});
  }
  auto M = MonomialAlgebra::make(k, names, bounds);
  AlgHom phi = AlgHom::from_generator_images(M, G->ring, gen_imgs);
  Mat phim = phi.matrix();
  auto invm = inverse(phim);
  if (!invm) throw std::runtime_error("coordinatization failed: chosen generators do not span");

  std::vector<std::vector<uint8_t>> invcol(d);
  for (size_t j = 0; j < d; ++j) {
    invcol[j].resize(d);
    for (size_t i = 0; i < d; ++i) invcol[j][i] = invm->at(i, j);
  }
  auto msq = TensorAlgebra::make(M, M);
  const TensorAlgebra& gsq = *G->square;
  const Field& kk = *k;

  auto pull_sq = [&](const SparseElem& a) {
    std::map<size_t, uint8_t> acc;
    for (const auto& [t, c] : a) {
      const auto& va = invcol[gsq.left_of(t)];
      const auto& vb = invcol[gsq.right_of(t)];
      for (size_t ia = 0; ia < d; ++ia) {
        if (!va[ia]) continue;
        uint8_t ca = kk.mul(c, va[ia]);
        for (size_t ib = 0; ib < d; ++ib)
          if (vb[ib]) accum(kk, acc, msq->pair_index(ia, ib), kk.mul(ca, vb[ib]));
      }
    }
    return from_accum_map(acc);
  };
  auto pull = [&](const SparseElem& a) {
    std::map<size_t, uint8_t> acc;
    for (const auto& [t, c] : a)
      for (size_t i = 0; i < d; ++i)
        if (invcol[t][i]) accum(kk, acc, i, kk.mul(c, invcol[t][i]));
    return from_accum_map(acc);
  };

  std::vector<SparseElem> comul_imgs, s_imgs;
  std::optional<std::vector<SparseElem>> v_imgs;
  if (G->shift_versch) v_imgs.emplace();
  for (size_t i = 0; i < g; ++i) {
    comul_imgs.push_back(pull_sq(G->comul.basis_image(chosen[i])));
    s_imgs.push_back(pull(G->antipode.basis_image(chosen[i])));
    if (v_imgs) v_imgs->push_back(pull(G->shift_versch->basis_image(chosen[i])));
  }
  AlgHom mcomul = AlgHom::from_generator_images(M, msq, std::move(comul_imgs));
  AlgHom ms = AlgHom::from_generator_images(M, M, std::move(s_imgs));
  std::optional<AlgHom> mshift;
  if (v_imgs) mshift = AlgHom::from_generator_images(M, M, std::move(*v_imgs));
  SchemePtr out = Scheme::make(M, std::move(mcomul), std::move(ms), G->name, std::move(mshift));
  return Coordinatized{out, std::move(phi)};
}

// ---- isomorphism search ----

namespace {

// expand a span basis into all of its elements; capped
std::vector<AlgElem> span_elements(const FieldPtr& k, const std::vector<AlgElem>& basis,
                                   size_t width) {
  long q = k->order();
  double sz = 1;
  for (size_t i = 0; i < basis.size(); ++i) {
    sz *= static_cast<double>(q);
    if (sz > static_cast<double>(kIsoSearchCap))
      throw cap_error("isomorphism search space exceeds the cap");
  }
  std::vector<AlgElem> out;
  std::vector<uint8_t> tup(basis.size(), 0);
  const Field& kk = *k;
  do {
    AlgElem z(width, 0);
    for (size_t i = 0; i < basis.size(); ++i)
      if (tup[i])
        for (size_t j = 0; j < width; ++j)
          z[j] = kk.add(z[j], kk.mul(tup[i], basis[i][j]));
    out.push_back(std::move(z));
  } while (!basis.empty() && increment_tuple(tup, q));
  if (basis.empty()) return out;  // just the zero vector
  return out;
}

}  // namespace

std::optional<AlgHom> is_isomorphic_small(SchemePtr G, SchemePtr H) {
  if (!G->field()->same(*H->field())) return std::nullopt;
  if (G->dim() != H->dim()) return std::nullopt;
  if (cotangent_dim(*G) != cotangent_dim(*H)) return std::nullopt;
  if (alpha_module(*G).size() != alpha_module(*H).size()) return std::nullopt;
  {
    Mat fg = frobenius_hom(G).pullback.matrix();
    Mat fh = frobenius_hom(H).pullback.matrix();
    if (rank(fg) != rank(fh)) return std::nullopt;
    Mat vg = verschiebung_hom(G).pullback.matrix();
    Mat vh = verschiebung_hom(H).pullback.matrix();
    if (rank(vg) != rank(vh)) return std::nullopt;
  }

  Coordinatized cG = coordinatize(G);
  Coordinatized cH = coordinatize(H);
  auto MG = cG.scheme->monomial_ring();
  auto MH = cH.scheme->monomial_ring();
  size_t d = MG->dim();
  {
    std::vector<uint32_t> bg = MG->bounds(), bh = MH->bounds();
    std::sort(bg.begin(), bg.end());
    std::sort(bh.begin(), bh.end());
    if (bg != bh) return std::nullopt;
  }

  const Field& kk = *G->field();
  const TensorAlgebra& sqG = *cG.scheme->square;
  const TensorAlgebra& sqH = *cH.scheme->square;
  size_t ng = MH->nvars();

  // per-generator exponents of the nilpotency orders
  std::vector<int> order_exp(ng);
  for (size_t v = 0; v < ng; ++v) {
    uint32_t b = MH->bounds()[v];
    int s = 0;
    while (b > 1) {
      b /= static_cast<uint32_t>(kk.p());
      ++s;
    }
    order_exp[v] = s;
  }

  PrimSystem ps = make_prim_system(*cG.scheme);
  std::vector<AlgElem> prim_basis = alpha_module(*cG.scheme);

  // dependency order: a generator whose reduced coproduct only involves
  // already-processed variables admits an affine solve for its image
  std::vector<SparseElem> redH(ng);
  std::vector<std::set<size_t>> deps(ng);
  for (size_t v = 0; v < ng; ++v) {
    redH[v] = reduced_coproduct(*cH.scheme, MH->var_index(v));
    for (const auto& [t, c] : redH[v]) {
      (void)c;
      for (size_t side : {sqH.left_of(t), sqH.right_of(t)}) {
        Exps e = MH->exps_of(side);
        for (size_t w = 0; w < ng; ++w)
          if (e[w]) deps[v].insert(w);
      }
    }
  }
  std::vector<size_t> order;
  std::vector<char> placed(ng, 0), affine(ng, 0);
  for (;;) {
    bool progressed = false;
    for (size_t v = 0; v < ng; ++v) {
      if (placed[v]) continue;
      bool ok = !deps[v].count(v);
      for (size_t w : deps[v])
        if (!placed[w]) ok = false;
      if (ok) {
        order.push_back(v);
        placed[v] = 1;
        affine[v] = 1;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  for (size_t v = 0; v < ng; ++v)
    if (!placed[v]) order.push_back(v);  // cyclic: full scan for these

  std::vector<SparseElem> images(ng);
  size_t leaves = 0;

  // candidate images respecting primitivity or the affine comultiplication
  // constraint determined by earlier choices
  auto candidates_for = [&](size_t v) -> std::vector<SparseElem> {
    std::vector<SparseElem> out;
    auto push_checked = [&](const AlgElem& z) {
      SparseElem zs = sparse_of(z);
      if (zs.empty()) return;
      if (p_power_order(*MG, zs) != order_exp[v]) return;
      out.push_back(std::move(zs));
    };
    if (redH[v].empty()) {
      for (const auto& z : span_elements(G->field(), prim_basis, d)) push_checked(z);
      return out;
    }
    if (affine[v]) {
      // right-hand side (psi x psi) of the reduced coproduct, from the
      // already-fixed images
      std::map<size_t, uint8_t> acc;
      bool feasible = true;
      auto psi_of = [&](size_t hidx) {
        Exps e = MH->exps_of(hidx);
        SparseElem r{{MG->unit_index(), uint8_t(1)}};
        for (size_t w = 0; w < ng && !r.empty(); ++w)
          if (e[w]) r = MG->mul(r, MG->pow(images[w], e[w]));
        return r;
      };
      for (const auto& [t, c] : redH[v]) {
        SparseElem piece = sqG.tensor(psi_of(sqH.left_of(t)), psi_of(sqH.right_of(t)));
        for (const auto& [u, cu] : piece) accum(kk, acc, u, kk.mul(c, cu));
      }
      std::vector<uint8_t> rhs(ps.support.size(), 0);
      for (const auto& [t, c] : from_accum_map(acc)) {
        auto it = ps.row_of.find(t);
        if (it == ps.row_of.end()) {
          feasible = false;
          break;
        }
        rhs[it->second] = c;
      }
      if (!feasible) return out;
      std::vector<std::vector<uint8_t>> sols = ps.solver->all_solutions(rhs, kIsoSearchCap);
      for (const auto& sol : sols) {
        AlgElem z(d, 0);
        for (size_t j = 0; j < ps.aug_cols.size(); ++j) z[ps.aug_cols[j]] = sol[j];
        push_checked(z);
      }
      return out;
    }
    // self-referential comultiplication: scan the augmentation ideal
    long q = kk.order();
    double total = 1;
    for (size_t i = 0; i + 1 < d; ++i) {
      total *= static_cast<double>(q);
      if (total > static_cast<double>(kIsoSearchCap))
        throw cap_error("isomorphism search space exceeds the cap");
    }
    auto augs = cG.scheme->augmentation_basis();
    std::vector<uint8_t> tup(augs.size(), 0);
    while (increment_tuple(tup, q)) {
      AlgElem z(d, 0);
      for (size_t i = 0; i < augs.size(); ++i) z[augs[i]] = tup[i];
      push_checked(z);
    }
    return out;
  };

  std::function<std::optional<AlgHom>(size_t)> dfs =
      [&](size_t pos) -> std::optional<AlgHom> {
    if (pos == order.size()) {
      if (++leaves > kIsoSearchCap) throw cap_error("isomorphism search space exceeds the cap");
      std::optional<AlgHom> psi;
      try {
        psi = AlgHom::from_generator_images(MH, cG.scheme->ring, images);
      } catch (const std::invalid_argument&) {
        return std::nullopt;
      }
      if (rank(psi->matrix()) != d) return std::nullopt;
      for (size_t v = 0; v < ng; ++v) {
        SparseElem lhs = cG.scheme->comul.apply(psi->basis_image(MH->var_index(v)));
        std::map<size_t, uint8_t> acc;
        for (const auto& [t, c] : cH.scheme->comul.basis_image(MH->var_index(v))) {
          SparseElem piece = sqG.tensor(psi->basis_image(sqH.left_of(t)),
                                        psi->basis_image(sqH.right_of(t)));
          for (const auto& [u, cu] : piece) accum(kk, acc, u, kk.mul(c, cu));
        }
        if (lhs != from_accum_map(acc)) return std::nullopt;
        if (psi->apply(cH.scheme->antipode.basis_image(MH->var_index(v))) !=
            cG.scheme->antipode.apply(psi->basis_image(MH->var_index(v))))
          return std::nullopt;
      }
      return psi;
    }
    size_t v = order[pos];
    for (auto& z : candidates_for(v)) {
      images[v] = std::move(z);
      if (auto r = dfs(pos + 1)) return r;
    }
    images[v].clear();
    return std::nullopt;
  };

  std::optional<AlgHom> psi = dfs(0);
  if (!psi) return std::nullopt;

  auto invH = inverse(cH.to_old.matrix());
  if (!invH) throw std::logic_error("coordinatization produced a singular change of basis");
  AlgHom h_to_m = hom_from_matrix(H->ring, MH, *invH, false);
  return compose_hom(cG.to_old, compose_hom(*psi, h_to_m));
}

// ---- graded structure ----

long witt_weight(const MonomialAlgebra& A, size_t basis_index) {
  long p = A.field()->p();
  long w = 0;
  long pw = 1;
  for (size_t v = 0; v < A.nvars(); ++v) {
    w += static_cast<long>(A.digit(basis_index, v)) * pw;
    pw *= p;
  }
  return w;
}

std::vector<size_t> graded_component(const MonomialAlgebra& A, long d) {
  std::vector<size_t> out;
  for (size_t i = 0; i < A.dim(); ++i)
    if (witt_weight(A, i) == d) out.push_back(i);
  return out;
}

}  // namespace dmt
