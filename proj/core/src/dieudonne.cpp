#include "dmt/dieudonne.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dmt {

namespace {

void require_prime_field(const Scheme& G, const char* who) {
  if (G.field()->degree() != 1)
    throw std::invalid_argument(std::string(who) + ": prime base field required");
}

Mat versch_matrix_of(const Scheme& G) {
  if (G.shift_versch) return G.shift_versch->matrix();
  return verschiebung_hom(std::make_shared<Scheme>(G)).pullback.matrix();
}

long level_from_matrix(const Scheme& G, const Mat& V) {
  Mat M = V;
  for (long n = 0; n <= 64; ++n) {
    bool zero = true;
    for (size_t j = 0; j < G.dim() && zero; ++j) {
      if (j == G.ring->unit_index()) continue;
      for (size_t i = 0; i < G.dim(); ++i)
        if (M.at(i, j) != 0) {
          zero = false;
          break;
        }
    }
    if (zero) return n;
    M = V * M;
  }
  throw std::invalid_argument(
      "dieudonne_level: Verschiebung is not nilpotent on the augmentation ideal");
}

std::vector<AlgElem> chain_of(const Mat& V, const AlgElem& x, long n) {
  std::vector<AlgElem> ch(n + 1);
  ch[n] = x;
  for (long i = n - 1; i >= 0; --i) ch[i] = V.apply(ch[i + 1]);
  return ch;
}

AlgElem d_add(const Scheme& G, const Mat& V, long n, const AlgElem& x, const AlgElem& y) {
  const WittLaw& law = get_law(G.field()->p(), n, LawKind::add);
  auto cx = chain_of(V, x, n);
  auto cy = chain_of(V, y, n);
  std::vector<SparseElem> args;
  args.reserve(2 * (n + 1));
  for (auto& u : cx) args.push_back(sparse_of(u));
  for (auto& u : cy) args.push_back(sparse_of(u));
  return dense_of(eval_poly(*G.ring, law.polys[n], args), G.dim());
}

AlgElem d_neg(const Scheme& G, const Mat& V, long n, const AlgElem& x) {
  const WittLaw& law = get_law(G.field()->p(), n, LawKind::neg);
  auto cx = chain_of(V, x, n);
  std::vector<SparseElem> args;
  args.reserve(n + 1);
  for (auto& u : cx) args.push_back(sparse_of(u));
  return dense_of(eval_poly(*G.ring, law.polys[n], args), G.dim());
}

bool is_d_inner(const Scheme& G, const Mat& V, const WittLaw& law, long n, const AlgElem& x) {
  if (G.counit(x) != 0) return false;
  auto ch = chain_of(V, x, n);
  if (!vec_is_zero(V.apply(ch[0]))) return false;
  std::vector<SparseElem> args(2 * (n + 1));
  for (long j = 0; j <= n; ++j) {
    SparseElem s = sparse_of(ch[j]);
    args[j] = G.square->embed_left(s);
    args[n + 1 + j] = G.square->embed_right(s);
  }
  return G.comul.apply(sparse_of(x)) == eval_poly(*G.square, law.polys[n], args);
}

void row_scale(const Field& k, std::vector<uint8_t>& r, uint8_t c) {
  if (c == 1) return;
  for (auto& v : r)
    if (v) v = k.mul(c, v);
}

// dst -= c * src; the c == 1 prime-two case is a plain XOR so the compiler
// can vectorize the inner loop of the wide eliminations
void row_submul(const Field& k, std::vector<uint8_t>& dst, const std::vector<uint8_t>& src,
                uint8_t c) {
  size_t n = dst.size();
  uint8_t* d = dst.data();
  const uint8_t* s = src.data();
  if (k.p() == 2 && k.degree() == 1) {
    for (size_t i = 0; i < n; ++i) d[i] ^= s[i];
  } else {
    for (size_t i = 0; i < n; ++i)
      if (s[i]) d[i] = k.sub(d[i], k.mul(c, s[i]));
  }
}

// The per-level affine system [reduced coproduct; Verschiebung] u = rhs,
// eliminated once on the transpose so the working row count stays at the
// augmentation dimension rather than the tensor-square support size.
struct LevelSolver {
  const Scheme* G;
  FieldPtr k;
  size_t d = 0, c = 0, tcount = 0, W = 0;
  std::vector<size_t> aug;
  std::map<size_t, size_t> tpos;  // square index -> slot
  std::vector<std::vector<uint8_t>> R, E;
  std::vector<std::pair<size_t, size_t>> piv;  // (column, row), column-ascending
  std::vector<std::vector<uint8_t>> ker;       // combinations over aug coords

  LevelSolver(const Scheme& g, const Mat& V) : G(&g), k(g.field()) {
    d = g.dim();
    aug = g.augmentation_basis();
    c = aug.size();
    std::vector<SparseElem> dbar(c);
    for (size_t a = 0; a < c; ++a) {
      size_t m = aug[a];
      size_t il = g.square->pair_index(m, g.ring->unit_index());
      size_t ir = g.square->pair_index(g.ring->unit_index(), m);
      SparseElem prim;
      if (il < ir)
        prim = {{il, 1}, {ir, 1}};
      else
        prim = {{ir, 1}, {il, 1}};
      dbar[a] = sparse_sub(*k, g.comul.basis_image(m), prim);
      for (auto& [t, cv] : dbar[a]) tpos.emplace(t, 0);
    }
    size_t slot = 0;
    for (auto& [t, s] : tpos) s = slot++;
    tcount = slot;
    W = tcount + d;
    R.assign(c, {});
    E.assign(c, {});
    for (size_t a = 0; a < c; ++a) {
      R[a].assign(W, 0);
      for (auto& [t, cv] : dbar[a]) R[a][tpos.at(t)] = cv;
      for (size_t i = 0; i < d; ++i) R[a][tcount + i] = V.at(i, aug[a]);
      E[a].assign(c, 0);
      E[a][a] = 1;
    }
    std::vector<char> done(c, 0);
    for (size_t col = 0; col < W && piv.size() < c; ++col) {
      size_t r = c;
      for (size_t i = 0; i < c; ++i)
        if (!done[i] && R[i][col] != 0) {
          r = i;
          break;
        }
      if (r == c) continue;
      uint8_t inv = k->inv(R[r][col]);
      row_scale(*k, R[r], inv);
      row_scale(*k, E[r], inv);
      for (size_t s = 0; s < c; ++s) {
        if (s == r) continue;
        uint8_t cv = R[s][col];
        if (!cv) continue;
        row_submul(*k, R[s], R[r], cv);
        row_submul(*k, E[s], E[r], cv);
      }
      done[r] = 1;
      piv.push_back({col, r});
    }
    for (size_t i = 0; i < c; ++i)
      if (!done[i]) ker.push_back(E[i]);
  }

  std::optional<std::vector<uint8_t>> particular(const SparseElem& delta_rhs,
                                                 const AlgElem& v_rhs) const {
    std::vector<uint8_t> b(W, 0);
    for (auto& [t, cv] : delta_rhs) {
      auto it = tpos.find(t);
      if (it == tpos.end()) return std::nullopt;
      b[it->second] = cv;
    }
    for (size_t i = 0; i < d; ++i) b[tcount + i] = v_rhs[i];
    std::vector<uint8_t> combo(c, 0);
    for (auto& [col, r] : piv) {
      uint8_t cv = b[col];
      if (!cv) continue;
      row_submul(*k, b, R[r], cv);
      for (size_t j = 0; j < c; ++j)
        if (E[r][j]) combo[j] = k->add(combo[j], k->mul(cv, E[r][j]));
    }
    for (uint8_t v : b)
      if (v) return std::nullopt;
    return combo;
  }

  AlgElem materialize(const std::vector<uint8_t>& combo) const {
    AlgElem x(d, 0);
    for (size_t a = 0; a < c; ++a)
      if (combo[a]) x[aug[a]] = combo[a];
    return x;
  }
};

// base + every field combination of the rows, as aug-coordinate vectors
std::vector<std::vector<uint8_t>> affine_points(const Field& k, const std::vector<uint8_t>& base,
                                                const std::vector<std::vector<uint8_t>>& rows,
                                                size_t cap) {
  size_t q = k.order();
  size_t count = 1;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (count > cap / q) throw cap_error("Dieudonné enumeration exceeds its element cap");
    count *= q;
  }
  std::vector<std::vector<uint8_t>> out;
  out.reserve(count);
  std::vector<uint8_t> t(rows.size(), 0);
  do {
    auto v = base;
    for (size_t i = 0; i < rows.size(); ++i)
      if (t[i])
        for (size_t j = 0; j < v.size(); ++j)
          if (rows[i][j]) v[j] = k.add(v[j], k.mul(t[i], rows[i][j]));
    out.push_back(std::move(v));
  } while (increment_tuple(t, (long)q));
  return out;
}

long plog(long p, size_t sz) {
  long l = 0;
  size_t v = sz;
  while (v > 1) {
    if (v % (size_t)p) throw std::logic_error("size is not a power of p");
    v /= (size_t)p;
    ++l;
  }
  return l;
}

long ipow(long b, long e) {
  long r = 1;
  for (long i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

long dieudonne_level(const Scheme& G) {
  require_prime_field(G, "dieudonne_level");
  return level_from_matrix(G, versch_matrix_of(G));
}

bool is_dieudonne(const Scheme& G, const AlgElem& x, long n) {
  require_prime_field(G, "is_dieudonne");
  if (n < 0 || x.size() != G.dim())
    throw std::invalid_argument("is_dieudonne: bad level or coordinate length");
  Mat V = versch_matrix_of(G);
  const WittLaw& law = get_law(G.field()->p(), n, LawKind::add);
  return is_d_inner(G, V, law, n, x);
}

size_t DieudonneModule::index_of(const AlgElem& x) const {
  auto it = index_.find(x);
  if (it == index_.end())
    throw std::out_of_range("DieudonneModule::index_of: not a module element");
  return it->second;
}

std::vector<AlgElem> DieudonneModule::chain(const AlgElem& x) const {
  return chain_of(V_, x, n_);
}

AlgElem DieudonneModule::add(const AlgElem& x, const AlgElem& y) const {
  return d_add(*G_, V_, n_, x, y);
}

AlgElem DieudonneModule::neg(const AlgElem& x) const { return d_neg(*G_, V_, n_, x); }

AlgElem DieudonneModule::frob(const AlgElem& x) const { return G_->ring->pth_power(x); }

AlgElem DieudonneModule::versch(const AlgElem& x) const { return V_.apply(x); }

AlgElem DieudonneModule::int_mul(BigInt c, const AlgElem& x) const {
  long p = G_->field()->p();
  long pN = ipow(p, n_ + 1);
  BigInt r = c % pN;
  if (r < 0) r += pN;
  unsigned long cl = mpz_get_ui(r.get_mpz_t());
  AlgElem acc = G_->ring->zero();
  if (cl == 0) return acc;
  int hb = 63;
  while (!((cl >> hb) & 1)) --hb;
  for (int b = hb; b >= 0; --b) {
    acc = add(acc, acc);
    if ((cl >> b) & 1) acc = add(acc, x);
  }
  return acc;
}

AlgElem DieudonneModule::scalar(const WittVec& c, const AlgElem& x) const {
  long p = G_->field()->p();
  if (!c.k || c.k->p() != p || c.k->degree() != 1 || c.level() != n_)
    throw std::invalid_argument(
        "DieudonneModule::scalar: scalar must lie in W of the module level over F_p");
  const Field& k = *G_->field();
  AlgElem acc = G_->ring->zero();
  AlgElem cur = x;
  for (long i = 0; i <= n_; ++i) {
    // digit i acts through its p^{level-i} power, constant over F_p by Fermat
    unsigned long e = 1;
    for (long j = 0; j < n_ - i; ++j) e *= (unsigned long)p;
    uint8_t cv = k.pow(c.a[i], e);
    if (cv) acc = add(acc, vec_scale(k, cv, cur));
    if (i < n_) cur = p_mul(cur);
  }
  return acc;
}

DieudonneModule::DieudonneModule(SchemePtr G, long n, Mat V)
    : G_(std::move(G)), n_(n), V_(std::move(V)) {}

DieudonneModule enumerate_D(SchemePtr Gp) {
  if (!Gp) throw std::invalid_argument("enumerate_D: null scheme");
  const Scheme& G = *Gp;
  require_prime_field(G, "enumerate_D");
  long p = G.field()->p();
  Mat V = versch_matrix_of(G);
  long n = level_from_matrix(G, V);
  const WittLaw& law = get_law(p, n, LawKind::add);
  LevelSolver ls(G, V);
  const Field& k = *G.field();

  // level 0: primitives killed by Verschiebung
  std::vector<std::vector<AlgElem>> chains;
  {
    std::vector<uint8_t> zero_combo(ls.c, 0);
    for (auto& combo : affine_points(k, zero_combo, ls.ker, kDieudonneEnumCap))
      chains.push_back({ls.materialize(combo)});
  }
  for (long i = 1; i <= n; ++i) {
    const MultiPoly& phi = law.polys[i];
    MultiPoly lower = phi - MultiPoly::variable(phi.vars(), (size_t)i) -
                      MultiPoly::variable(phi.vars(), (size_t)(2 * i + 1));
    std::vector<std::vector<AlgElem>> next;
    for (auto& ch : chains) {
      std::vector<SparseElem> args(2 * (i + 1));
      for (long j = 0; j < i; ++j) {
        SparseElem s = sparse_of(ch[j]);
        args[j] = G.square->embed_left(s);
        args[i + 1 + j] = G.square->embed_right(s);
      }
      // slots i and 2i+1 stay empty: the lowered law has no level-i variables
      SparseElem rhs = eval_poly(*G.square, lower, args);
      auto part = ls.particular(rhs, ch[i - 1]);
      if (!part) continue;
      for (auto& combo : affine_points(k, *part, ls.ker, kDieudonneEnumCap)) {
        auto ext = ch;
        ext.push_back(ls.materialize(combo));
        next.push_back(std::move(ext));
        if (next.size() > kDieudonneEnumCap)
          throw cap_error("Dieudonné enumeration exceeds its element cap");
      }
    }
    chains = std::move(next);
  }
  std::vector<AlgElem> tops;
  tops.reserve(chains.size());
  for (auto& ch : chains) tops.push_back(ch.back());
  std::sort(tops.begin(), tops.end());
  DieudonneModule M(Gp, n, std::move(V));
  M.elems_ = std::move(tops);
  for (size_t i = 0; i < M.elems_.size(); ++i)
    if (!M.index_.emplace(M.elems_[i], i).second)
      throw std::logic_error("enumerate_D: duplicate top components");
  return M;
}

std::optional<std::vector<AlgElem>> brute_force_D(const Scheme& G, size_t cap) {
  require_prime_field(G, "brute_force_D");
  size_t q = (size_t)G.field()->order();
  size_t c = G.dim() - 1;
  size_t total = 1;
  for (size_t i = 0; i < c; ++i) {
    if (total > cap / q) return std::nullopt;
    total *= q;
  }
  Mat V = versch_matrix_of(G);
  long n = level_from_matrix(G, V);
  const WittLaw& law = get_law(G.field()->p(), n, LawKind::add);
  auto aug = G.augmentation_basis();
  std::vector<AlgElem> found;
  std::vector<uint8_t> t(c, 0);
  do {
    AlgElem x(G.dim(), 0);
    for (size_t i = 0; i < c; ++i) x[aug[i]] = t[i];
    if (is_d_inner(G, V, law, n, x)) found.push_back(std::move(x));
  } while (increment_tuple(t, (long)q));
  std::sort(found.begin(), found.end());
  return found;
}

std::vector<size_t> induced_map(const SchemeHom& f, const DieudonneModule& dom,
                                const DieudonneModule& cod) {
  if (dom.scheme() != f.target || cod.scheme() != f.source)
    throw std::invalid_argument("induced_map: module endpoints do not match the homomorphism");
  Mat P = f.pullback.matrix();
  // an algebra map intertwining Verschiebung carries chains to chains, so it
  // is automatically additive for the law and commutes with F and scalars
  if (!(P * dom.versch_matrix() == cod.versch_matrix() * P))
    throw std::invalid_argument("induced_map: pullback does not intertwine Verschiebung");
  std::vector<size_t> out(dom.size());
  for (size_t i = 0; i < dom.size(); ++i) {
    AlgElem img = f.pullback.apply(dom.elements()[i]);
    try {
      out[i] = cod.index_of(img);
    } catch (const std::out_of_range&) {
      throw std::invalid_argument(
          "induced_map: image of a module element is not a module element");
    }
  }
  return out;
}

ExactnessReport check_exactness(const DieudonneModule& dsub, const DieudonneModule& dmid,
                                const DieudonneModule& dquo, const SchemeHom& incl,
                                const SchemeHom& proj) {
  ExactnessReport rep;
  auto a = induced_map(proj, dquo, dmid);
  auto b = induced_map(incl, dmid, dsub);
  std::set<size_t> im_a(a.begin(), a.end());
  rep.pullback_injective = im_a.size() == a.size();
  std::set<size_t> ker_b;
  for (size_t i = 0; i < b.size(); ++i)
    if (b[i] == 0) ker_b.insert(i);
  rep.middle_exact = im_a == ker_b;
  std::set<size_t> im_b(b.begin(), b.end());
  rep.restriction_surjective = im_b.size() == dsub.size();
  std::ostringstream os;
  os << "|D(quo)|=" << dquo.size() << " |D(mid)|=" << dmid.size() << " |D(sub)|=" << dsub.size()
     << " |image|=" << im_a.size() << " |kernel|=" << ker_b.size();
  rep.detail = os.str();
  return rep;
}

// ---- abstract quotients of the Dieudonné ring ----

namespace {

// additive span of vectors over Z/p^N, kept triangular by p-adic pivots:
// each pass extracts the entry of globally minimal valuation, normalizes its
// vector so the pivot entry is exactly that power of p, and clears the pivot
// column from the rest of the pool
struct ZModSpan {
  long p, N, pN;
  size_t w;
  std::vector<std::vector<long>> basis;
  std::vector<std::pair<size_t, long>> pivots;  // (column, valuation), aligned

  ZModSpan(long p_, long N_, long pN_, size_t w_) : p(p_), N(N_), pN(pN_), w(w_) {}

  long val_of(long x) const {
    long v = 0;
    while (v < N && x % p == 0) {
      x /= p;
      ++v;
    }
    return v;
  }

  long unit_inverse(long u) const {
    long phi = pN / p * (p - 1);
    long base = u % pN, e = phi - 1, r = 1;
    while (e) {
      if (e & 1) r = (long)(((__int128)r * base) % pN);
      base = (long)(((__int128)base * base) % pN);
      e >>= 1;
    }
    return r;
  }

  void submul(std::vector<long>& dst, const std::vector<long>& src, long coef) const {
    for (size_t j = 0; j < w; ++j) {
      long s = (long)(((__int128)coef * src[j]) % pN);
      dst[j] = ((dst[j] - s) % pN + pN) % pN;
    }
  }

  void build(std::vector<std::vector<long>> pool) {
    for (auto& v : pool)
      for (auto& x : v) {
        x %= pN;
        if (x < 0) x += pN;
      }
    while (true) {
      size_t bi = pool.size(), bc = 0;
      long bv = N;
      for (size_t i = 0; i < pool.size(); ++i)
        for (size_t j = 0; j < w; ++j) {
          if (pool[i][j] == 0) continue;
          long v = val_of(pool[i][j]);
          if (v < bv) {
            bv = v;
            bi = i;
            bc = j;
          }
        }
      if (bi == pool.size()) break;
      auto piv = pool[bi];
      pool.erase(pool.begin() + bi);
      long uinv = unit_inverse(piv[bc] / ipow(p, bv));
      for (auto& x : piv) x = (long)(((__int128)x * uinv) % pN);
      for (auto& other : pool)
        if (other[bc] != 0) submul(other, piv, other[bc] / ipow(p, bv));
      basis.push_back(std::move(piv));
      pivots.push_back({bc, bv});
      pool.erase(std::remove_if(pool.begin(), pool.end(),
                                [](const std::vector<long>& v) {
                                  for (long x : v)
                                    if (x) return false;
                                  return true;
                                }),
                 pool.end());
    }
  }

  long logsize() const {
    long s = 0;
    for (auto& [col, v] : pivots) s += N - v;
    return s;
  }

  bool member(std::vector<long> v) const {
    for (auto& x : v) {
      x %= pN;
      if (x < 0) x += pN;
    }
    for (size_t i = 0; i < basis.size(); ++i) {
      long x = v[pivots[i].first];
      if (x == 0 || val_of(x) < pivots[i].second) continue;
      submul(v, basis[i], x / ipow(p, pivots[i].second));
    }
    for (long x : v)
      if (x) return false;
    return true;
  }
};

// normal-form monomial of the Dieudonné ring: at most one of f, v positive
struct AMono {
  long f = 0, v = 0;
};

struct ATerm {
  AMono m;
  long c = 1;
};

std::vector<ATerm> relation_terms(const Relation& r, long p, long pN) {
  auto term_of = [&](const RelTerm& t, long sign) -> ATerm {
    ATerm out;
    long c = (long)mpz_fdiv_ui(t.coeff.get_mpz_t(), (unsigned long)pN);
    if (t.kind == 'F')
      out.m.f = t.exp;
    else if (t.kind == 'V')
      out.m.v = t.exp;
    else
      for (long i = 0; i < t.exp; ++i) c = (long)(((__int128)c * p) % pN);
    out.c = ((sign * c) % pN + pN) % pN;
    return out;
  };
  std::vector<ATerm> ts;
  ts.push_back(term_of(r.lhs, 1));
  if (r.rhs) ts.push_back(term_of(*r.rhs, -1));
  return ts;
}

// multiply a term by F^s (or V^s with swap_fv), staying in normal form
ATerm shift_term(const ATerm& t, long s, bool by_v, long p, long pN) {
  ATerm out = t;
  long f = t.m.f, v = t.m.v;
  if (!by_v) {
    if (v == 0)
      f += s;
    else if (s >= v) {
      out.c = (long)(((__int128)out.c * ipow(p, v)) % pN);
      f = s - v;
      v = 0;
    } else {
      out.c = (long)(((__int128)out.c * ipow(p, s)) % pN);
      v -= s;
    }
  } else {
    if (f == 0)
      v += s;
    else if (s >= f) {
      out.c = (long)(((__int128)out.c * ipow(p, f)) % pN);
      v = s - f;
      f = 0;
    } else {
      out.c = (long)(((__int128)out.c * ipow(p, s)) % pN);
      f -= s;
    }
  }
  out.m = {f, v};
  return out;
}

// window slots: F^0..F^{a0-1}, then V^1..V^{b0-1}
std::optional<size_t> window_slot(const AMono& m, long a0, long b0) {
  if (m.f == 0 && m.v == 0) return 0;
  if (m.f > 0) return m.f < a0 ? std::optional<size_t>((size_t)m.f) : std::nullopt;
  return m.v < b0 ? std::optional<size_t>((size_t)(a0 - 1 + m.v)) : std::nullopt;
}

struct PureBounds {
  long a = -1, b = -1, e = -1;  // -1 means not yet derived
  bool unit_ideal = false;
};

long take_min(long cur, long cand) { return cur < 0 || cand < cur ? cand : cur; }

long big_valuation(const BigInt& x, long p) {
  if (x == 0) return -1;
  BigInt v = abs(x);
  long r = 0;
  while (r < 64 && v % p == 0) {
    v /= p;
    ++r;
  }
  return r;
}

// Upper bounds on F- and V-nilpotency orders and the p-exponent, each one a
// consequence of genuine left multiples of the given relations.  A pure power
// F^a yields p^a = V^a F^a; a unit-coefficient mixed relation F^s = c V^t
// yields the scalar relation F^{s+t} = c p^t and hence F-nilpotency once a
// p-exponent is known, and V^{s+t} likewise when c is also a unit.
PureBounds derive_bounds(const std::vector<Relation>& rels, long p) {
  PureBounds pb;
  struct MixedFV {
    long s, t, gf, gv;  // exponents and coefficient valuations, F then V side
  };
  struct PowScalar {
    long s, v;  // F^s (or V^s) congruent to a scalar of valuation v >= 1
  };
  std::vector<MixedFV> mixed;
  std::vector<PowScalar> powf, powv;

  auto pure_single = [&](char kind, long exp, const BigInt& coeff) {
    long g = big_valuation(coeff, p);
    if (kind == 'F') {
      if (g == 0) pb.a = take_min(pb.a, exp);
    } else if (kind == 'V') {
      if (g == 0) pb.b = take_min(pb.b, exp);
    } else {
      if (g < 0) return;
      long e = exp + g;
      if (e == 0) pb.unit_ideal = true;
      pb.e = take_min(pb.e, e);
    }
  };
  auto scalar_value = [&](const RelTerm& t) {
    BigInt v = t.coeff;
    for (long i = 0; i < t.exp; ++i) v *= p;
    return v;
  };

  for (auto& r : rels) {
    if (!r.rhs) {
      pure_single(r.lhs.kind, r.lhs.exp, r.lhs.coeff);
      continue;
    }
    const RelTerm& A = r.lhs;
    const RelTerm& B = *r.rhs;
    char ka = A.kind, kb = B.kind;
    if ((ka == 'F' && kb == 'V') || (ka == 'V' && kb == 'F')) {
      const RelTerm& tf = ka == 'F' ? A : B;
      const RelTerm& tv = ka == 'F' ? B : A;
      long gf = big_valuation(tf.coeff, p), gv = big_valuation(tv.coeff, p);
      if (gf < 0)
        pure_single('V', tv.exp, tv.coeff);
      else if (gv < 0)
        pure_single('F', tf.exp, tf.coeff);
      else
        mixed.push_back({tf.exp, tv.exp, gf, gv});
    } else if (ka == kb && ka != 'p') {
      if (A.exp == B.exp) pure_single(ka, A.exp, A.coeff - B.coeff);
    } else if (ka == 'p' && kb == 'p') {
      pure_single('p', 0, scalar_value(A) - scalar_value(B));
    } else {
      const RelTerm& op = ka == 'p' ? B : A;
      const RelTerm& sc = ka == 'p' ? A : B;
      if (big_valuation(op.coeff, p) != 0) continue;
      BigInt mu = scalar_value(sc);
      long v = big_valuation(mu, p);
      if (v < 0)
        pure_single(op.kind, op.exp, op.coeff);
      else if (v >= 1)
        (op.kind == 'F' ? powf : powv).push_back({op.exp, v});
      // valuation zero would make the operator invertible; no bound follows
    }
  }
  if (pb.unit_ideal) return pb;

  auto ceil_div = [](long x, long y) { return (x + y - 1) / y; };
  for (int pass = 0; pass < 16; ++pass) {
    long a = pb.a, b = pb.b, e = pb.e;
    if (pb.a >= 0) pb.e = take_min(pb.e, pb.a);
    if (pb.b >= 0) pb.e = take_min(pb.e, pb.b);
    if (pb.e >= 1) {
      for (auto& m : mixed) {
        if (m.gf == 0) {
          pb.a = take_min(pb.a, (m.s + m.t) * ceil_div(pb.e, m.t + m.gv));
          if (m.gv >= pb.e) pb.a = take_min(pb.a, m.s);
        }
        if (m.gv == 0) {
          pb.b = take_min(pb.b, (m.s + m.t) * ceil_div(pb.e, m.s + m.gf));
          if (m.gf >= pb.e) pb.b = take_min(pb.b, m.t);
        }
      }
      for (auto& q : powf) pb.a = take_min(pb.a, q.s * ceil_div(pb.e, q.v));
      for (auto& q : powv) pb.b = take_min(pb.b, q.s * ceil_div(pb.e, q.v));
    }
    if (a == pb.a && b == pb.b && e == pb.e) break;
  }
  return pb;
}

struct AbstractBlock {
  long a0 = 0, b0 = 0, N = 0, logsize = 0;
  bool trivial = false;
  std::optional<ZModSpan> span;

  long f_order() const {
    if (trivial) return 0;
    for (long i = 1; i < a0; ++i) {
      std::vector<long> v((size_t)(a0 + b0 - 1), 0);
      v[(size_t)i] = 1;
      if (span->member(v)) return i;
    }
    return a0;
  }
  long v_order() const {
    if (trivial) return 0;
    for (long j = 1; j < b0; ++j) {
      std::vector<long> v((size_t)(a0 + b0 - 1), 0);
      v[(size_t)(a0 - 1 + j)] = 1;
      if (span->member(v)) return j;
    }
    return b0;
  }
};

std::optional<AbstractBlock> analyze_block(const std::vector<Relation>& rels, long p) {
  PureBounds pb = derive_bounds(rels, p);
  if (pb.unit_ideal) {
    AbstractBlock ab;
    ab.trivial = true;
    return ab;
  }
  if (pb.a < 0 || pb.b < 0) return std::nullopt;
  AbstractBlock ab;
  ab.a0 = pb.a;
  ab.b0 = pb.b;
  ab.N = pb.a + pb.b;
  if (ab.N > 24) throw cap_error("abstract module window too large");
  size_t w = (size_t)(ab.a0 + ab.b0 - 1);
  long pN = 1;
  for (long i = 0; i < ab.N; ++i) {
    if (pN > (1L << 40) / p) throw cap_error("abstract module window too large");
    pN *= p;
  }
  // the derived pure powers are ideal members; their shifts populate the
  // window (for instance V^t F^{a0} = p^t F^{a0-t}), so they join the list
  std::vector<Relation> full = rels;
  full.push_back({RelTerm{'F', ab.a0, 1}, std::nullopt});
  full.push_back({RelTerm{'V', ab.b0, 1}, std::nullopt});
  if (pb.e >= 0) full.push_back({RelTerm{'p', pb.e, 1}, std::nullopt});
  std::vector<std::vector<long>> pool;
  long maxs = ab.a0 + ab.b0;
  for (auto& r : full) {
    auto ts = relation_terms(r, p, pN);
    auto shifted_vec = [&](long s, bool by_v) {
      std::vector<long> v(w, 0);
      for (auto& t : ts) {
        ATerm st = shift_term(t, s, by_v, p, pN);
        auto slot = window_slot(st.m, ab.a0, ab.b0);
        if (!slot) continue;
        v[*slot] = ((v[*slot] + st.c) % pN + pN) % pN;
      }
      return v;
    };
    for (long s = 0; s < maxs; ++s) pool.push_back(shifted_vec(s, false));
    for (long s = 1; s < maxs; ++s) pool.push_back(shifted_vec(s, true));
  }
  ab.span.emplace(p, ab.N, pN, w);
  ab.span->build(std::move(pool));
  ab.logsize = ab.N * (long)w - ab.span->logsize();
  if (ab.logsize < 0) throw std::logic_error("abstract module size underflow");
  return ab;
}

// ---- rendering ----

std::string render_term(const RelTerm& t) {
  if (t.kind == 'p' && t.exp == 0) return t.coeff.get_str();
  std::string s;
  if (t.coeff != 1) s += t.coeff.get_str();
  s += t.kind;
  if (t.exp != 1) s += "^" + std::to_string(t.exp);
  return s;
}

std::string render_relation(const Relation& r) {
  std::string s = render_term(r.lhs);
  if (r.rhs) s += "-" + render_term(*r.rhs);
  return s;
}

int rel_display_rank(const Relation& r) {
  if (r.rhs) return 2;
  if (r.lhs.kind == 'F') return 0;
  if (r.lhs.kind == 'V') return 1;
  return 3;
}

int rel_select_rank(const Relation& r) {
  if (r.rhs) return 0;
  if (r.lhs.kind == 'p') return 1;
  if (r.lhs.kind == 'F') return 2;
  return 3;
}

std::string render_block(std::vector<Relation> rels) {
  std::stable_sort(rels.begin(), rels.end(), [](const Relation& x, const Relation& y) {
    return rel_display_rank(x) < rel_display_rank(y);
  });
  std::string s = "A/(";
  for (size_t i = 0; i < rels.size(); ++i) {
    if (i) s += ",";
    s += render_relation(rels[i]);
  }
  return s + ")";
}

std::string group_blocks(std::vector<std::string> texts) {
  std::sort(texts.begin(), texts.end());
  std::string out;
  size_t i = 0;
  while (i < texts.size()) {
    size_t j = i;
    while (j < texts.size() && texts[j] == texts[i]) ++j;
    if (!out.empty()) out += " x ";
    if (j - i == 1)
      out += texts[i];
    else
      out += "(" + texts[i] + ")^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

// ---- finite module operation tables ----

constexpr size_t kPresentationCap = 64;

struct ModOps {
  const DieudonneModule& M;
  long p, pN;
  size_t sz;
  std::vector<uint16_t> frob, versch, pmul;
  std::vector<std::vector<uint16_t>> add;

  explicit ModOps(const DieudonneModule& m) : M(m) {
    sz = m.size();
    if (sz > kPresentationCap)
      throw cap_error("module presentation is capped at 64 elements");
    p = m.scheme()->field()->p();
    pN = ipow(p, m.level() + 1);
    frob.resize(sz);
    versch.resize(sz);
    pmul.resize(sz);
    add.assign(sz, std::vector<uint16_t>(sz, 0));
    for (size_t i = 0; i < sz; ++i) {
      frob[i] = (uint16_t)m.index_of(m.frob(m.elements()[i]));
      versch[i] = (uint16_t)m.index_of(m.versch(m.elements()[i]));
      for (size_t j = 0; j <= i; ++j) {
        uint16_t s = (uint16_t)m.index_of(m.add(m.elements()[i], m.elements()[j]));
        add[i][j] = add[j][i] = s;
      }
    }
    for (size_t i = 0; i < sz; ++i) pmul[i] = versch[frob[i]];
  }

  uint16_t int_mul(long c, uint16_t x) const {
    c %= pN;
    if (c < 0) c += pN;
    uint16_t acc = 0;
    if (!c) return acc;
    int hb = 62;
    while (!((c >> hb) & 1)) --hb;
    for (int b = hb; b >= 0; --b) {
      acc = add[acc][acc];
      if ((c >> b) & 1) acc = add[acc][x];
    }
    return acc;
  }

  std::set<uint16_t> closure(const std::vector<uint16_t>& gens) const {
    std::set<uint16_t> S{0};
    std::vector<uint16_t> stack = gens;
    while (!stack.empty()) {
      uint16_t z = stack.back();
      stack.pop_back();
      if (S.count(z)) continue;
      std::vector<uint16_t> cur(S.begin(), S.end());
      S.insert(z);
      stack.push_back(frob[z]);
      stack.push_back(versch[z]);
      stack.push_back(add[z][z]);
      for (uint16_t w : cur) stack.push_back(add[z][w]);
    }
    return S;
  }
};

struct CanonicalProbe {
  long minF = 0, minV = 0, minE = 0;  // nilpotency orders on the generator
  bool have_mixed = false;
  long ms = 0, mt = 0, mc = 0;  // minimal F^s = c V^t with unit c, by (s+t, s, c)
};

// smallest subset of the candidate family {F^minF, V^minV, mixed, p^minE}
// presenting a block of the given size; at equal subset size mixed and
// p-power relations are preferred, which turns the ladder of a self-dual
// kernel into (F-V, p) rather than (F^2, V^2, F-V)
std::optional<std::string> select_canonical(const CanonicalProbe& pr, long p, long target) {
  std::vector<Relation> cands;
  cands.push_back({RelTerm{'F', pr.minF, 1}, std::nullopt});
  cands.push_back({RelTerm{'V', pr.minV, 1}, std::nullopt});
  if (pr.have_mixed) cands.push_back({RelTerm{'F', pr.ms, 1}, RelTerm{'V', pr.mt, pr.mc}});
  cands.push_back({RelTerm{'p', pr.minE, 1}, std::nullopt});
  size_t nc = cands.size();
  std::vector<size_t> masks;
  for (size_t m = 1; m < (size_t(1) << nc); ++m) masks.push_back(m);
  auto key_of = [&](size_t m) {
    std::vector<int> ranks;
    for (size_t i = 0; i < nc; ++i)
      if (m & (size_t(1) << i)) ranks.push_back(rel_select_rank(cands[i]));
    std::sort(ranks.begin(), ranks.end());
    return std::make_pair(ranks.size(), ranks);
  };
  std::sort(masks.begin(), masks.end(),
            [&](size_t x, size_t y) { return key_of(x) < key_of(y); });
  for (size_t m : masks) {
    std::vector<Relation> rels;
    for (size_t i = 0; i < nc; ++i)
      if (m & (size_t(1) << i)) rels.push_back(cands[i]);
    auto ab = analyze_block(rels, p);
    if (!ab || ab->trivial) continue;
    if (ab->logsize == target) return render_block(rels);
  }
  return std::nullopt;
}

std::string canonical_block(const ModOps& ops, uint16_t g) {
  auto span = ops.closure({g});
  long target = plog(ops.p, span.size());
  CanonicalProbe pr;
  auto order_of = [&](const std::vector<uint16_t>& op) {
    uint16_t cur = g;
    for (long i = 1; i <= 32; ++i) {
      cur = op[cur];
      if (cur == 0) return i;
    }
    throw std::logic_error("module operation is not nilpotent on a generator");
  };
  pr.minF = order_of(ops.frob);
  pr.minV = order_of(ops.versch);
  pr.minE = order_of(ops.pmul);
  for (long tot = 2; tot <= pr.minF + pr.minV - 2 && !pr.have_mixed; ++tot)
    for (long s = 1; s < tot && !pr.have_mixed; ++s) {
      long t = tot - s;
      if (s >= pr.minF || t >= pr.minV || t < 1) continue;
      uint16_t lhs = g, rhs0 = g;
      for (long i = 0; i < s; ++i) lhs = ops.frob[lhs];
      for (long i = 0; i < t; ++i) rhs0 = ops.versch[rhs0];
      for (long c = 1; c < ops.pN && !pr.have_mixed; ++c) {
        if (c % ops.p == 0) continue;
        if (lhs == ops.int_mul(c, rhs0)) {
          pr.have_mixed = true;
          pr.ms = s;
          pr.mt = t;
          pr.mc = c;
        }
      }
    }
  auto sel = select_canonical(pr, ops.p, target);
  if (!sel)
    throw std::invalid_argument(
        "module_presentation: the canonical relation family does not close this block");
  return *sel;
}

// the same ladder carried out abstractly on the window span, so a parsed
// module can be put in canonical form without realizing a scheme; empty
// string for a trivial block, nullopt when the block is infinite or falls
// outside the canonical family
std::optional<std::string> canonical_block_text(const CyclicBlock& b, long p) {
  auto ab = analyze_block(b.relations, p);
  if (!ab) return std::nullopt;
  if (ab->trivial || ab->logsize == 0) return std::string();
  const ZModSpan& sp = *ab->span;
  size_t w = (size_t)(ab->a0 + ab->b0 - 1);
  CanonicalProbe pr;
  pr.minF = ab->f_order();
  pr.minV = ab->v_order();
  pr.minE = ab->N;
  for (long e = 1; e < ab->N; ++e) {
    std::vector<long> v(w, 0);
    v[0] = ipow(p, e);
    if (sp.member(v)) {
      pr.minE = e;
      break;
    }
  }
  long cb = ipow(p, pr.minE);
  for (long tot = 2; tot <= pr.minF + pr.minV - 2 && !pr.have_mixed; ++tot)
    for (long s = 1; s < tot && !pr.have_mixed; ++s) {
      long t = tot - s;
      if (s >= pr.minF || t >= pr.minV || t < 1) continue;
      for (long c = 1; c < cb && !pr.have_mixed; ++c) {
        if (c % p == 0) continue;
        std::vector<long> v(w, 0);
        v[(size_t)s] = 1;
        v[(size_t)(ab->a0 - 1 + t)] = -c;
        if (sp.member(v)) {
          pr.have_mixed = true;
          pr.ms = s;
          pr.mt = t;
          pr.mc = c;
        }
      }
    }
  return select_canonical(pr, p, ab->logsize);
}

}  // namespace

ModulePresentation module_presentation(const DieudonneModule& M) {
  ModulePresentation out;
  if (M.size() == 1) {
    out.display = "0";
    return out;
  }
  ModOps ops(M);
  // minimal generator count: index of the radical submodule (F,V,p)M
  std::vector<uint16_t> mg;
  for (size_t i = 0; i < ops.sz; ++i) {
    mg.push_back(ops.frob[i]);
    mg.push_back(ops.versch[i]);
  }
  size_t rad = ops.closure(mg).size();
  if (ops.sz % rad) throw std::logic_error("radical size does not divide the module size");
  long r_min = plog(ops.p, ops.sz / rad);

  std::vector<uint16_t> gens;
  std::set<uint16_t> span{0};
  while (span.size() < ops.sz) {
    size_t best = ops.sz;
    std::set<uint16_t> best_span;
    for (uint16_t cand = 0; cand < ops.sz; ++cand) {
      if (span.count(cand)) continue;
      auto g2 = gens;
      g2.push_back(cand);
      auto s = ops.closure(g2);
      if (s.size() > best_span.size()) {
        best = cand;
        best_span = std::move(s);
      }
    }
    gens.push_back((uint16_t)best);
    span = std::move(best_span);
  }
  if ((long)gens.size() != r_min)
    throw std::logic_error("greedy generators disagree with the minimal generator count");

  size_t prod = 1;
  for (auto g : gens) prod *= ops.closure({g}).size();
  if (prod != ops.sz)
    throw std::invalid_argument(
        "module_presentation: the module does not split along the greedy generators");

  std::vector<std::pair<std::string, uint16_t>> blocks;
  for (auto g : gens) blocks.push_back({canonical_block(ops, g), g});
  std::sort(blocks.begin(), blocks.end());
  out.generators = gens.size();
  std::vector<std::string> texts;
  for (auto& [t, g] : blocks) {
    out.blocks.push_back(t);
    out.generator_elems.push_back(M.elements()[g]);
    texts.push_back(t);
  }
  out.display = group_blocks(texts);
  return out;
}

AlgElem apply_relation(const DieudonneModule& M, const Relation& r, const AlgElem& g) {
  auto term_val = [&](const RelTerm& t) {
    AlgElem v = g;
    if (t.kind == 'F')
      for (long i = 0; i < t.exp; ++i) v = M.frob(v);
    else if (t.kind == 'V')
      for (long i = 0; i < t.exp; ++i) v = M.versch(v);
    else
      for (long i = 0; i < t.exp; ++i) v = M.p_mul(v);
    return M.int_mul(t.coeff, v);
  };
  AlgElem v = term_val(r.lhs);
  if (r.rhs) v = M.add(v, M.neg(term_val(*r.rhs)));
  return v;
}

// ---- module text ----

namespace {

struct ModuleParser {
  std::string s;
  size_t i = 0;

  explicit ModuleParser(const std::string& text) {
    for (char c : text)
      if (!std::isspace((unsigned char)c)) s += c;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("module text: " + why + " at position " + std::to_string(i) +
                                " of \"" + s + "\"");
  }
  char peek() const { return i < s.size() ? s[i] : '\0'; }
  char get() {
    if (i >= s.size()) fail("unexpected end");
    return s[i++];
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i;
  }
  long integer() {
    if (!std::isdigit((unsigned char)peek())) fail("expected an integer");
    long v = 0;
    while (std::isdigit((unsigned char)peek())) {
      v = v * 10 + (get() - '0');
      if (v > 1000000) fail("integer too large");
    }
    return v;
  }

  RelTerm term() {
    RelTerm t;
    bool coeff_seen = false;
    if (std::isdigit((unsigned char)peek())) {
      t.coeff = integer();
      coeff_seen = true;
    }
    char c = peek();
    if (c == 'F' || c == 'V' || c == 'p') {
      t.kind = get();
      t.exp = 1;
      if (peek() == '^') {
        get();
        t.exp = integer();
        if (t.exp < 1) fail("exponent must be positive");
      }
      return t;
    }
    if (coeff_seen) {
      t.kind = 'p';
      t.exp = 0;
      return t;
    }
    fail("expected a term");
  }

  Relation relation() {
    Relation r;
    r.lhs = term();
    if (peek() == '-') {
      get();
      r.rhs = term();
    }
    return r;
  }

  CyclicBlock block() {
    expect('A');
    expect('/');
    if (peek() == 'A') get();
    expect('(');
    CyclicBlock b;
    b.relations.push_back(relation());
    while (peek() == ',') {
      get();
      b.relations.push_back(relation());
    }
    expect(')');
    if (b.relations.empty()) fail("empty relation list");
    return b;
  }

  void factor(ParsedModule& m) {
    if (peek() == '(') {
      get();
      CyclicBlock b = block();
      expect(')');
      long mult = 1;
      if (peek() == '^') {
        get();
        mult = integer();
        if (mult < 1) fail("power must be positive");
        if (mult > 64) fail("power too large");
      }
      for (long i = 0; i < mult; ++i) m.components.push_back(b);
    } else {
      m.components.push_back(block());
    }
  }

  ParsedModule module() {
    ParsedModule m;
    factor(m);
    while (peek() == 'x') {
      get();
      factor(m);
    }
    if (i != s.size()) fail("trailing input");
    return m;
  }
};

}  // namespace

ParsedModule parse_module_text(const std::string& text) {
  return ModuleParser(text).module();
}

std::string module_text(const ParsedModule& m) {
  std::vector<std::string> texts;
  for (auto& b : m.components) texts.push_back(render_block(b.relations));
  return group_blocks(std::move(texts));
}

std::string module_text(const ParsedModule& m, long p) {
  std::vector<std::string> texts;
  for (auto& b : m.components) {
    auto t = canonical_block_text(b, p);
    if (!t)
      texts.push_back(render_block(b.relations));  // not canonicalizable, keep as given
    else if (!t->empty())
      texts.push_back(std::move(*t));
  }
  if (texts.empty()) return "0";
  return group_blocks(std::move(texts));
}

long parsed_module_length(const ParsedModule& m, long p) {
  long total = 0;
  for (auto& b : m.components) {
    auto ab = analyze_block(b.relations, p);
    if (!ab)
      throw std::invalid_argument("parsed_module_length: the module is not finite");
    total += ab->trivial ? 0 : ab->logsize;
  }
  return total;
}

bool modules_isomorphic(const ParsedModule& m, const DieudonneModule& D) {
  long p = D.scheme()->field()->p();
  try {
    if (parsed_module_length(m, p) != plog(p, D.size())) return false;
  } catch (const std::invalid_argument&) {
    return false;  // the abstract module is infinite
  }
  // canonical presentations certify the isomorphism: equality of the grouped
  // text means an abstract quotient of the same verified size maps onto both
  return module_text(m, p) == module_presentation(D).display;
}

QuotientResult quotient_by_dieudonne_ideal(SchemePtr Gp, const std::vector<AlgElem>& xs) {
  if (!Gp) throw std::invalid_argument("quotient_by_dieudonne_ideal: null scheme");
  const Scheme& G = *Gp;
  require_prime_field(G, "quotient_by_dieudonne_ideal");
  Mat V = versch_matrix_of(G);
  long n = level_from_matrix(G, V);
  const WittLaw& law = get_law(G.field()->p(), n, LawKind::add);
  for (auto& x : xs)
    if (!is_d_inner(G, V, law, n, x))
      throw std::invalid_argument("quotient_by_dieudonne_ideal: generator is not a Dieudonné element");
  // close under the module operations; the ideal of a closed set is Hopf
  std::set<AlgElem> S;
  S.insert(G.ring->zero());
  std::vector<AlgElem> stack = xs;
  while (!stack.empty()) {
    AlgElem z = std::move(stack.back());
    stack.pop_back();
    if (S.count(z)) continue;
    std::vector<AlgElem> cur(S.begin(), S.end());
    S.insert(z);
    if (S.size() > 4096)
      throw cap_error("Dieudonné ideal closure exceeded 4096 elements");
    stack.push_back(G.ring->pth_power(z));
    stack.push_back(V.apply(z));
    stack.push_back(d_add(G, V, n, z, z));
    for (auto& w : cur) stack.push_back(d_add(G, V, n, z, w));
  }
  std::vector<AlgElem> gens;
  for (auto& z : S)
    if (!vec_is_zero(z)) gens.push_back(z);
  return quotient_scheme(Gp, gens);
}

SchemePtr inverse_functor(const ParsedModule& m, FieldPtr k) {
  if (!k || k->degree() != 1)
    throw std::invalid_argument("inverse_functor: prime base field required");
  long p = k->p();
  struct BlockInfo {
    long fo, vo;  // nilpotency orders of F and V on the cyclic generator
    const CyclicBlock* blk;
  };
  std::vector<BlockInfo> infos;
  for (auto& b : m.components) {
    auto ab = analyze_block(b.relations, p);
    if (!ab) throw std::invalid_argument("inverse_functor: the module is not finite");
    if (ab->trivial) continue;
    infos.push_back({ab->f_order(), ab->v_order(), &b});
  }
  if (infos.empty())
    throw std::invalid_argument("inverse_functor: the module is trivial");

  // ambient: one truncated Witt scheme per cyclic block, generator the top
  // coordinate of its factor; x_{vo-1} has V-order vo there, F-order fo
  SchemePtr G0;
  std::vector<size_t> var_off;
  size_t off = 0;
  for (auto& info : infos) {
    SchemePtr W = build_witt(k, info.vo - 1, info.fo - 1);
    var_off.push_back(off);
    off += (size_t)info.vo;
    G0 = G0 ? product(G0, W) : W;
  }
  auto mono = G0->monomial_ring();
  if (!mono) throw std::logic_error("inverse_functor: ambient ring is not monomial");
  Mat V = versch_matrix_of(*G0);
  long n0 = level_from_matrix(*G0, V);

  std::vector<AlgElem> kernel_gens;
  for (size_t bi = 0; bi < infos.size(); ++bi) {
    AlgElem g(G0->dim(), 0);
    g[mono->var_index(var_off[bi] + (size_t)infos[bi].vo - 1)] = 1;
    for (auto& rel : infos[bi].blk->relations) {
      auto term_val = [&](const RelTerm& t) {
        AlgElem v = g;
        if (t.kind == 'F')
          for (long i = 0; i < t.exp; ++i) v = G0->ring->pth_power(v);
        else if (t.kind == 'V')
          for (long i = 0; i < t.exp; ++i) v = V.apply(v);
        else
          for (long i = 0; i < t.exp; ++i) v = V.apply(G0->ring->pth_power(v));
        // integer multiple through the module addition
        long pN = ipow(p, n0 + 1);
        long c = (long)mpz_fdiv_ui(t.coeff.get_mpz_t(), (unsigned long)pN);
        AlgElem acc = G0->ring->zero();
        if (c) {
          int hb = 62;
          while (!((c >> hb) & 1)) --hb;
          for (int b = hb; b >= 0; --b) {
            acc = d_add(*G0, V, n0, acc, acc);
            if ((c >> b) & 1) acc = d_add(*G0, V, n0, acc, v);
          }
        }
        return acc;
      };
      AlgElem y = term_val(rel.lhs);
      if (rel.rhs) y = d_add(*G0, V, n0, y, d_neg(*G0, V, n0, term_val(*rel.rhs)));
      if (!vec_is_zero(y)) kernel_gens.push_back(std::move(y));
    }
  }
  auto q = quotient_by_dieudonne_ideal(G0, kernel_gens);
  const Scheme& Q = *q.scheme;
  return Scheme::make(Q.ring, Q.comul, Q.antipode, "Dinv:" + module_text(m, p), Q.shift_versch);
}

SchemePtr inverse_functor(const std::string& text, FieldPtr k) {
  return inverse_functor(parse_module_text(text), k);
}

std::vector<std::pair<std::string, SchemePtr>> classify_length2(FieldPtr k) {
  std::vector<std::string> texts = {"(A/(F,V))^2", "A/(F^2,V)", "A/(F,V^2)", "A/(F-V,p)"};
  std::vector<std::pair<std::string, SchemePtr>> out;
  for (auto& t : texts) out.push_back({t, inverse_functor(t, k)});
  return out;
}

}  // namespace dmt
