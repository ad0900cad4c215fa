#include "dmt/diffops.hpp"

#include "dmt/witt.hpp"

#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace dmt {

namespace {

BigInt binom(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

long ipow(long p, long e) {
  long r = 1;
  for (long t = 0; t < e; ++t) {
    if (r > (1L << 40) / p) throw cap_error("exponent tower overflows the working range");
    r *= p;
  }
  return r;
}

BigInt big_pow(const BigInt& b, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

// base-p digits m = sum d[j] p^j, little endian, exactly len of them
std::vector<uint32_t> base_p_digits(long m, long p, size_t len) {
  std::vector<uint32_t> d(len, 0);
  for (size_t j = 0; j < len; ++j) {
    d[j] = static_cast<uint32_t>(m % p);
    m /= p;
  }
  return d;
}

ZPoly trim(ZPoly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

}  // namespace

ZPoly divided_power_apply(long p, long i, const ZPoly& f) {
  require_prime(p);
  if (i < 0) throw std::invalid_argument("divided power level must be nonnegative");
  long q = ipow(p, i);
  if (static_cast<long>(f.size()) <= q) return {};
  ZPoly out(f.size() - q, BigInt(0));
  for (size_t m = q; m < f.size(); ++m)
    if (f[m] != 0) out[m - q] = f[m] * binom(m, q);
  return trim(std::move(out));
}

CheckReport congruence_suite(long p, long r) {
  require_prime(p);
  if (r < 0) throw std::invalid_argument("congruence depth must be nonnegative");
  CheckReport rep;
  rep.check = "factorial congruences p=" + std::to_string(p) + " depth " + std::to_string(r);
  long top = ipow(p, r + 1);
  if (top > 2048) throw cap_error("congruence range p^" + std::to_string(r + 1) + " exceeds 2048");

  std::vector<BigInt> block_fact(r + 1);
  for (long j = 0; j <= r; ++j) block_fact[j] = factorial(ipow(p, j));

  long total = 0;
  BigInt mfact = 1;
  for (long m = 0; m < top; ++m) {
    if (m > 0) mfact *= m;
    auto d = base_p_digits(m, p, r + 1);
    BigInt denom = 1, expected = 1;
    for (long j = 0; j <= r; ++j) {
      for (uint32_t t = 0; t < d[j]; ++t) denom *= block_fact[j];
      expected *= factorial(d[j]);
    }
    long got = mod_p(exact_div(mfact, denom), p);
    ++total;
    rep.record(got != 0 && got == mod_p(expected, p),
               "digit factorization of m! fails at m=" + std::to_string(m));
  }

  for (long s = 0; s <= r; ++s) {
    long v = (ipow(p, s) - 1) / (p - 1);
    long got = mod_p(exact_div(block_fact[s], big_pow(p, v)), p);
    long want = (s % 2 == 0) ? 1 : p - 1;
    ++total;
    rep.record(got == want, "p-part sign of p^s! fails at s=" + std::to_string(s));
  }

  for (long s = 1; s <= r; ++s)
    for (long i = 0; i < s; ++i) {
      BigInt q = exact_div(binom(ipow(p, s), ipow(p, i)), big_pow(p, s - i));
      ++total;
      rep.record(mod_p(q, p) == 1, "reduced binomial fails at s=" + std::to_string(s) +
                                       " i=" + std::to_string(i));
    }

  for (long s = 0; s <= r; ++s)
    for (long t = 0; s + t <= r; ++t) {
      BigInt denom = block_fact[s] * big_pow(block_fact[t], ipow(p, s));
      long got = mod_p(exact_div(factorial(ipow(p, s + t)), denom), p);
      ++total;
      rep.record(got == 1, "block decomposition fails at s=" + std::to_string(s) +
                               " t=" + std::to_string(t));
    }

  rep.note = "checked " + std::to_string(total) + " exact factorial quotients";
  return rep;
}

CheckReport stability_check(long p, long r) {
  require_prime(p);
  if (r < 0) throw std::invalid_argument("stability depth must be nonnegative");
  long P = ipow(p, r);
  if (P > 2048) throw cap_error("stability range p^" + std::to_string(r) + " exceeds 2048");
  CheckReport rep;
  rep.check = "ideal stability p=" + std::to_string(p) + " r=" + std::to_string(r);
  long total = 0;
  for (long i = 0; i < r; ++i) {
    long pi = ipow(p, i);
    for (long m = 0; m < P; ++m) {
      // D^{(p^i)} x^{P+m} = binom(P+m, p^i) x^{P+m-p^i}; it stays in
      // (p, x^P) either through the exponent or through the coefficient
      bool in_ideal = (P + m - pi >= P) || mod_p(binom(P + m, pi), p) == 0;
      ++total;
      rep.record(in_ideal, "image escapes the ideal at i=" + std::to_string(i) +
                               " m=" + std::to_string(m));
    }
  }
  ZPoly xp(P + 1, BigInt(0));
  xp[P] = 1;
  ZPoly img = divided_power_apply(p, r, xp);
  rep.record(img.size() == 1 && img[0] == 1,
             "negative control: the level-r operator should send x^{p^r} to 1");
  rep.note = "checked " + std::to_string(total) +
             " ideal monomials up to degree 2p^r; degrees beyond that only gain exponent, and "
             "the level-r operator itself leaves the ideal";
  return rep;
}

CheckReport derivation_check(long p, long r) {
  require_prime(p);
  if (r < 0) throw std::invalid_argument("derivation depth must be nonnegative");
  long P = ipow(p, r);
  if (P > 2048) throw cap_error("derivation range p^" + std::to_string(r) + " exceeds 2048");
  CheckReport rep;
  rep.check = "restriction to the p^r-power subring p=" + std::to_string(p) +
              " r=" + std::to_string(r);
  long q_top = std::max<long>(2, std::min<long>(2 * p * p, 4096 / P));
  for (long q = 1; q <= q_top; ++q) {
    ZPoly f(q * P + 1, BigInt(0));
    f[q * P] = 1;
    ZPoly img = divided_power_apply(p, r, f);
    bool ok = static_cast<long>(img.size()) == (q - 1) * P + 1 && mod_p(img.back(), p) == q % p;
    for (size_t d = 0; ok && d + 1 < img.size(); ++d) ok = (img[d] == 0);
    rep.record(ok, "derivation congruence fails at q=" + std::to_string(q));
  }
  rep.note = "binom(q p^r, p^r) is congruent to q mod p, checked through q=" +
             std::to_string(q_top);
  return rep;
}

CheckReport functional_basis_check(long p, long r) {
  require_prime(p);
  if (r < 0) throw std::invalid_argument("basis depth must be nonnegative");
  long N = ipow(p, r);
  if (N > 32) throw cap_error("functional basis rank check capped at dimension 32");
  auto k = Field::make_default(p);
  Mat M(k, N, N);
  for (long row = 0; row < N; ++row) {
    auto e = base_p_digits(row, p, r);
    for (long m = 0; m < N; ++m) {
      ZPoly f(m + 1, BigInt(0));
      f[m] = 1;
      for (long j = 0; j < r; ++j)
        for (uint32_t t = 0; t < e[j]; ++t) f = divided_power_apply(p, j, f);
      M.at(row, m) = k->from_int(f.empty() ? 0 : mod_p(f[0], p));
    }
  }
  CheckReport rep;
  rep.check = "divided-power functional basis p=" + std::to_string(p) + " r=" + std::to_string(r);
  size_t rk = rank(M);
  rep.record(rk == static_cast<size_t>(N),
             "origin evaluations of the composites have rank " + std::to_string(rk) +
                 " instead of " + std::to_string(N));
  rep.note = "all " + std::to_string(N) + " composites with digit exponents evaluated on x^m";
  return rep;
}

long lambda_level_cap(long p) { return p <= 3 ? 2 : 1; }

namespace {

// prod_j (p^j!)^{d_j} / m! for the base-p digits d_j of m; a p-adic unit
Rational digit_unit(long p, long m, long r) {
  auto d = base_p_digits(m, p, std::max<long>(r, 1));
  BigInt num = 1;
  for (long j = 0; j < r; ++j)
    for (uint32_t t = 0; t < d[j]; ++t) num *= factorial(ipow(p, j));
  return Rational(num) / Rational(factorial(m));
}

// scalar left by applying prod_j D^{(p^j)}^{e[base+j]}, j = 0..r, to x^s
BigInt composite_on_monomial(long p, const Exps& e, size_t base, long r, long s) {
  ZPoly f(s + 1, BigInt(0));
  f[s] = 1;
  for (long j = 0; j <= r; ++j)
    for (uint32_t t = 0; t < e[base + j] && !f.empty(); ++t) f = divided_power_apply(p, j, f);
  return f.empty() ? BigInt(0) : f.back();
}

}  // namespace

const LambdaLaw& lambda_poly(long p, long r) {
  require_prime(p);
  if (r < 0) throw std::invalid_argument("leibniz law level must be nonnegative");
  if (r > lambda_level_cap(p))
    throw cap_error("leibniz law level " + std::to_string(r) + " exceeds the cap " +
                    std::to_string(lambda_level_cap(p)) + " for p=" + std::to_string(p));
  static std::map<std::pair<long, long>, LambdaLaw> memo;
  auto key = std::make_pair(p, r);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  long P = ipow(p, r);
  auto vars = law_vars(r);
  MultiPoly lam(vars);
  Exps lin(vars.size(), 0);
  lin[r] = 1;
  lam.add_term(lin, 1);
  lin[r] = 0;
  lin[2 * r + 1] = 1;
  lam.add_term(lin, 1);
  for (long m = 1; m < P; ++m) {
    Rational c = digit_unit(p, m, r) * digit_unit(p, P - m, r);
    if (!is_p_integral(c, p))
      throw std::logic_error("leibniz coefficient fails p-integrality at split " +
                             std::to_string(m));
    Exps e(vars.size(), 0);
    auto dx = base_p_digits(m, p, r), dy = base_p_digits(P - m, p, r);
    for (long j = 0; j < r; ++j) {
      e[j] = dx[j];
      e[r + 1 + j] = dy[j];
    }
    lam.add_term(e, c);
  }

  // the law must reproduce D^{(p^r)} on products of monomials, exactly
  for (long s = 0; s <= 2 * P; ++s)
    for (long t = 0; s + t <= 2 * P; ++t) {
      Rational lhs = (s + t >= P) ? Rational(binom(s + t, P)) : Rational(0);
      Rational rhs = 0;
      for (const auto& [e, c] : lam.terms()) {
        BigInt left = composite_on_monomial(p, e, 0, r, s);
        if (left == 0) continue;
        BigInt right = composite_on_monomial(p, e, r + 1, r, t);
        if (right == 0) continue;
        rhs += c * Rational(left * right);
      }
      if (lhs != rhs)
        throw std::logic_error("leibniz law validation failed on x^" + std::to_string(s) +
                               " * x^" + std::to_string(t));
    }

  auto [pos, inserted] = memo.emplace(key, LambdaLaw{p, r, std::move(lam)});
  (void)inserted;
  return pos->second;
}

CheckReport lambda_phi_congruence(long p, long r) {
  require_prime(p);
  CheckReport rep;
  rep.check = "leibniz laws against the addition law mod p, levels 0.." + std::to_string(r) +
              " at p=" + std::to_string(p);
  auto reduce = [&](const MultiPoly& f) {
    std::map<Exps, long> out;
    for (const auto& [e, c] : f.terms()) {
      bool dead = false;
      for (uint32_t x : e)
        if (x >= static_cast<uint32_t>(p)) {
          dead = true;
          break;
        }
      if (dead) continue;
      long cm = rational_mod_p(c, p);
      if (cm) out[e] = cm;
    }
    return out;
  };
  for (long i = 0; i <= r; ++i) {
    const MultiPoly& lam = lambda_poly(p, i).poly;
    const MultiPoly& phi = get_law(p, i, LawKind::add).polys[i];
    rep.record(reduce(lam) == reduce(phi),
               "laws differ mod p and p-th powers at level " + std::to_string(i));
  }
  rep.note = "reduction kills every monomial with an exponent at or above p";
  return rep;
}

namespace {

SparseElem column_sparse(const Mat& M, size_t j) {
  SparseElem out;
  for (size_t i = 0; i < M.rows(); ++i)
    if (M.at(i, j)) out.push_back({i, M.at(i, j)});
  return out;
}

Mat convolve_end(const Algebra& alg, const TensorAlgebra& sq, const AlgHom& comul, const Mat& F,
                 const Mat& H) {
  const Field& k = *alg.field();
  size_t N = alg.dim();
  Mat out(alg.field(), N, N);
  for (size_t j = 0; j < N; ++j) {
    std::map<size_t, uint8_t> acc;
    for (const auto& [t, c] : comul.basis_image(j)) {
      SparseElem pr = alg.mul(column_sparse(F, sq.left_of(t)), column_sparse(H, sq.right_of(t)));
      for (const auto& [w, cw] : pr) {
        uint8_t& slot = acc[w];
        slot = k.add(slot, k.mul(c, cw));
      }
    }
    for (const auto& [i, c] : acc)
      if (c) out.at(i, j) = c;
  }
  return out;
}

bool mat_zero(const Mat& M) {
  for (size_t i = 0; i < M.rows(); ++i)
    for (size_t j = 0; j < M.cols(); ++j)
      if (M.at(i, j)) return false;
  return true;
}

// convolution inverse of the identity: the augmentation ideal is nilpotent,
// so the geometric series in (id - unit*counit) terminates
Mat antipode_matrix(const Algebra& alg, const TensorAlgebra& sq, const AlgHom& comul) {
  const Field& k = *alg.field();
  size_t N = alg.dim();
  Mat E(alg.field(), N, N);
  E.at(alg.unit_index(), alg.unit_index()) = 1;
  Mat n(alg.field(), N, N);
  for (size_t i = 0; i < N; ++i) n.at(i, i) = 1;
  n.at(alg.unit_index(), alg.unit_index()) = 0;
  Mat S = E, term = E;
  for (size_t t = 1;; ++t) {
    term = convolve_end(alg, sq, comul, term, n);
    if (mat_zero(term)) break;
    if (t > N) throw std::logic_error("antipode series failed to terminate");
    for (size_t i = 0; i < N; ++i)
      for (size_t j = 0; j < N; ++j) {
        uint8_t v = term.at(i, j);
        if (!v) continue;
        S.at(i, j) = (t % 2) ? k.sub(S.at(i, j), v) : k.add(S.at(i, j), v);
      }
  }
  return S;
}

}  // namespace

AlphaDualTower dual_of_alpha_tower(FieldPtr k, long r) {
  long p = k->p();
  if (r < 0) throw std::invalid_argument("tower height must be nonnegative");
  if (r > lambda_level_cap(p))
    throw cap_error("tower height " + std::to_string(r) + " needs leibniz laws beyond the cap for p=" +
                    std::to_string(p));
  auto tower = build_alpha(k, r + 1);
  auto dual = cartier_dual(tower);

  std::vector<std::string> names;
  std::vector<uint32_t> bounds;
  for (long i = 0; i <= r; ++i) {
    names.push_back("y" + std::to_string(i));
    bounds.push_back(static_cast<uint32_t>(p));
  }
  auto R = MonomialAlgebra::make(k, names, bounds);
  auto sq = TensorAlgebra::make(R, R);
  auto gen = [&](long t) {
    Exps e(r + 1, 0);
    e[t] = 1;
    return SparseElem{{R->index_of(e), uint8_t(1)}};
  };

  std::vector<SparseElem> comul_imgs;
  for (long i = 0; i <= r; ++i) {
    const MultiPoly& lam = lambda_poly(p, i).poly;
    std::vector<SparseElem> args;
    for (long t = 0; t <= i; ++t) args.push_back(sq->embed_left(gen(t)));
    for (long t = 0; t <= i; ++t) args.push_back(sq->embed_right(gen(t)));
    comul_imgs.push_back(eval_poly(*sq, lam, args));
  }
  AlgHom comul = AlgHom::from_generator_images(R, sq, std::move(comul_imgs));
  AlgHom anti = hom_from_matrix(R, R, antipode_matrix(*R, *sq, comul), true);
  std::ostringstream nm;
  nm << "alpha-dual:" << (r + 1);
  auto direct = Scheme::make(R, std::move(comul), std::move(anti), nm.str());
  if (std::string complaint = verify_hopf(*direct); !complaint.empty())
    throw std::logic_error("tower presentation is not a Hopf algebra: " + complaint);

  auto tower_mono = tower->monomial_ring();
  std::vector<AlgElem> ybar;
  std::vector<SparseElem> imgs;
  for (long i = 0; i <= r; ++i) {
    size_t idx = tower_mono->index_of({static_cast<uint32_t>(ipow(p, i))});
    AlgElem y(dual->ring->dim(), 0);
    y[idx] = 1;
    ybar.push_back(std::move(y));
    imgs.push_back(SparseElem{{idx, uint8_t(1)}});
  }
  AlgHom pull = AlgHom::from_generator_images(R, dual->ring, std::move(imgs));
  SchemeHom iso = scheme_hom(dual, direct, std::move(pull));
  if (!inverse(iso.pullback.matrix()))
    throw std::logic_error("tower comparison map is not invertible");
  return {std::move(tower), std::move(dual), std::move(direct), std::move(iso), std::move(ybar)};
}

CheckReport alpha_tower_check(FieldPtr k, long r) {
  auto tw = dual_of_alpha_tower(k, r);
  long p = k->p();
  long N = ipow(p, r + 1);
  CheckReport rep;
  rep.check = "alpha tower functionals p=" + std::to_string(p) + " r=" + std::to_string(r);

  for (long i = 0; i <= r; ++i) {
    Mat T = operator_of_functional(*tw.tower, tw.ybar[i]);
    Mat D(k, N, N);
    long pi = ipow(p, i);
    for (long s = pi; s < N; ++s) D.at(s - pi, s) = k->from_int(mod_p(binom(s, pi), p));
    rep.record(T == D, "functional y_" + std::to_string(i) + " does not act as the divided power");
    for (long j = 0; j <= r; ++j) {
      uint8_t v = tw.ybar[i][tw.tower->monomial_ring()->index_of(
          {static_cast<uint32_t>(ipow(p, j))})];
      rep.record(v == (i == j ? 1 : 0), "y_" + std::to_string(i) + " on x^{p^" +
                                            std::to_string(j) + "} is not the delta value");
    }
  }

  auto D = enumerate_D(tw.dual);
  const AlgElem& zero = D.elements()[0];
  rep.record(D.size() == static_cast<size_t>(N), "dual module size is not p^(r+1)");
  rep.record(D.contains(tw.ybar[r]) && is_dieudonne(*tw.dual, tw.ybar[r], r),
             "top functional is not a level-r module element");
  auto chain = D.chain(tw.ybar[r]);
  bool chain_ok = chain.size() == static_cast<size_t>(r + 1);
  for (long i = 0; chain_ok && i <= r; ++i) chain_ok = (chain[i] == tw.ybar[i]);
  rep.record(chain_ok, "shift chain of the top functional misses the lower ones");

  std::set<AlgElem> span;
  std::vector<long> digits(r + 1, 0);
  for (;;) {
    AlgElem acc = zero;
    for (long i = 0; i <= r; ++i)
      if (digits[i]) acc = D.add(acc, D.int_mul(digits[i], tw.ybar[i]));
    span.insert(acc);
    long pos = 0;
    while (pos <= r && ++digits[pos] == p) digits[pos++] = 0;
    if (pos > r) break;
  }
  rep.record(span.size() == D.size(), "chain combinations do not exhaust the module");

  bool frob_dies = true;
  for (const auto& x : D.elements()) frob_dies = frob_dies && D.frob(x) == zero;
  rep.record(frob_dies, "Frobenius does not vanish on the dual module");

  rep.note = "module has " + std::to_string(D.size()) + " elements generated by the top functional";
  return rep;
}

}  // namespace dmt
