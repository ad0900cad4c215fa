#pragma once
// Exact integer/rational arithmetic helpers on top of GMP, plus the p-adic
// valuation utilities everything downstream leans on.

#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dmt {

using BigInt = mpz_class;
using Rational = mpq_class;

inline bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline void require_prime(long p) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
}

// largest e with p^e | n; v_p(0) is undefined
inline long valuation(const BigInt& n, long p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  BigInt m = abs(n);
  long v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

// v_p of a rational: v_p(num) - v_p(den); requires q != 0
inline long valuation(const Rational& q, long p) {
  if (q == 0) throw std::domain_error("valuation of zero");
  return valuation(BigInt(q.get_num()), p) - valuation(BigInt(q.get_den()), p);
}

inline bool is_p_integral(const Rational& q, long p) {
  if (q == 0) return true;
  return valuation(BigInt(q.get_den()), p) == 0;
}

// exact division; throws unless the quotient is integral
inline BigInt exact_div(const BigInt& n, const BigInt& d) {
  if (d == 0) throw std::domain_error("division by zero");
  if (!mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()))
    throw std::domain_error("exact_div: " + n.get_str() + " not divisible by " + d.get_str());
  BigInt q;
  mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

inline BigInt pow_ui(const BigInt& b, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline long digit_sum(unsigned long m, long p) {
  long s = 0;
  while (m) { s += static_cast<long>(m % p); m /= p; }
  return s;
}

// v_p(m!) by the digit-sum formula (m - s_p(m))/(p-1)
inline long factorial_valuation(unsigned long m, long p) {
  require_prime(p);
  return (static_cast<long>(m) - digit_sum(m, p)) / (p - 1);
}

// reduce a p-integral rational mod p into [0, p)
inline long rational_mod_p(const Rational& q, long p) {
  if (!is_p_integral(q, p)) throw std::domain_error("rational_mod_p: denominator divisible by p");
  BigInt num = q.get_num(), den = q.get_den();
  BigInt pz(p);
  BigInt n = num % pz; if (n < 0) n += pz;
  BigInt d = den % pz; if (d < 0) d += pz;
  // den is a unit mod p; invert with Fermat
  BigInt dinv;
  mpz_powm_ui(dinv.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(p - 2), pz.get_mpz_t());
  return mpz_class(n * dinv % pz).get_si();
}

inline long mod_p(const BigInt& n, long p) {
  BigInt r = n % p;
  if (r < 0) r += p;
  return r.get_si();
}

// cap violations get their own type so the CLI can map them to exit code 3
struct cap_error : std::runtime_error {
  explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dmt
