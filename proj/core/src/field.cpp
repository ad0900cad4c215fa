#include "dmt/field.hpp"

#include <algorithm>
#include <sstream>

namespace dmt {

namespace {

using Poly = std::vector<uint8_t>;  // little-endian coefficients over F_p

Poly trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly poly_mul_mod_p(const Poly& a, const Poly& b, long p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<uint8_t>((r[i + j] + a[i] * b[j]) % p);
  return trim(r);
}

// remainder of a by monic m
Poly poly_rem(Poly a, const Poly& m, long p) {
  a = trim(a);
  while (a.size() >= m.size()) {
    uint8_t lead = a.back();
    size_t shift = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) {
      long v = a[shift + i] - static_cast<long>(lead) * m[i];
      v %= p;
      if (v < 0) v += p;
      a[shift + i] = static_cast<uint8_t>(v);
    }
    a = trim(a);
  }
  return a;
}

bool divides(const Poly& d, const Poly& a, long p) { return poly_rem(a, d, p).empty(); }

bool is_irreducible(const Poly& m, long p) {
  long e = static_cast<long>(m.size()) - 1;
  if (e < 1) return false;
  // trial division by every monic polynomial of degree 1..e/2
  for (long d = 1; 2 * d <= e; ++d) {
    long count = 1;
    for (long i = 0; i < d; ++i) count *= p;
    for (long code = 0; code < count; ++code) {
      Poly cand(d + 1, 0);
      long c = code;
      for (long i = 0; i < d; ++i) { cand[i] = static_cast<uint8_t>(c % p); c /= p; }
      cand[d] = 1;
      if (divides(cand, m, p)) return false;
    }
  }
  return true;
}

}  // namespace

Field::Field(long p, long e, std::vector<uint8_t> modulus)
    : p_(p), e_(e), modulus_(std::move(modulus)) {
  q_ = 1;
  for (long i = 0; i < e_; ++i) q_ *= p_;

  add_.resize(static_cast<size_t>(q_) * q_);
  mul_.resize(static_cast<size_t>(q_) * q_);
  neg_.resize(q_);
  inv_.assign(q_, 0);
  frob_.resize(q_);
  frob_inv_.resize(q_);

  auto decode = [&](long a) {
    Poly c(e_);
    for (long i = 0; i < e_; ++i) { c[i] = static_cast<uint8_t>(a % p_); a /= p_; }
    return trim(c);
  };
  auto encode = [&](const Poly& c) {
    long v = 0, mult = 1;
    for (long i = 0; i < e_; ++i) {
      v += (i < static_cast<long>(c.size()) ? c[i] : 0) * mult;
      mult *= p_;
    }
    return static_cast<uint8_t>(v);
  };

  for (long a = 0; a < q_; ++a) {
    Poly pa = decode(a);
    for (long b = 0; b < q_; ++b) {
      Poly pb = decode(b);
      Poly s(std::max(pa.size(), pb.size()), 0);
      for (size_t i = 0; i < s.size(); ++i) {
        long v = (i < pa.size() ? pa[i] : 0) + (i < pb.size() ? pb[i] : 0);
        s[i] = static_cast<uint8_t>(v % p_);
      }
      add_[idx(static_cast<uint8_t>(a), static_cast<uint8_t>(b))] = encode(trim(s));
      mul_[idx(static_cast<uint8_t>(a), static_cast<uint8_t>(b))] =
          encode(poly_rem(poly_mul_mod_p(pa, pb, p_), modulus_, p_));
    }
  }
  for (long a = 0; a < q_; ++a) {
    Poly pa = decode(a);
    Poly n(pa.size());
    for (size_t i = 0; i < pa.size(); ++i) n[i] = static_cast<uint8_t>((p_ - pa[i]) % p_);
    neg_[a] = encode(trim(n));
  }
  for (long a = 1; a < q_; ++a) {
    uint8_t b = static_cast<uint8_t>(a);
    // a^(q-2) = a^{-1}
    uint8_t acc = 1;
    long ex = q_ - 2;
    uint8_t base = b;
    while (ex) {
      if (ex & 1) acc = mul_[idx(acc, base)];
      base = mul_[idx(base, base)];
      ex >>= 1;
    }
    inv_[a] = acc;
  }
  for (long a = 0; a < q_; ++a) {
    uint8_t b = static_cast<uint8_t>(a);
    uint8_t f = b;
    for (long i = 1; i < p_; ++i) f = mul_[idx(f, b)];  // a^p
    frob_[a] = f;
  }
  // frobenius is a bijection; invert by composition a^(p^(e-1))
  for (long a = 0; a < q_; ++a) {
    uint8_t f = static_cast<uint8_t>(a);
    for (long i = 0; i < e_ - 1; ++i) f = frob_[f];
    frob_inv_[a] = f;
  }
}

FieldPtr Field::make(long p, long e, std::vector<uint8_t> modulus) {
  require_prime(p);
  if (e < 1) throw std::invalid_argument("field degree must be >= 1");
  long q = 1;
  for (long i = 0; i < e; ++i) {
    q *= p;
    if (q > kFieldOrderCap)
      throw cap_error("field order p^e exceeds cap " + std::to_string(kFieldOrderCap));
  }
  if (e == 1) {
    if (modulus.empty()) modulus = {0, 1};  // the identity polynomial x
    if (modulus != std::vector<uint8_t>{0, 1})
      throw std::invalid_argument("prime field takes the identity modulus");
  } else {
    if (modulus.size() != static_cast<size_t>(e) + 1 || modulus.back() != 1)
      throw std::invalid_argument("modulus must be monic of degree e");
    for (uint8_t c : modulus)
      if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
    if (!is_irreducible(modulus, p))
      throw std::invalid_argument("modulus is reducible over F_p");
  }
  return FieldPtr(new Field(p, e, std::move(modulus)));
}

FieldPtr Field::make_default(long q) {
  switch (q) {
    case 4: return make(2, 2, {1, 1, 1});        // t^2 + t + 1
    case 8: return make(2, 3, {1, 1, 0, 1});     // t^3 + t + 1
    case 9: return make(3, 2, {1, 0, 1});        // t^2 + 1
    default:
      if (is_prime(q)) return make(q, 1);
      throw std::invalid_argument("no default modulus shipped for order " + std::to_string(q));
  }
}

uint8_t Field::inv(uint8_t a) const {
  if (a == 0) throw std::domain_error("inversion of zero field element");
  return inv_[a];
}

uint8_t Field::pow(uint8_t a, unsigned long e) const {
  uint8_t acc = 1, base = a;
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

std::vector<uint8_t> Field::coeffs(uint8_t a) const {
  std::vector<uint8_t> c(e_);
  long v = a;
  for (long i = 0; i < e_; ++i) { c[i] = static_cast<uint8_t>(v % p_); v /= p_; }
  return c;
}

uint8_t Field::from_coeffs(const std::vector<uint8_t>& c) const {
  if (c.size() > static_cast<size_t>(e_))
    throw std::invalid_argument("coefficient vector longer than field degree");
  long v = 0, mult = 1;
  for (long i = 0; i < e_; ++i) {
    uint8_t ci = i < static_cast<long>(c.size()) ? c[i] : 0;
    if (ci >= p_) throw std::invalid_argument("coefficient out of range");
    v += ci * mult;
    mult *= p_;
  }
  return static_cast<uint8_t>(v);
}

std::string Field::to_string(uint8_t a) const {
  if (e_ == 1) return std::to_string(a);
  std::ostringstream os;
  os << "[";
  auto c = coeffs(a);
  for (long i = 0; i < e_; ++i) {
    if (i) os << ",";
    os << static_cast<int>(c[i]);
  }
  os << "]";
  return os.str();
}

void require_same_field(const Field& a, const Field& b) {
  if (!a.same(b)) throw std::invalid_argument("field descriptor mismatch");
}

}  // namespace dmt
