#pragma once
// Finite fields F_{p^e} at desk scale. An extension field is pinned down by an
// explicit monic irreducible over F_p; elements are encoded as a byte index
// whose base-p digits are the polynomial coefficients (little-endian), and all
// arithmetic goes through precomputed tables. The cap q <= 81 keeps the tables
// trivial.

#include "dmt/numeric.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace dmt {

constexpr long kFieldOrderCap = 81;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  // e = 1: prime field, modulus is the identity polynomial x.
  // e > 1: modulus must be a monic irreducible of degree e over F_p (checked).
  static FieldPtr make(long p, long e = 1, std::vector<uint8_t> modulus = {});

  // shipped defaults for the orders the test grid uses: 4, 8, 9
  static FieldPtr make_default(long q);

  long p() const { return p_; }
  long degree() const { return e_; }
  long order() const { return q_; }
  const std::vector<uint8_t>& modulus() const { return modulus_; }
  bool prime_field() const { return e_ == 1; }

  uint8_t add(uint8_t a, uint8_t b) const { return add_[idx(a, b)]; }
  uint8_t sub(uint8_t a, uint8_t b) const { return add_[idx(a, neg_[b])]; }
  uint8_t mul(uint8_t a, uint8_t b) const { return mul_[idx(a, b)]; }
  uint8_t neg(uint8_t a) const { return neg_[a]; }
  uint8_t inv(uint8_t a) const;
  uint8_t frobenius(uint8_t a) const { return frob_[a]; }
  uint8_t frobenius_inverse(uint8_t a) const { return frob_inv_[a]; }
  uint8_t pow(uint8_t a, unsigned long e) const;

  // canonical embedding of an integer through F_p
  uint8_t from_int(long n) const {
    long r = n % p_;
    if (r < 0) r += p_;
    return static_cast<uint8_t>(r);
  }

  // base-p digits of the index are the coefficients of the representative
  std::vector<uint8_t> coeffs(uint8_t a) const;
  uint8_t from_coeffs(const std::vector<uint8_t>& c) const;
  std::string to_string(uint8_t a) const;

  bool same(const Field& other) const {
    return p_ == other.p_ && e_ == other.e_ && modulus_ == other.modulus_;
  }

 private:
  Field(long p, long e, std::vector<uint8_t> modulus);
  size_t idx(uint8_t a, uint8_t b) const { return static_cast<size_t>(a) * q_ + b; }

  long p_, e_, q_;
  std::vector<uint8_t> modulus_;
  std::vector<uint8_t> add_, mul_, neg_, inv_, frob_, frob_inv_;
};

void require_same_field(const Field& a, const Field& b);

}  // namespace dmt
