#pragma once

#include <cstdint>

#include "nuca/errors.hpp"

// Residue arithmetic modulo a prime p.
//
// Matrices, polynomials and configurations store raw residues (uint32_t in
// [0, p)) and carry p once per object; the Scalar class below is the value
// type used at API boundaries where a lone field element travels on its own.

namespace nuca {

bool is_prime(std::uint32_t n);

inline std::uint32_t add_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  std::uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return a >= b ? a - b : a + p - b;
}

inline std::uint32_t neg_mod(std::uint32_t a, std::uint32_t p) {
  return a == 0 ? 0 : p - a;
}

inline std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>((std::uint64_t)a * b % p);
}

std::uint32_t pow_mod(std::uint32_t a, std::uint64_t e, std::uint32_t p);

// Multiplicative inverse; throws SpecError for a = 0.
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);

// Reduce an arbitrary (possibly negative) integer into [0, p).
inline std::uint32_t residue(std::int64_t v, std::uint32_t p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  if (r < 0) r += p;
  return static_cast<std::uint32_t>(r);
}

// Barrett reduction for the elimination hot loop: one 128-bit multiply
// instead of a hardware division per reduced value.  Valid for x < 2^63.
struct Barrett {
  std::uint64_t p;
  std::uint64_t m;  // floor(2^64 / p)

  explicit Barrett(std::uint64_t prime)
      : p(prime), m(static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) / prime)) {}

  std::uint64_t reduce(std::uint64_t x) const {
    std::uint64_t q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * m) >> 64);
    std::uint64_t r = x - q * p;
    return r >= p ? r - p : r;
  }
};

// A single field element together with its modulus.  Construction validates
// primality, so a Scalar is well-formed by type.
class Scalar {
 public:
  Scalar(std::int64_t value, std::uint32_t p);

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }

  Scalar operator+(const Scalar& o) const { return raw(add_mod(v_, check(o), p_), p_); }
  Scalar operator-(const Scalar& o) const { return raw(sub_mod(v_, check(o), p_), p_); }
  Scalar operator*(const Scalar& o) const { return raw(mul_mod(v_, check(o), p_), p_); }
  Scalar operator-() const { return raw(neg_mod(v_, p_), p_); }
  Scalar inverse() const { return raw(inv_mod(v_, p_), p_); }

  bool operator==(const Scalar& o) const { return p_ == o.p_ && v_ == o.v_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

 private:
  static Scalar raw(std::uint32_t v, std::uint32_t p) {
    Scalar s;
    s.v_ = v;
    s.p_ = p;
    return s;
  }
  std::uint32_t check(const Scalar& o) const {
    if (o.p_ != p_) throw SpecError("scalar modulus mismatch");
    return o.v_;
  }
  Scalar() : v_(0), p_(2) {}

  std::uint32_t v_;
  std::uint32_t p_;
};

}  // namespace nuca
