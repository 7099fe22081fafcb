#include "nuca/ca_decide.hpp"

#include <map>
#include <string>

#include "nuca/errors.hpp"

namespace nuca {

namespace {

// Smallest of cap and p^e + slack without overflowing.
std::uint64_t power_bound(std::uint32_t p, std::uint32_t e, std::uint64_t slack,
                          std::uint64_t cap) {
  std::uint64_t b = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    if (b > cap / p) return cap;
    b *= p;
  }
  return std::min(b + slack, cap);
}

bool coefficients_constant(const CharPoly& cp, std::uint32_t from) {
  for (std::uint32_t i = from; i < cp.k; ++i)
    if (!cp.c[i].is_zero() && !cp.c[i].is_constant()) return false;
  return true;
}

}  // namespace

CaVerdict ca_nilpotent(const SymbolMatrix& s) {
  CaVerdict v;
  CharPoly cp = char_poly(s);
  if (cp.trailing_zeros() != cp.k) return v;  // char(z) != z^k
  // Cayley-Hamilton gives s^k = 0; locate the least power that dies.
  SymbolMatrix acc = s;
  std::uint64_t n = 1;
  while (!acc.is_zero()) {
    acc = acc * s;
    ++n;
    if (n > cp.k) throw ReductionError("char(z) = z^k but s^k != 0; algebra bug");
  }
  v.verdict = true;
  v.index = n;
  return v;
}

CaVerdict ca_periodic(const SymbolMatrix& s, std::uint64_t cap) {
  CaVerdict v;
  CharPoly cp = char_poly(s);
  if (cp.c[0].is_zero()) return v;               // not injective, cannot be periodic
  if (!coefficients_constant(cp, 0)) return v;   // some root transcendental over GF(p)
  std::uint64_t bound = power_bound(s.modulus(), s.k(), 2, cap);
  std::map<std::string, std::uint64_t> seen;
  SymbolMatrix acc = s;
  for (std::uint64_t n = 1; n <= bound; ++n) {
    if (acc.is_identity()) {
      v.verdict = true;
      v.period = n;
      v.preperiod = 0;
      return v;
    }
    auto [it, fresh] = seen.emplace(acc.to_string(), n);
    if (!fresh) {
      // A collision without an identity in between: the criterion promised
      // one, so surface honest negative evidence instead of trusting it.
      v.repeat = std::make_pair(it->second, n);
      return v;
    }
    acc = acc * s;
  }
  throw ResourceLimit("period search exceeded the power cap");
}

CaVerdict ca_eventually_periodic(const SymbolMatrix& s, std::uint64_t cap) {
  CaVerdict v;
  CharPoly cp = char_poly(s);
  std::uint32_t j = cp.trailing_zeros();
  if (j == cp.k) {  // nilpotent: tail of the zero map, period 1
    CaVerdict nil = ca_nilpotent(s);
    v.verdict = true;
    v.preperiod = *nil.index;
    v.period = 1;
    return v;
  }
  if (!coefficients_constant(cp, j)) return v;
  std::uint64_t bound = power_bound(s.modulus(), cp.k - j, j + 2, cap);
  std::map<std::string, std::uint64_t> seen;
  SymbolMatrix acc = s;
  for (std::uint64_t n = 1; n <= bound; ++n) {
    auto [it, fresh] = seen.emplace(acc.to_string(), n);
    if (!fresh) {
      // s^a = s^n with a < n: cycle length n - a.  The preperiod is a,
      // except that an identity power pulls it down to zero.
      std::uint64_t a = it->second, t = n - a;
      v.verdict = true;
      v.period = t;
      v.preperiod = s.pow(t).is_identity() ? 0 : a;
      v.repeat = std::make_pair(a, n);
      return v;
    }
    acc = acc * s;
  }
  throw ResourceLimit("eventual-period search exceeded the power cap");
}

CaVerdict ca_invertible(const SymbolMatrix& s) {
  CaVerdict v;
  auto inv = symbol_inverse(s);
  if (!inv) return v;
  v.verdict = true;
  v.inverse = std::move(*inv);
  return v;
}

}  // namespace nuca
