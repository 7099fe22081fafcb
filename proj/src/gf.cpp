#include "nuca/gf.hpp"

namespace nuca {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::uint32_t pow_mod(std::uint32_t a, std::uint64_t e, std::uint32_t p) {
  std::uint64_t base = a % p, acc = 1 % p;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(acc);
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  a %= p;
  if (a == 0) throw SpecError("inverse of zero in GF(p)");
  // Extended Euclid on (a, p); p prime so gcd is 1.
  std::int64_t t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

Scalar::Scalar(std::int64_t value, std::uint32_t p) {
  if (!is_prime(p)) throw SpecError("modulus " + std::to_string(p) + " is not prime");
  p_ = p;
  v_ = residue(value, p);
}

}  // namespace nuca
