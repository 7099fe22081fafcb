#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nuca/gf.hpp"

// Sparse Laurent polynomials over GF(p) in d commuting variables, i.e.
// elements of GF(p)[x1^+-1, ..., xd^+-1].  Exponent vectors may be negative;
// the zero polynomial has no terms.  The exponent map is ordered, so
// iteration (and therefore serialization) is deterministic.

namespace nuca {

using Exponent = std::vector<std::int32_t>;

class LaurentPoly {
 public:
  LaurentPoly(std::uint32_t p, std::uint32_t dims);

  static LaurentPoly constant(std::uint32_t p, std::uint32_t dims, std::int64_t c);
  static LaurentPoly monomial(std::uint32_t p, std::uint32_t dims, std::int64_t c, Exponent e);

  std::uint32_t modulus() const { return p_; }
  std::uint32_t dims() const { return dims_; }
  const std::map<Exponent, std::uint32_t>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::uint32_t constant_value() const;  // requires is_constant()

  // A unit of the Laurent ring is exactly a single term c * x^e, c != 0.
  std::optional<std::pair<std::uint32_t, Exponent>> as_unit() const;

  std::uint32_t coeff(const Exponent& e) const;
  void add_term(const Exponent& e, std::int64_t c);  // accumulates, drops zeros

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator-() const;
  LaurentPoly scaled(std::uint32_t c) const;

  bool operator==(const LaurentPoly& o) const;
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  std::string to_string() const;  // deterministic; used for display and hashing

 private:
  void check_compatible(const LaurentPoly& o) const;

  std::uint32_t p_;
  std::uint32_t dims_;
  std::map<Exponent, std::uint32_t> terms_;
};

}  // namespace nuca
