#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nuca/laurent.hpp"
#include "nuca/mat.hpp"

// k x k matrices over the Laurent ring: the symbols of linear cellular
// automata.  A rule with coefficient matrix A_m at memory offset m has symbol
// sum_m A_m x^m, and rule composition is symbol multiplication, so the global
// dynamics of the uniform part of a spec reduces to matrix algebra here.
//
// The characteristic polynomial is computed by the Samuelson-Berkowitz
// recurrence, which uses ring operations only -- essential, because the
// Laurent ring has no division.

namespace nuca {

class SymbolMatrix {
 public:
  SymbolMatrix(std::uint32_t k, std::uint32_t p, std::uint32_t dims);

  static SymbolMatrix identity(std::uint32_t k, std::uint32_t p, std::uint32_t dims);

  std::uint32_t k() const { return k_; }
  std::uint32_t modulus() const { return p_; }
  std::uint32_t dims() const { return dims_; }

  const LaurentPoly& at(std::uint32_t i, std::uint32_t j) const { return e_[i * k_ + j]; }
  LaurentPoly& at(std::uint32_t i, std::uint32_t j) { return e_[i * k_ + j]; }

  SymbolMatrix operator+(const SymbolMatrix& o) const;
  SymbolMatrix operator-(const SymbolMatrix& o) const;
  SymbolMatrix operator*(const SymbolMatrix& o) const;
  SymbolMatrix scaled(const LaurentPoly& f) const;
  SymbolMatrix pow(std::uint64_t e) const;
  SymbolMatrix transpose_reversed() const;  // transpose with every exponent negated

  bool operator==(const SymbolMatrix& o) const { return e_ == o.e_; }
  bool operator!=(const SymbolMatrix& o) const { return !(*this == o); }

  bool is_zero() const;
  bool is_identity() const;

  // All exponents appearing in any entry (the support of the rule).
  std::vector<Exponent> support() const;

  std::string to_string() const;

 private:
  std::uint32_t k_, p_, dims_;
  std::vector<LaurentPoly> e_;
};

// Monic characteristic polynomial det(z I - m) of degree k, stored as the
// non-leading coefficients c[0..k-1]:  z^k + c[k-1] z^(k-1) + ... + c[0].
struct CharPoly {
  std::uint32_t k, p, dims;
  std::vector<LaurentPoly> c;

  // Index of the lowest nonzero coefficient (= multiplicity of the factor z);
  // equals k when the polynomial is z^k.
  std::uint32_t trailing_zeros() const;
};

CharPoly char_poly(const SymbolMatrix& m);

// m^k + c[k-1] m^(k-1) + ... + c[0] I, which must vanish (Cayley-Hamilton).
SymbolMatrix char_poly_substitute(const CharPoly& cp, const SymbolMatrix& m);

// (-1)^k c[0]: the determinant, read off the characteristic polynomial.
LaurentPoly determinant(const SymbolMatrix& m, const CharPoly& cp);

// adj(m) via the char-poly identity; m * adj(m) = det(m) I over any ring.
SymbolMatrix adjugate(const SymbolMatrix& m, const CharPoly& cp);

// Inverse when det is a unit of the Laurent ring; nullopt otherwise.
std::optional<SymbolMatrix> symbol_inverse(const SymbolMatrix& m);

}  // namespace nuca
