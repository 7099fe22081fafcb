#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "nuca/symbol.hpp"

// Decisions for uniform linear cellular automata, carried out entirely on the
// symbol.  The characteristic polynomial does the heavy lifting:
//
//   nilpotent            <=>  char(z) = z^k
//   periodic             <=>  every non-leading coefficient is a constant and
//                             the constant term is nonzero
//   eventually periodic  <=>  char(z) = z^j g(z) with g constant-coefficient
//   invertible           <=>  det is a unit (a nonzero monomial)
//
// Roots of unity are algebraic over GF(p) and the Laurent field is a purely
// transcendental extension, which gives the "constant coefficient" halves;
// the converses are established constructively, by exhibiting the witness
// power inside the finite span generated by Cayley-Hamilton.

namespace nuca {

struct CaVerdict {
  bool verdict = false;
  std::optional<std::uint64_t> index;      // nilpotency: least n with s^n = 0
  std::optional<std::uint64_t> period;     // least n with s^(m+n) = s^m
  std::optional<std::uint64_t> preperiod;  // least such m (0 when periodic)
  // Power collision s^a = s^b found while searching, as negative evidence
  // when no identity power exists.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> repeat;
  std::optional<SymbolMatrix> inverse;
};

CaVerdict ca_nilpotent(const SymbolMatrix& s);
CaVerdict ca_periodic(const SymbolMatrix& s, std::uint64_t cap = 1u << 20);
CaVerdict ca_eventually_periodic(const SymbolMatrix& s, std::uint64_t cap = 1u << 20);
CaVerdict ca_invertible(const SymbolMatrix& s);

}  // namespace nuca
