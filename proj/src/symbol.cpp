#include "nuca/symbol.hpp"

#include <set>
#include <sstream>

namespace nuca {

SymbolMatrix::SymbolMatrix(std::uint32_t k, std::uint32_t p, std::uint32_t dims)
    : k_(k), p_(p), dims_(dims), e_(std::size_t(k) * k, LaurentPoly(p, dims)) {
  if (k == 0) throw SpecError("symbol matrix needs k >= 1");
}

SymbolMatrix SymbolMatrix::identity(std::uint32_t k, std::uint32_t p, std::uint32_t dims) {
  SymbolMatrix m(k, p, dims);
  for (std::uint32_t i = 0; i < k; ++i) m.at(i, i) = LaurentPoly::constant(p, dims, 1);
  return m;
}

SymbolMatrix SymbolMatrix::operator+(const SymbolMatrix& o) const {
  SymbolMatrix r(k_, p_, dims_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

SymbolMatrix SymbolMatrix::operator-(const SymbolMatrix& o) const {
  SymbolMatrix r(k_, p_, dims_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

SymbolMatrix SymbolMatrix::operator*(const SymbolMatrix& o) const {
  if (k_ != o.k_ || p_ != o.p_ || dims_ != o.dims_) throw SpecError("symbol matrix mismatch in *");
  SymbolMatrix r(k_, p_, dims_);
  for (std::uint32_t i = 0; i < k_; ++i)
    for (std::uint32_t j = 0; j < k_; ++j) {
      LaurentPoly acc(p_, dims_);
      for (std::uint32_t t = 0; t < k_; ++t) acc = acc + at(i, t) * o.at(t, j);
      r.at(i, j) = acc;
    }
  return r;
}

SymbolMatrix SymbolMatrix::scaled(const LaurentPoly& f) const {
  SymbolMatrix r(k_, p_, dims_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * f;
  return r;
}

SymbolMatrix SymbolMatrix::pow(std::uint64_t e) const {
  SymbolMatrix acc = identity(k_, p_, dims_);
  SymbolMatrix base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

SymbolMatrix SymbolMatrix::transpose_reversed() const {
  SymbolMatrix r(k_, p_, dims_);
  for (std::uint32_t i = 0; i < k_; ++i)
    for (std::uint32_t j = 0; j < k_; ++j) {
      LaurentPoly flipped(p_, dims_);
      for (const auto& [e, c] : at(j, i).terms()) {
        Exponent ne(e.size());
        for (std::size_t t = 0; t < e.size(); ++t) ne[t] = -e[t];
        flipped.add_term(ne, c);
      }
      r.at(i, j) = flipped;
    }
  return r;
}

bool SymbolMatrix::is_zero() const {
  for (const auto& f : e_)
    if (!f.is_zero()) return false;
  return true;
}

bool SymbolMatrix::is_identity() const { return *this == identity(k_, p_, dims_); }

std::vector<Exponent> SymbolMatrix::support() const {
  std::set<Exponent> s;
  for (const auto& f : e_)
    for (const auto& [e, c] : f.terms()) s.insert(e);
  return std::vector<Exponent>(s.begin(), s.end());
}

std::string SymbolMatrix::to_string() const {
  std::ostringstream out;
  out << "[";
  for (std::uint32_t i = 0; i < k_; ++i) {
    if (i) out << "; ";
    for (std::uint32_t j = 0; j < k_; ++j) {
      if (j) out << ", ";
      out << at(i, j).to_string();
    }
  }
  out << "]";
  return out.str();
}

std::uint32_t CharPoly::trailing_zeros() const {
  std::uint32_t j = 0;
  while (j < k && c[j].is_zero()) ++j;
  return j;
}

CharPoly char_poly(const SymbolMatrix& m) {
  const std::uint32_t k = m.k(), p = m.modulus(), d = m.dims();
  const LaurentPoly one = LaurentPoly::constant(p, d, 1);
  const LaurentPoly zero(p, d);

  // Samuelson-Berkowitz over the leading principal submatrices.  C holds the
  // char-poly coefficients of the current submatrix, leading first.
  std::vector<LaurentPoly> C = {one, -m.at(0, 0)};
  for (std::uint32_t r = 2; r <= k; ++r) {
    // A_r = [ A_{r-1} S ; R a ] with R, S the borders of the new row/column.
    std::vector<LaurentPoly> t = {one, -m.at(r - 1, r - 1)};
    std::vector<LaurentPoly> v(r - 1, zero);  // A_{r-1}^(j-2) * S, updated in place
    for (std::uint32_t i = 0; i < r - 1; ++i) v[i] = m.at(i, r - 1);
    for (std::uint32_t j = 2; j <= r; ++j) {
      LaurentPoly dot(p, d);
      for (std::uint32_t i = 0; i < r - 1; ++i) dot = dot + m.at(r - 1, i) * v[i];
      t.push_back(-dot);
      if (j < r) {
        std::vector<LaurentPoly> nv(r - 1, zero);
        for (std::uint32_t i = 0; i < r - 1; ++i) {
          LaurentPoly acc(p, d);
          for (std::uint32_t u = 0; u < r - 1; ++u) acc = acc + m.at(i, u) * v[u];
          nv[i] = acc;
        }
        v = std::move(nv);
      }
    }
    // Multiply by the (r+1) x r Toeplitz matrix T[i][j] = t[i-j].
    std::vector<LaurentPoly> Cn(r + 1, zero);
    for (std::uint32_t i = 0; i <= r; ++i)
      for (std::uint32_t j = 0; j <= i && j < r; ++j) Cn[i] = Cn[i] + t[i - j] * C[j];
    C = std::move(Cn);
  }

  CharPoly cp{k, p, d, std::vector<LaurentPoly>(k, zero)};
  for (std::uint32_t deg = 0; deg < k; ++deg) cp.c[deg] = C[k - deg];
  return cp;
}

SymbolMatrix char_poly_substitute(const CharPoly& cp, const SymbolMatrix& m) {
  const SymbolMatrix id = SymbolMatrix::identity(m.k(), m.modulus(), m.dims());
  SymbolMatrix acc = id;
  for (std::uint32_t i = cp.k; i-- > 0;) acc = acc * m + id.scaled(cp.c[i]);
  return acc;
}

LaurentPoly determinant(const SymbolMatrix&, const CharPoly& cp) {
  // char(0) = det(-m) = (-1)^k det(m)
  LaurentPoly det = cp.c[0];
  if (cp.k % 2 == 1) det = -det;
  return det;
}

SymbolMatrix adjugate(const SymbolMatrix& m, const CharPoly& cp) {
  // m * (m^(k-1) + c[k-1] m^(k-2) + ... + c[1] I) = -c[0] I, so the bracket
  // is (-1)^(k-1) adj(m).
  const SymbolMatrix id = SymbolMatrix::identity(m.k(), m.modulus(), m.dims());
  SymbolMatrix acc = id;
  for (std::uint32_t i = cp.k - 1; i >= 1; --i) acc = acc * m + id.scaled(cp.c[i]);
  if (cp.k % 2 == 0) {  // (-1)^(k-1) = -1
    acc = acc.scaled(LaurentPoly::constant(m.modulus(), m.dims(), -1));
  }
  return acc;
}

std::optional<SymbolMatrix> symbol_inverse(const SymbolMatrix& m) {
  CharPoly cp = char_poly(m);
  LaurentPoly det = determinant(m, cp);
  auto unit = det.as_unit();
  if (!unit) return std::nullopt;
  auto [u, e] = *unit;
  Exponent ne(e.size());
  for (std::size_t t = 0; t < e.size(); ++t) ne[t] = -e[t];
  LaurentPoly det_inv = LaurentPoly::monomial(m.modulus(), m.dims(), inv_mod(u, m.modulus()), ne);
  SymbolMatrix inv = adjugate(m, cp).scaled(det_inv);
  if (!(m * inv).is_identity() || !(inv * m).is_identity())
    throw ReductionError("unit determinant but adjugate inverse failed; algebra bug");
  return inv;
}

}  // namespace nuca
