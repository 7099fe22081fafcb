#include "nuca/laurent.hpp"

#include <algorithm>
#include <sstream>

namespace nuca {

LaurentPoly::LaurentPoly(std::uint32_t p, std::uint32_t dims) : p_(p), dims_(dims) {
  if (p < 2) throw SpecError("polynomial modulus must be at least 2");
}

LaurentPoly LaurentPoly::constant(std::uint32_t p, std::uint32_t dims, std::int64_t c) {
  return monomial(p, dims, c, Exponent(dims, 0));
}

LaurentPoly LaurentPoly::monomial(std::uint32_t p, std::uint32_t dims, std::int64_t c, Exponent e) {
  if (e.size() != dims) throw SpecError("monomial exponent has wrong dimension");
  LaurentPoly f(p, dims);
  std::uint32_t r = residue(c, p);
  if (r != 0) f.terms_.emplace(std::move(e), r);
  return f;
}

bool LaurentPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() != 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](std::int32_t v) { return v == 0; });
}

std::uint32_t LaurentPoly::constant_value() const {
  if (!is_constant()) throw SpecError("constant_value on a non-constant polynomial");
  return terms_.empty() ? 0 : terms_.begin()->second;
}

std::optional<std::pair<std::uint32_t, Exponent>> LaurentPoly::as_unit() const {
  if (terms_.size() != 1) return std::nullopt;
  return std::make_pair(terms_.begin()->second, terms_.begin()->first);
}

std::uint32_t LaurentPoly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

void LaurentPoly::add_term(const Exponent& e, std::int64_t c) {
  if (e.size() != dims_) throw SpecError("term exponent has wrong dimension");
  std::uint32_t r = residue(c, p_);
  if (r == 0) return;
  auto [it, inserted] = terms_.emplace(e, r);
  if (!inserted) {
    it->second = add_mod(it->second, r, p_);
    if (it->second == 0) terms_.erase(it);
  }
}

void LaurentPoly::check_compatible(const LaurentPoly& o) const {
  if (p_ != o.p_ || dims_ != o.dims_) throw SpecError("polynomial modulus/dimension mismatch");
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  check_compatible(o);
  LaurentPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  check_compatible(o);
  LaurentPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, neg_mod(c, p_));
  return r;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r(p_, dims_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, neg_mod(c, p_));
  return r;
}

LaurentPoly LaurentPoly::scaled(std::uint32_t c) const {
  LaurentPoly r(p_, dims_);
  c %= p_;
  if (c == 0) return r;
  for (const auto& [e, v] : terms_) {
    std::uint32_t cv = mul_mod(v, c, p_);
    if (cv != 0) r.terms_.emplace(e, cv);
  }
  return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  check_compatible(o);
  LaurentPoly r(p_, dims_);
  Exponent sum(dims_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      for (std::uint32_t i = 0; i < dims_; ++i) sum[i] = ea[i] + eb[i];
      r.add_term(sum, mul_mod(ca, cb, p_));
    }
  return r;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  return p_ == o.p_ && dims_ == o.dims_ && terms_ == o.terms_;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first_term = true;
  for (const auto& [e, c] : terms_) {
    if (!first_term) out << " + ";
    first_term = false;
    out << c;
    for (std::uint32_t i = 0; i < dims_; ++i) {
      if (e[i] == 0) continue;
      out << "*x" << i;
      if (e[i] != 1) out << "^" << e[i];
    }
  }
  return out.str();
}

}  // namespace nuca
