#include "nuca/mat.hpp"

#include <algorithm>
#include <stdexcept>

namespace nuca {

Mat::Mat(std::size_t rows, std::size_t cols, std::uint32_t p)
    : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {
  if (p < 2) throw SpecError("matrix modulus must be at least 2");
}

Mat Mat::identity(std::size_t n, std::uint32_t p) {
  Mat m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1 % p;
  return m;
}

Mat Mat::operator+(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_) throw SpecError("matrix shape/modulus mismatch in +");
  Mat r(rows_, cols_, p_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = add_mod(a_[i], o.a_[i], p_);
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_) throw SpecError("matrix shape/modulus mismatch in -");
  Mat r(rows_, cols_, p_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = sub_mod(a_[i], o.a_[i], p_);
  return r;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_ || p_ != o.p_) throw SpecError("matrix shape/modulus mismatch in *");
  Mat r(rows_, o.cols_, p_);
  Barrett br(p_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t t = 0; t < cols_; ++t) {
      std::uint64_t f = a_[i * cols_ + t];
      if (f == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        r.a_[i * o.cols_ + j] =
            static_cast<std::uint32_t>(br.reduce(r.a_[i * o.cols_ + j] + f * o.a_[t * o.cols_ + j]));
    }
  return r;
}

bool Mat::operator==(const Mat& o) const {
  return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

Mat Mat::transpose() const {
  Mat r(cols_, rows_, p_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.a_[j * rows_ + i] = a_[i * cols_ + j];
  return r;
}

Mat Mat::pow(std::uint64_t e) const {
  if (rows_ != cols_) throw SpecError("pow of non-square matrix");
  Mat acc = identity(rows_, p_);
  Mat base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

bool Mat::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](std::uint32_t v) { return v == 0; });
}

bool Mat::is_identity() const {
  if (rows_ != cols_) return false;
  return *this == identity(rows_, p_);
}

std::vector<std::uint32_t> Mat::apply(std::span<const std::uint32_t> v) const {
  if (v.size() != cols_) throw SpecError("matrix apply: size mismatch");
  std::vector<std::uint32_t> out(rows_, 0);
  Barrett br(p_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) acc = br.reduce(acc + (std::uint64_t)a_[i * cols_ + j] * v[j]);
    out[i] = static_cast<std::uint32_t>(acc);
  }
  return out;
}

std::size_t Mat::rref_in_place() {
  return p_ == 2 ? rref_in_place_packed() : rref_in_place_generic();
}

std::size_t Mat::rref_in_place_generic() {
  Barrett br(p_);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
    std::size_t piv = rank;
    while (piv < rows_ && a_[piv * cols_ + col] == 0) ++piv;
    if (piv == rows_) continue;
    if (piv != rank)
      std::swap_ranges(a_.begin() + piv * cols_, a_.begin() + (piv + 1) * cols_, a_.begin() + rank * cols_);
    std::uint32_t* prow = a_.data() + rank * cols_;
    std::uint64_t inv = inv_mod(prow[col], p_);
    if (inv != 1)
      for (std::size_t j = col; j < cols_; ++j)
        prow[j] = static_cast<std::uint32_t>(br.reduce(prow[j] * inv));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == rank) continue;
      std::uint32_t f = a_[r * cols_ + col];
      if (f == 0) continue;
      std::uint64_t fneg = p_ - f;
      std::uint32_t* row = a_.data() + r * cols_;
      for (std::size_t j = col; j < cols_; ++j)
        row[j] = static_cast<std::uint32_t>(br.reduce(row[j] + fneg * prow[j]));
    }
    ++rank;
  }
  return rank;
}

std::size_t Mat::rref_in_place_packed() {
  if (p_ != 2) throw SpecError("packed elimination requires p = 2");
  const std::size_t W = (cols_ + 63) / 64;
  std::vector<std::uint64_t> b(rows_ * W, 0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (a_[r * cols_ + c]) b[r * W + c / 64] |= 1ull << (c % 64);

  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
    const std::size_t w = col / 64;
    const std::uint64_t bit = 1ull << (col % 64);
    std::size_t piv = rank;
    while (piv < rows_ && !(b[piv * W + w] & bit)) ++piv;
    if (piv == rows_) continue;
    if (piv != rank)
      std::swap_ranges(b.begin() + piv * W, b.begin() + (piv + 1) * W, b.begin() + rank * W);
    const std::uint64_t* prow = b.data() + rank * W;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == rank || !(b[r * W + w] & bit)) continue;
      std::uint64_t* row = b.data() + r * W;
      for (std::size_t j = w; j < W; ++j) row[j] ^= prow[j];
    }
    ++rank;
  }

  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      a_[r * cols_ + c] = (b[r * W + c / 64] >> (c % 64)) & 1;
  return rank;
}

std::size_t Mat::rank() const {
  Mat copy = *this;
  return copy.rref_in_place();
}

std::vector<std::size_t> Mat::pivot_columns(const Mat& rref) {
  std::vector<std::size_t> piv;
  for (std::size_t r = 0; r < rref.rows(); ++r) {
    std::size_t c = 0;
    while (c < rref.cols() && rref.at(r, c) == 0) ++c;
    if (c == rref.cols()) break;  // zero rows sit at the bottom
    piv.push_back(c);
  }
  return piv;
}

Mat vstack(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols() || a.modulus() != b.modulus()) throw SpecError("vstack shape/modulus mismatch");
  Mat r(a.rows() + b.rows(), a.cols(), a.modulus());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.set(i, j, a.at(i, j));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) r.set(a.rows() + i, j, b.at(i, j));
  return r;
}

std::optional<Mat> solve_linear(const Mat& a, const Mat& rhs) {
  if (a.rows() != rhs.rows() || a.modulus() != rhs.modulus()) throw SpecError("solve_linear shape mismatch");
  const std::size_t n = a.cols(), m = rhs.cols();
  Mat aug(a.rows(), n + m, a.modulus());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.set(i, j, a.at(i, j));
    for (std::size_t j = 0; j < m; ++j) aug.set(i, n + j, rhs.at(i, j));
  }
  aug.rref_in_place();
  auto piv = Mat::pivot_columns(aug);
  Mat x(n, m, a.modulus());
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] >= n) return std::nullopt;  // pivot in the RHS block: inconsistent
    for (std::size_t j = 0; j < m; ++j) x.set(piv[r], j, aug.at(r, n + j));
  }
  return x;
}

Subspace rref_kernel(const Mat& m) {
  Mat r = m;
  r.rref_in_place();
  auto piv = Mat::pivot_columns(r);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;

  std::size_t nfree = m.cols() - piv.size();
  Mat basis(nfree, m.cols(), m.modulus());
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (is_piv[c]) continue;
    basis.set(row, c, 1);
    for (std::size_t i = 0; i < piv.size(); ++i) basis.set(row, piv[i], neg_mod(r.at(i, c), m.modulus()));
    ++row;
  }
  return Subspace::from_rows(std::move(basis));
}

Subspace image_basis(const Mat& m) { return Subspace::from_rows(m.transpose()); }

Subspace Subspace::zero(std::size_t ambient, std::uint32_t p) {
  return from_rows(Mat(0, ambient, p));
}

Subspace Subspace::full(std::size_t ambient, std::uint32_t p) {
  return from_rows(Mat::identity(ambient, p));
}

Subspace Subspace::from_rows(Mat rows) {
  const std::size_t ambient = rows.cols();
  rows.rref_in_place();
  auto piv = Mat::pivot_columns(rows);
  Mat basis(piv.size(), ambient, rows.modulus());
  for (std::size_t i = 0; i < piv.size(); ++i)
    for (std::size_t j = 0; j < ambient; ++j) basis.set(i, j, rows.at(i, j));
  Subspace s(ambient, std::move(basis));
  s.pivots_ = std::move(piv);
  return s;
}

bool Subspace::contains(std::span<const std::uint32_t> v) const {
  return coordinates(v).has_value();
}

std::optional<std::vector<std::uint32_t>> Subspace::coordinates(std::span<const std::uint32_t> v) const {
  if (v.size() != ambient_) throw SpecError("subspace membership: ambient dimension mismatch");
  const std::uint32_t p = basis_.modulus();
  // Pivot columns of an RREF basis are unit columns, so coordinates can be
  // read off directly; the residual check decides membership.
  std::vector<std::uint32_t> coords(dim());
  std::vector<std::uint32_t> res(v.begin(), v.end());
  for (std::size_t i = 0; i < dim(); ++i) {
    std::uint32_t f = res[pivots_[i]];
    coords[i] = f;
    if (f == 0) continue;
    std::uint64_t fneg = p - f;
    Barrett br(p);
    for (std::size_t j = 0; j < ambient_; ++j)
      res[j] = static_cast<std::uint32_t>(br.reduce(res[j] + fneg * basis_.at(i, j)));
  }
  for (auto r : res)
    if (r != 0) return std::nullopt;
  return coords;
}

std::vector<std::uint32_t> Subspace::from_coordinates(std::span<const std::uint32_t> coords) const {
  if (coords.size() != dim()) throw SpecError("subspace coordinates: dimension mismatch");
  const std::uint32_t p = basis_.modulus();
  std::vector<std::uint32_t> v(ambient_, 0);
  Barrett br(p);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (coords[i] == 0) continue;
    for (std::size_t j = 0; j < ambient_; ++j)
      v[j] = static_cast<std::uint32_t>(br.reduce(v[j] + (std::uint64_t)coords[i] * basis_.at(i, j)));
  }
  return v;
}

Mat Subspace::annihilator() const {
  // Functionals f with B f = 0; correct count by rank-nullity, and each one
  // vanishes on the row span.
  return rref_kernel(basis_).basis();
}

}  // namespace nuca
