#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nuca/gf.hpp"

// Dense matrices over GF(p) and canonically represented subspaces.
//
// Row reduction is the workhorse of every decision in this project, so it has
// two implementations: a generic Gauss-Jordan for any prime (Barrett-reduced
// inner loop) and a bit-packed XOR path for p = 2.  The public entry points
// dispatch on p; both paths are also callable directly so tests and the
// benchmark can compare them.

namespace nuca {

class Subspace;

class Mat {
 public:
  Mat(std::size_t rows, std::size_t cols, std::uint32_t p);

  static Mat identity(std::size_t n, std::uint32_t p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t modulus() const { return p_; }

  std::uint32_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint32_t v) { a_[r * cols_ + c] = v % p_; }

  std::span<const std::uint32_t> row(std::size_t r) const {
    return std::span<const std::uint32_t>(a_.data() + r * cols_, cols_);
  }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  bool operator==(const Mat& o) const;
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat transpose() const;
  Mat pow(std::uint64_t e) const;  // square matrices only
  bool is_zero() const;
  bool is_identity() const;

  std::vector<std::uint32_t> apply(std::span<const std::uint32_t> v) const;  // this * v

  // In-place reduced row echelon form; returns the rank.
  std::size_t rref_in_place();          // dispatches to the packed path for p == 2
  std::size_t rref_in_place_generic();  // reference path, any prime
  std::size_t rref_in_place_packed();   // p == 2 only

  std::size_t rank() const;

  // Columns of the echelon pivots, ascending.  Only meaningful right after a
  // rref_in_place call; recomputed on demand otherwise.
  static std::vector<std::size_t> pivot_columns(const Mat& rref);

 private:
  std::uint32_t p_;
  std::size_t rows_, cols_;
  std::vector<std::uint32_t> a_;
};

// Stack rows of b under a.
Mat vstack(const Mat& a, const Mat& b);

// Solve a * x = rhs column-wise; returns one solution (free variables zero)
// or nullopt if inconsistent.
std::optional<Mat> solve_linear(const Mat& a, const Mat& rhs);

// Null space {v : m v = 0} in canonical form.
Subspace rref_kernel(const Mat& m);

// Column space of m in canonical form.
Subspace image_basis(const Mat& m);

// A linear subspace of GF(p)^n held as a canonical RREF row basis, so two
// subspaces are equal iff their stored grids are equal.
class Subspace {
 public:
  static Subspace zero(std::size_t ambient, std::uint32_t p);
  static Subspace full(std::size_t ambient, std::uint32_t p);
  // Canonicalizes the row span of `rows`.
  static Subspace from_rows(Mat rows);

  std::size_t dim() const { return basis_.rows(); }
  std::size_t ambient_dim() const { return ambient_; }
  std::uint32_t modulus() const { return basis_.modulus(); }
  const Mat& basis() const { return basis_; }

  bool contains(std::span<const std::uint32_t> v) const;
  // Coordinates of v in the canonical basis, or nullopt if v is outside.
  std::optional<std::vector<std::uint32_t>> coordinates(std::span<const std::uint32_t> v) const;
  // Basis-row combination for a coordinate vector.
  std::vector<std::uint32_t> from_coordinates(std::span<const std::uint32_t> coords) const;

  // Rows are functionals vanishing exactly on this subspace.
  Mat annihilator() const;

  bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

 private:
  Subspace(std::size_t ambient, Mat basis) : ambient_(ambient), basis_(std::move(basis)) {}

  std::size_t ambient_;
  Mat basis_;  // dim x ambient, canonical RREF, no zero rows
  std::vector<std::size_t> pivots_;
};

}  // namespace nuca
