#pragma once

#include <cstdint>
#include <vector>

#include "nuca/mat.hpp"
#include "nuca/spec.hpp"

// The map a finite window of cells computes in one step: each output cell
// g in `cells` applies its local rule to the input window cells ⊕ M.  With
// linear rules throughout this is a matrix between the two window spaces,
// which is what every finite reduction in the decision procedures consumes;
// with table rules it still evaluates pointwise.

namespace nuca {

class InducedMap {
 public:
  InducedMap(const NucaSpec& spec, SiteList cells);

  const SiteList& in_sites() const { return in_; }    // cells ⊕ M
  const SiteList& out_sites() const { return out_; }  // cells
  std::size_t in_dim() const { return spec_.k * in_.size(); }
  std::size_t out_dim() const { return spec_.k * out_.size(); }

  bool linear() const { return linear_; }
  // out_dim x in_dim matrix of the window map (linear mode only).
  const Mat& matrix() const;

  // Evaluate on a window vector in site order (works in either mode).
  std::vector<std::uint32_t> apply(std::span<const std::uint32_t> window) const;

 private:
  NucaSpec spec_;
  SiteList out_, in_;
  bool linear_;
  Mat body_;
  std::vector<LocalRule> rules_;  // one per output cell, table mode
};

}  // namespace nuca
