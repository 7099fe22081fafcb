#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nuca/mat.hpp"

// Endomorphisms of a finite carrier: either a linear map restricted to a
// subspace of GF(p)^n, or an arbitrary self-map of an enumerated pattern set.
// Every windowed reduction ends here, and the classification below is what
// verdicts are read from.

namespace nuca {

struct EndoClass {
  bool nilpotent_to_zero = false;  // some power is the constant zero map
  bool bijective = false;
  // Minimal (m, n) with phi^(m+n) = phi^m as maps; n may be omitted when the
  // order iteration exceeds its cap (m, nilpotency and bijectivity stay exact).
  std::uint64_t preperiod = 0;
  std::optional<std::uint64_t> period;
};

class FiniteEndo {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Empty endomorphism (no carrier); classifies as vacuously everything.
  FiniteEndo() = default;

  // Restriction of `ambient_map` to `carrier`; throws ReductionError if the
  // carrier is not invariant.
  static FiniteEndo linear(Subspace carrier, const Mat& ambient_map);

  // Explicit finite self-map: elems[next[i]] = phi(elems[i]).  zero_index
  // locates the all-zero element, npos if it is not in the carrier.
  static FiniteEndo table(std::vector<std::vector<std::uint32_t>> elems,
                          std::vector<std::size_t> next, std::size_t zero_index);

  bool is_linear() const { return linear_.has_value(); }
  std::size_t dim() const;         // linear mode: carrier dimension
  std::size_t size() const;        // table mode: carrier cardinality
  const Subspace& carrier() const { return linear_->carrier; }
  const Mat& restricted() const { return linear_->restricted; }
  const std::vector<std::vector<std::uint32_t>>& elements() const { return table_->elems; }
  std::size_t step(std::size_t i) const { return table_->next[i]; }

  EndoClass classify(std::uint64_t period_cap = 1ull << 20) const;

 private:
  struct LinearData {
    Subspace carrier;
    Mat restricted;
  };
  struct TableData {
    std::vector<std::vector<std::uint32_t>> elems;
    std::vector<std::size_t> next;
    std::size_t zero_index;
  };

  std::optional<LinearData> linear_;
  std::optional<TableData> table_;
};

std::uint64_t lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap);

}  // namespace nuca
