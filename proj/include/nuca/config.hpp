#pragma once

#include <cstdint>
#include <map>
#include <random>

#include "nuca/gf.hpp"
#include "nuca/spec.hpp"

// Finite-support configurations over the all-zero background, stored as a
// canonical sparse map: only sites whose k-vector is nonzero appear, so two
// configurations are equal iff their maps are equal.

namespace nuca {

class PatternConfig {
 public:
  PatternConfig(std::uint32_t p, std::uint32_t k, std::uint32_t d);

  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t d() const { return d_; }

  const std::map<Point, std::vector<std::uint32_t>, PointLess>& support() const { return cells_; }
  bool is_zero() const { return cells_.empty(); }

  // Value at any site (zero vector off the support).
  std::vector<std::uint32_t> at(const Point& g) const;
  // Stores v (reduced mod p), erasing the site if v is zero.
  void set(const Point& g, std::vector<std::uint32_t> v);

  bool operator==(const PatternConfig& o) const;
  bool operator!=(const PatternConfig& o) const { return !(*this == o); }

 private:
  std::uint32_t p_, k_, d_;
  std::map<Point, std::vector<std::uint32_t>, PointLess> cells_;
};

// Impulse: component `comp` set to 1 at site g.
PatternConfig impulse_config(const NucaSpec& spec, const Point& g, std::uint32_t comp);

// One synchronous step of the automaton.
PatternConfig apply_step(const NucaSpec& spec, const PatternConfig& x);
PatternConfig apply_steps(const NucaSpec& spec, const PatternConfig& x, std::uint64_t n);

// (g x)(h) = x(h - g).
PatternConfig shift_config(const PatternConfig& x, const Point& g);

// sum_g <x(g), y(g)> over the (finite) common support.
Scalar pairing(const PatternConfig& x, const PatternConfig& y);

// Uniformly random values on the box [-radius, radius]^d (zeros kept sparse).
PatternConfig random_config(const NucaSpec& spec, std::int32_t radius, std::mt19937_64& rng);

// Pattern over `window` flattened in window order -> configuration, and back.
PatternConfig config_from_window(const NucaSpec& spec, const SiteList& window,
                                 std::span<const std::uint32_t> values);
std::vector<std::uint32_t> window_values(const PatternConfig& x, const SiteList& window);

}  // namespace nuca
