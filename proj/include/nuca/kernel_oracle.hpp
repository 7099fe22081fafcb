#pragma once

#include <cstdint>
#include <optional>

#include "nuca/config.hpp"
#include "nuca/mat.hpp"
#include "nuca/property.hpp"
#include "nuca/spec.hpp"

// Independent validation procedures.  Everything here sticks to exact
// brute-force semantics -- impulse simulation, window enumeration, direct
// stepping -- and deliberately avoids the symbol/characteristic-polynomial
// machinery, so a bug in the fast path and a bug here would have to agree to
// go unnoticed.

namespace nuca::oracle {

// Base-automaton probes by impulse-response iteration (the k impulse orbits
// determine the global linear map).  verdict is empty when the search hit
// `cap` without resolving -- never guessed.
struct BaseProbe {
  std::optional<bool> verdict;
  std::optional<std::uint64_t> index;      // nilpotency index
  std::optional<std::uint64_t> preperiod;  // eventual m
  std::optional<std::uint64_t> period;     // period n
};

BaseProbe probe_base_nilpotent(const NucaSpec& spec);
BaseProbe probe_base_periodic(const NucaSpec& spec, std::uint64_t cap = 4096);
BaseProbe probe_base_eventually_periodic(const NucaSpec& spec, std::uint64_t cap = 4096);

// apply_step^n versus one step of the claimed n-th power spec on random
// finite configurations.
bool oracle_power_agreement(const NucaSpec& spec, const NucaSpec& power, std::uint64_t n,
                            std::uint32_t trials, std::int32_t radius, std::uint64_t seed);

struct TrappedReport {
  bool verdict = false;
  std::optional<std::uint64_t> preperiod;  // in sigma_t steps
  std::optional<std::uint64_t> period;
};

// Enumerates every pattern on the trapped window and iterates the exact
// dynamics (apply_steps of the original spec, n0 steps at a time):
// nilpotency -- every orbit reaches the zero configuration; periodicity --
// the one-step window map is injective; eventual periodicity -- true once
// the base is (orbit statistics recorded for cross-checks).  Requires the
// base verdict for the property to hold; returns verdict false otherwise.
TrappedReport oracle_trapped_enumeration(const NucaSpec& spec, Property property,
                                         std::size_t carrier_cap = 4096);

// Nonzero kernel configuration supported in the radius-R box, if one exists
// there.  Sound for non-injectivity, incomplete in general: kernels with no
// finitely supported member (e.g. constants for the base 1 + x) are missed.
std::optional<PatternConfig> finite_support_kernel(const NucaSpec& spec, std::int32_t radius);

// d = 1 only.  The exact set of restrictions, to a boundary window of
// `width` sites, of one-sided infinite configurations annihilated by every
// base-rule equation reading inside the half-line.  Computed as the greatest
// fixed point of the one-site extension operator; the chain of subspaces is
// decreasing, so it stabilizes within ambient-dimension + 1 rounds.
struct TailSubspace {
  bool left;            // window of a left-infinite (true) or right-infinite config
  std::uint32_t width;  // sites in the window
  Subspace space;       // subspace of GF(p)^(k * width)
};

TailSubspace tail_subspace(const NucaSpec& spec, bool left);

// d = 1 only.  (Ker sigma_s) restricted to the centered window [-R, R],
// R = max|E| + 2 max|M| + r: interior kernel equations plus tail-membership
// of the two edge windows.  Exact for every r >= 1; nonzero iff sigma_s has
// nonzero kernel.
Subspace kernel_window_d1(const NucaSpec& spec, std::int32_t r);
SiteList kernel_window_sites(const NucaSpec& spec, std::int32_t r);

// Evaluates c[0] x + c[1] sigma(x) + ... + c[deg] sigma^deg(x) on random
// configurations; true iff every evaluation is the zero configuration.
bool oracle_annihilator(const NucaSpec& spec, const std::vector<std::uint32_t>& coeffs,
                        std::uint32_t trials, std::int32_t radius, std::uint64_t seed);

}  // namespace nuca::oracle
