#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "nuca/ca_decide.hpp"
#include "nuca/config.hpp"
#include "nuca/endo.hpp"
#include "nuca/property.hpp"
#include "nuca/spec.hpp"

// Decision procedures for perturbed automata.  Each dynamical question about
// sigma_s is reduced, at a power sigma_t = sigma_s^(n0) chosen so the far
// rules become trivial (zero, identity, or idempotent), to a self-map phi of
// a finite window carrier; the verdict and the certificate are read off the
// classification of phi and re-verified by direct stepping before emission.

namespace nuca {

enum class PhiMode { nilpotent, periodic, eventual };

struct PhiReduction {
  PhiMode mode;
  std::uint64_t n0 = 1;      // power taken
  NucaSpec t;                // spec of sigma_s^(n0)
  SiteList big_memory;       // memory N of t
  SiteList window;           // EN (nilpotent) or EN^2 (periodic/eventual)
  FiniteEndo phi;
  bool far_rules_checked = false;
  bool degenerate = false;       // no perturbations: carrier empty, base decides
  bool carrier_widened = false;  // reachable-window carrier replaced by the full window
};

// Builds the reduction; `n0` comes from the base analysis (see decide_*).
// Throws ReductionError when a consistency check fails -- that signals a bug,
// never a verdict.
PhiReduction reduce_phi(const NucaSpec& spec, PhiMode mode, std::uint64_t n0);

struct DecisionReport {
  Property property;
  bool verdict = false;
  // Certificate fields, set only when the verdict is true:
  std::optional<std::uint64_t> exponent;    // nilpotent: sigma^e = 0
  std::optional<std::uint64_t> preperiod;   // eventual/Cayley-Hamilton m
  std::optional<std::uint64_t> period;      // periodic n, eventual n
  std::optional<std::uint64_t> kernel_dimension;  // injective: 0
  // Negative witnesses and context go here (stringly, for the report file).
  std::map<std::string, std::string> diagnostics;
  std::optional<PatternConfig> kernel_witness;  // injective false, when finitely supported
};

DecisionReport decide_nilpotent(const NucaSpec& spec);
DecisionReport decide_periodic(const NucaSpec& spec);
DecisionReport decide_eventually_periodic(const NucaSpec& spec);
DecisionReport decide_cayley_hamilton(const NucaSpec& spec);
DecisionReport decide_injective(const NucaSpec& spec);
DecisionReport decide_post_surjective(const NucaSpec& spec);

DecisionReport decide_property(const NucaSpec& spec, Property property);

// Exact two-sided inverse automaton; nullopt when no inverse with
// perturbation-memory radius <= max_radius exists (caller may retry larger).
// Throws SpecError when the spec is not injective.
std::optional<NucaSpec> construct_inverse(const NucaSpec& spec, std::uint32_t max_radius);

// Sparse-perturbation decisions (clusters + placement promise/generator).
// property must be one of nilpotent / periodic / eventually-periodic /
// cayley-hamilton.
DecisionReport decide_sparse(const NucaSpec& spec, Property property);

}  // namespace nuca
