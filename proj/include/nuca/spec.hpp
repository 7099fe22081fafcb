#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "nuca/lattice.hpp"
#include "nuca/mat.hpp"
#include "nuca/symbol.hpp"

// Non-uniform cellular automata over Z^d with alphabet GF(p)^k that agree
// with a linear base rule outside a finite (or sparse) set of perturbed
// cells.  A cell g computes s(g) applied to the pattern x(g + m), m in M;
// after validation every rule in a spec shares the same normalized memory M
// (0 in M and M = -M), so window bookkeeping is uniform.

namespace nuca {

// Coefficient matrices aligned index-for-index with the spec's memory list.
struct LinearRule {
  std::vector<Mat> coeffs;
};

// Total lookup table over patterns in (GF(p)^k)^M.  Entry order: a pattern is
// flattened site-major (memory list order), component-minor, and read as a
// little-endian base-p number; outputs[index] is the k-vector result.
struct TableRule {
  std::vector<std::vector<std::uint32_t>> outputs;
};

struct LocalRule {
  std::variant<LinearRule, TableRule> body;

  bool is_linear() const { return std::holds_alternative<LinearRule>(body); }
  const LinearRule& linear() const { return std::get<LinearRule>(body); }
  const TableRule& table() const { return std::get<TableRule>(body); }
};

// One perturbation shape for sparse mode: rules at fixed offsets relative to
// an anchor.  `anchors` lists explicit placements (possibly empty); a
// placement generator or promise covers the rest.
struct ClusterType {
  std::map<Point, LocalRule, PointLess> cells;
  std::vector<Point> anchors;
  bool infinite = false;       // unbounded number of placements
  std::uint64_t count = 0;     // placements when finite and generated
};

enum class Placement { promise, polynomial, exponential };

struct SparseInfo {
  std::vector<ClusterType> clusters;
  Placement placement = Placement::promise;
  std::uint32_t degree = 2;  // polynomial generators only; must be >= 2
};

struct NucaSpec {
  std::uint32_t p = 2;
  std::uint32_t k = 1;
  std::uint32_t d = 1;
  SiteList memory;
  LinearRule base;
  std::map<Point, LocalRule, PointLess> perturbations;
  std::optional<SparseInfo> sparse;

  SiteList perturbation_support() const;
  bool fully_linear() const;
};

// Size caps shared by validation and the windowed machinery.
constexpr std::size_t kTableCap = 1u << 16;      // max table entries per rule
constexpr std::size_t kMemoryCap = 200000;       // max sites in a composed memory

// Number of table entries p^(k * nsites); throws ResourceLimit past `cap`.
std::size_t pattern_space_size(std::uint32_t p, std::uint32_t k, std::size_t nsites,
                               std::size_t cap = kTableCap);
std::size_t pattern_encode(std::span<const std::uint32_t> values, std::uint32_t p);
std::vector<std::uint32_t> pattern_decode(std::size_t index, std::uint32_t p, std::size_t len);

// Coefficient list aligned with `memory`; offsets absent from the map get
// zero blocks.
LinearRule linear_rule_for(const SiteList& memory, const std::map<Point, Mat, PointLess>& coeffs,
                           std::uint32_t k, std::uint32_t p);

// Checks well-formedness and returns the normalized spec: memory symmetrized
// and 0-padded, rules re-aligned (tables re-indexed), perturbations equal to
// the base dropped.  Idempotent.
NucaSpec validate_spec(const NucaSpec& raw);

// sum_m A_m x^m for the base rule.
SymbolMatrix base_symbol(const NucaSpec& spec);

// Coefficient list over `memory` reading the matrix of x^m off the symbol;
// every exponent of s must lie in `memory`.
LinearRule rule_from_symbol(const SymbolMatrix& s, const SiteList& memory);

// Rule in force at cell g, resolving sparse placements.  Throws SpecError
// when a promise-mode sparse spec is queried outside its explicit anchors.
LocalRule local_rule_at(const NucaSpec& spec, const Point& g);

// One local evaluation: pattern holds k values per memory site, flattened in
// window order.
std::vector<std::uint32_t> evaluate_rule(const NucaSpec& spec, const LocalRule& rule,
                                         std::span<const std::uint32_t> pattern);

bool rules_equal(const NucaSpec& spec, const LocalRule& a, const LocalRule& b);

// Spec of sigma_s^n (n >= 1); memory grows to the n-fold Minkowski power.
NucaSpec power_spec(const NucaSpec& spec, std::uint64_t n);

// Spec of sigma_a after sigma_b (apply b first).  Linear rules only.
NucaSpec compose_specs(const NucaSpec& a, const NucaSpec& b);

// Translated spec: the rule at cell e moves to e + g.
NucaSpec shift_spec(const NucaSpec& spec, const Point& g);

// Adjoint automaton for the bilinear pairing sum_g <x(g), y(g)>: at offset
// m' the dual cell h applies the transpose of the matrix cell h + m' applies
// at -m'.  Linear rules only.
NucaSpec dual_spec(const NucaSpec& spec);

// Semantic equality of the induced global maps (linear rules; memories may
// differ).  Sparse descriptors must match structurally.
bool spec_equivalent(const NucaSpec& a, const NucaSpec& b);

}  // namespace nuca
