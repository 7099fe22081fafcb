#include "nuca/spec.hpp"

#include <algorithm>

#include "nuca/config.hpp"

namespace nuca {

SiteList NucaSpec::perturbation_support() const {
  std::vector<Point> cells;
  for (const auto& [g, r] : perturbations) cells.push_back(g);
  return sorted_unique(std::move(cells));
}

bool NucaSpec::fully_linear() const {
  for (const auto& [g, r] : perturbations)
    if (!r.is_linear()) return false;
  if (sparse)
    for (const auto& cl : sparse->clusters)
      for (const auto& [g, r] : cl.cells)
        if (!r.is_linear()) return false;
  return true;
}

std::size_t pattern_space_size(std::uint32_t p, std::uint32_t k, std::size_t nsites,
                               std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < k * nsites; ++i) {
    if (total > cap / p) throw ResourceLimit("pattern space exceeds the table cap");
    total *= p;
  }
  return total;
}

std::size_t pattern_encode(std::span<const std::uint32_t> values, std::uint32_t p) {
  std::size_t idx = 0;
  for (std::size_t i = values.size(); i-- > 0;) idx = idx * p + values[i];
  return idx;
}

std::vector<std::uint32_t> pattern_decode(std::size_t index, std::uint32_t p, std::size_t len) {
  std::vector<std::uint32_t> v(len);
  for (std::size_t i = 0; i < len; ++i) {
    v[i] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return v;
}

LinearRule linear_rule_for(const SiteList& memory, const std::map<Point, Mat, PointLess>& coeffs,
                           std::uint32_t k, std::uint32_t p) {
  LinearRule r;
  for (const auto& m : memory) {
    auto it = coeffs.find(m);
    r.coeffs.push_back(it == coeffs.end() ? Mat(k, k, p) : it->second);
  }
  return r;
}

namespace {

// Re-express a rule given over `from` on the larger memory `to` (from must be
// a subset of to).  Linear rules gain zero blocks; tables are re-indexed.
LocalRule realign_rule(const LocalRule& rule, const SiteList& from, const SiteList& to,
                       std::uint32_t p, std::uint32_t k) {
  if (rule.is_linear()) {
    std::map<Point, Mat, PointLess> by_site;
    for (std::size_t i = 0; i < from.size(); ++i) by_site.emplace(from[i], rule.linear().coeffs[i]);
    return LocalRule{linear_rule_for(to, by_site, k, p)};
  }
  const TableRule& t = rule.table();
  std::vector<std::size_t> pick;  // flattened positions of `from` values inside a `to` pattern
  for (const auto& m : from) {
    std::size_t i = site_index(to, m);
    for (std::uint32_t c = 0; c < k; ++c) pick.push_back(i * k + c);
  }
  std::size_t total = pattern_space_size(p, k, to.size());
  TableRule out;
  out.outputs.resize(total);
  std::vector<std::uint32_t> sub(from.size() * k);
  for (std::size_t idx = 0; idx < total; ++idx) {
    auto full = pattern_decode(idx, p, to.size() * k);
    for (std::size_t i = 0; i < pick.size(); ++i) sub[i] = full[pick[i]];
    out.outputs[idx] = t.outputs[pattern_encode(sub, p)];
  }
  return LocalRule{std::move(out)};
}

void check_matrix(const Mat& m, std::uint32_t k, std::uint32_t p, const char* what) {
  if (m.rows() != k || m.cols() != k) throw SpecError(std::string(what) + ": coefficient matrix is not k x k");
  if (m.modulus() != p) throw SpecError(std::string(what) + ": coefficient matrix has wrong modulus");
}

void check_rule(const LocalRule& rule, const SiteList& memory, std::uint32_t k, std::uint32_t p,
                const char* what) {
  if (rule.is_linear()) {
    if (rule.linear().coeffs.size() != memory.size())
      throw SpecError(std::string(what) + ": rule is not aligned with the memory list");
    for (const auto& m : rule.linear().coeffs) check_matrix(m, k, p, what);
    return;
  }
  const TableRule& t = rule.table();
  std::size_t want = pattern_space_size(p, k, memory.size());
  if (t.outputs.size() != want)
    throw SpecError(std::string(what) + ": table has " + std::to_string(t.outputs.size()) +
                    " entries, expected " + std::to_string(want));
  for (const auto& out : t.outputs) {
    if (out.size() != k) throw SpecError(std::string(what) + ": table output has wrong length");
    for (auto v : out)
      if (v >= p) throw SpecError(std::string(what) + ": table output value out of range");
  }
  for (auto v : t.outputs[0])
    if (v != 0)
      throw SpecError(std::string(what) + ": table rule is not zero-quiescent (all-zero input must map to zero)");
}

std::int64_t placement_position(const SparseInfo& sp, std::uint64_t n) {
  if (sp.placement == Placement::polynomial) {
    std::int64_t pos = 1;
    for (std::uint32_t i = 0; i < sp.degree; ++i) {
      if (pos > (std::int64_t(1) << 40)) throw ResourceLimit("sparse placement position overflow");
      pos *= static_cast<std::int64_t>(n);
    }
    return pos;
  }
  if (n > 40) throw ResourceLimit("sparse placement position overflow");
  return std::int64_t(1) << n;  // exponential
}

}  // namespace

NucaSpec validate_spec(const NucaSpec& raw) {
  if (!is_prime(raw.p)) throw SpecError("p = " + std::to_string(raw.p) + " is not prime");
  if (raw.k < 1) throw SpecError("alphabet dimension k must be at least 1");
  if (raw.d < 1) throw SpecError("lattice dimension d must be at least 1");

  for (const auto& m : raw.memory)
    if (m.size() != raw.d) throw SpecError("memory offset " + point_to_string(m) + " has wrong dimension");
  SiteList declared = sorted_unique(raw.memory);
  if (declared.size() != raw.memory.size()) throw SpecError("duplicate memory offsets");

  check_rule(LocalRule{raw.base}, raw.memory, raw.k, raw.p, "base rule");

  SiteList normalized = site_union(site_union(declared, site_negate(declared)), {origin(raw.d)});

  NucaSpec spec;
  spec.p = raw.p;
  spec.k = raw.k;
  spec.d = raw.d;
  spec.memory = normalized;
  spec.base = realign_rule(LocalRule{raw.base}, raw.memory, normalized, raw.p, raw.k).linear();

  for (const auto& [g, rule] : raw.perturbations) {
    if (g.size() != raw.d) throw SpecError("perturbed cell " + point_to_string(g) + " has wrong dimension");
    check_rule(rule, raw.memory, raw.k, raw.p, "perturbation rule");
    LocalRule aligned = realign_rule(rule, raw.memory, normalized, raw.p, raw.k);
    if (!rules_equal(spec, aligned, LocalRule{spec.base})) spec.perturbations.emplace(g, std::move(aligned));
  }

  if (raw.sparse) {
    if (!raw.perturbations.empty())
      throw SpecError("sparse specs must list every perturbed cell inside a cluster");
    SparseInfo sp;
    sp.placement = raw.sparse->placement;
    sp.degree = raw.sparse->degree;
    if (sp.placement == Placement::polynomial && sp.degree < 2)
      throw SpecError("affine placement generators are not sparse; polynomial degree must be >= 2");
    for (const auto& cl : raw.sparse->clusters) {
      if (cl.cells.empty()) throw SpecError("sparse cluster with no cells");
      ClusterType nc;
      nc.infinite = cl.infinite;
      nc.count = cl.count;
      for (const auto& [g, rule] : cl.cells) {
        if (g.size() != raw.d) throw SpecError("cluster cell " + point_to_string(g) + " has wrong dimension");
        if (!rule.is_linear()) throw SpecError("sparse clusters admit linear rules only");
        check_rule(rule, raw.memory, raw.k, raw.p, "cluster rule");
        nc.cells.emplace(g, realign_rule(rule, raw.memory, normalized, raw.p, raw.k));
      }
      for (const auto& a : cl.anchors) {
        if (a.size() != raw.d) throw SpecError("cluster anchor " + point_to_string(a) + " has wrong dimension");
        nc.anchors.push_back(a);
      }
      if (sorted_unique(nc.anchors).size() != nc.anchors.size())
        throw SpecError("duplicate cluster anchors");
      sp.clusters.push_back(std::move(nc));
    }
    if (sp.placement != Placement::promise && sp.clusters.size() != 1)
      throw SpecError("a placement generator drives exactly one cluster type");
    spec.sparse = std::move(sp);
  }

  return spec;
}

SymbolMatrix base_symbol(const NucaSpec& spec) {
  SymbolMatrix s(spec.k, spec.p, spec.d);
  for (std::size_t i = 0; i < spec.memory.size(); ++i) {
    const Mat& a = spec.base.coeffs[i];
    Exponent e(spec.memory[i].begin(), spec.memory[i].end());
    for (std::uint32_t r = 0; r < spec.k; ++r)
      for (std::uint32_t c = 0; c < spec.k; ++c)
        if (a.at(r, c) != 0) s.at(r, c).add_term(e, a.at(r, c));
  }
  return s;
}

LinearRule rule_from_symbol(const SymbolMatrix& s, const SiteList& memory) {
  const std::uint32_t k = s.k(), p = s.modulus();
  std::map<Point, Mat, PointLess> by_site;
  for (const auto& m : memory) by_site.emplace(m, Mat(k, k, p));
  for (std::uint32_t r = 0; r < k; ++r)
    for (std::uint32_t c = 0; c < k; ++c)
      for (const auto& [e, coeff] : s.at(r, c).terms()) {
        Point site(e.begin(), e.end());
        auto it = by_site.find(site);
        if (it == by_site.end())
          throw SpecError("symbol exponent " + point_to_string(site) + " outside the target memory");
        it->second.set(r, c, coeff);
      }
  return linear_rule_for(memory, by_site, k, p);
}

LocalRule local_rule_at(const NucaSpec& spec, const Point& g) {
  auto it = spec.perturbations.find(g);
  if (it != spec.perturbations.end()) return it->second;
  if (spec.sparse) {
    const SparseInfo& sp = *spec.sparse;
    for (const auto& cl : sp.clusters)
      for (const auto& a : cl.anchors) {
        auto cit = cl.cells.find(point_sub(g, a));
        if (cit != cl.cells.end()) return cit->second;
      }
    if (sp.placement == Placement::promise) {
      bool anchored = std::any_of(sp.clusters.begin(), sp.clusters.end(),
                                  [](const ClusterType& c) { return c.infinite || c.count > c.anchors.size(); });
      if (anchored)
        throw SpecError("sparse placement unresolved at cell " + point_to_string(g) +
                        "; promise-mode specs have no pointwise evaluation outside explicit anchors");
      return LocalRule{spec.base};
    }
    // Generated placements march along the first axis; scan the positions
    // whose cluster footprint could reach g.
    const ClusterType& cl = sp.clusters[0];
    std::int64_t span_lo = 0, span_hi = 0;
    for (const auto& [c, r] : cl.cells) {
      span_lo = std::min<std::int64_t>(span_lo, c[0]);
      span_hi = std::max<std::int64_t>(span_hi, c[0]);
    }
    for (std::uint64_t n = 1;; ++n) {
      if (!cl.infinite && n > cl.count) break;
      std::int64_t pos = placement_position(sp, n);
      if (pos + span_lo > g[0]) break;
      Point anchor = origin(spec.d);
      anchor[0] = static_cast<std::int32_t>(pos);
      auto cit = cl.cells.find(point_sub(g, anchor));
      if (cit != cl.cells.end()) return cit->second;
    }
    return LocalRule{spec.base};
  }
  return LocalRule{spec.base};
}

std::vector<std::uint32_t> evaluate_rule(const NucaSpec& spec, const LocalRule& rule,
                                         std::span<const std::uint32_t> pattern) {
  if (pattern.size() != spec.memory.size() * spec.k)
    throw SpecError("local pattern has wrong length");
  if (!rule.is_linear()) return rule.table().outputs[pattern_encode(pattern, spec.p)];
  std::vector<std::uint32_t> out(spec.k, 0);
  const auto& coeffs = rule.linear().coeffs;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Mat& a = coeffs[i];
    for (std::uint32_t r = 0; r < spec.k; ++r) {
      std::uint64_t acc = out[r];
      for (std::uint32_t c = 0; c < spec.k; ++c)
        acc += (std::uint64_t)a.at(r, c) * pattern[i * spec.k + c] % spec.p;
      out[r] = static_cast<std::uint32_t>(acc % spec.p);
    }
  }
  return out;
}

bool rules_equal(const NucaSpec& spec, const LocalRule& a, const LocalRule& b) {
  if (a.is_linear() && b.is_linear()) return a.linear().coeffs == b.linear().coeffs;
  if (!a.is_linear() && !b.is_linear()) return a.table().outputs == b.table().outputs;
  const LocalRule& tab = a.is_linear() ? b : a;
  const LocalRule& lin = a.is_linear() ? a : b;
  for (std::size_t idx = 0; idx < tab.table().outputs.size(); ++idx) {
    auto pattern = pattern_decode(idx, spec.p, spec.memory.size() * spec.k);
    if (evaluate_rule(spec, lin, pattern) != tab.table().outputs[idx]) return false;
  }
  return true;
}

NucaSpec power_spec(const NucaSpec& raw, std::uint64_t n) {
  if (n < 1) throw SpecError("power_spec needs n >= 1");
  NucaSpec spec = validate_spec(raw);
  if (spec.sparse) throw SpecError("power of a sparse spec; decide per cluster type instead");

  SymbolMatrix sn = base_symbol(spec).pow(n);
  SiteList big = site_power(spec.memory, n, spec.d, kMemoryCap);

  NucaSpec out;
  out.p = spec.p;
  out.k = spec.k;
  out.d = spec.d;
  out.memory = big;
  out.base = rule_from_symbol(sn, big);

  if (!spec.perturbations.empty()) {
    SiteList e = spec.perturbation_support();
    SiteList et = site_sum(e, site_power(spec.memory, n - 1, spec.d, kMemoryCap));
    if (spec.fully_linear()) {
      // By linearity the n-step rule at g is determined by impulse responses:
      // the coefficient of x(g + v) is column-assembled from sigma^n(delta).
      std::map<Point, std::vector<PatternConfig>, PointLess> responses;
      for (const auto& h : site_sum(et, big)) {
        std::vector<PatternConfig> per_comp;
        for (std::uint32_t c = 0; c < spec.k; ++c)
          per_comp.push_back(apply_steps(spec, impulse_config(spec, h, c), n));
        responses.emplace(h, std::move(per_comp));
      }
      for (const auto& g : et) {
        std::map<Point, Mat, PointLess> by_site;
        for (const auto& v : big) {
          Mat block(spec.k, spec.k, spec.p);
          const auto& resp = responses.at(point_add(g, v));
          for (std::uint32_t c = 0; c < spec.k; ++c) {
            auto val = resp[c].at(g);
            for (std::uint32_t r = 0; r < spec.k; ++r) block.set(r, c, val[r]);
          }
          by_site.emplace(v, std::move(block));
        }
        out.perturbations.emplace(g, LocalRule{linear_rule_for(big, by_site, spec.k, spec.p)});
      }
    } else {
      std::size_t total = pattern_space_size(spec.p, spec.k, big.size());
      for (const auto& g : et) {
        SiteList window = site_shift(big, g);
        TableRule t;
        t.outputs.reserve(total);
        for (std::size_t idx = 0; idx < total; ++idx) {
          auto pattern = pattern_decode(idx, spec.p, big.size() * spec.k);
          PatternConfig x = config_from_window(spec, window, pattern);
          t.outputs.push_back(apply_steps(spec, x, n).at(g));
        }
        out.perturbations.emplace(g, LocalRule{TableRule{std::move(t)}});
      }
    }
  }
  return validate_spec(out);
}

NucaSpec compose_specs(const NucaSpec& first_raw, const NucaSpec& second_raw) {
  NucaSpec a = validate_spec(first_raw);   // applied second
  NucaSpec b = validate_spec(second_raw);  // applied first
  if (a.p != b.p || a.k != b.k || a.d != b.d) throw SpecError("composition of mismatched specs");
  if (!a.fully_linear() || !b.fully_linear() || a.sparse || b.sparse)
    throw SpecError("compose_specs handles plain linear specs only");

  NucaSpec out;
  out.p = a.p;
  out.k = a.k;
  out.d = a.d;
  out.memory = site_sum(a.memory, b.memory);
  if (out.memory.size() > kMemoryCap) throw ResourceLimit("memory-cap exceeded in composition");
  out.base = rule_from_symbol(base_symbol(a) * base_symbol(b), out.memory);

  SiteList ec = site_union(a.perturbation_support(),
                           site_sum(b.perturbation_support(), a.memory));
  for (const auto& g : ec) {
    // C_v = sum over m + m' = v of A^(g)_m B^(g+m)_(m').
    std::map<Point, Mat, PointLess> by_site;
    for (const auto& v : out.memory) by_site.emplace(v, Mat(a.k, a.k, a.p));
    LinearRule ra = local_rule_at(a, g).linear();
    for (std::size_t i = 0; i < a.memory.size(); ++i) {
      const Mat& am = ra.coeffs[i];
      if (am.is_zero()) continue;
      LinearRule rb = local_rule_at(b, point_add(g, a.memory[i])).linear();
      for (std::size_t j = 0; j < b.memory.size(); ++j) {
        if (rb.coeffs[j].is_zero()) continue;
        Point v = point_add(a.memory[i], b.memory[j]);
        auto it = by_site.find(v);
        it->second = it->second + am * rb.coeffs[j];
      }
    }
    out.perturbations.emplace(g, LocalRule{linear_rule_for(out.memory, by_site, a.k, a.p)});
  }
  return validate_spec(out);
}

NucaSpec shift_spec(const NucaSpec& raw, const Point& g) {
  NucaSpec spec = validate_spec(raw);
  if (g.size() != spec.d) throw SpecError("shift vector has wrong dimension");
  NucaSpec out = spec;
  out.perturbations.clear();
  for (const auto& [h, rule] : spec.perturbations) out.perturbations.emplace(point_add(h, g), rule);
  if (out.sparse)
    for (auto& cl : out.sparse->clusters)
      for (auto& a : cl.anchors) a = point_add(a, g);
  return out;
}

NucaSpec dual_spec(const NucaSpec& raw) {
  NucaSpec spec = validate_spec(raw);
  if (!spec.fully_linear() || spec.sparse)
    throw SpecError("dual_spec is defined for plain linear specs");

  NucaSpec out;
  out.p = spec.p;
  out.k = spec.k;
  out.d = spec.d;
  out.memory = spec.memory;  // symmetric, so -M = M
  out.base = rule_from_symbol(base_symbol(spec).transpose_reversed(), out.memory);

  // The dual cell h reads offset m' with the transpose of what cell h + m'
  // applies at -m'; h is affected whenever some h + m' is perturbed.
  for (const auto& h : site_sum(spec.perturbation_support(), spec.memory)) {
    std::map<Point, Mat, PointLess> by_site;
    for (std::size_t i = 0; i < spec.memory.size(); ++i) {
      const Point& mp = spec.memory[i];
      LinearRule src = local_rule_at(spec, point_add(h, mp)).linear();
      by_site.emplace(mp, src.coeffs[site_index(spec.memory, point_neg(mp))].transpose());
    }
    out.perturbations.emplace(h, LocalRule{linear_rule_for(out.memory, by_site, spec.k, spec.p)});
  }
  return validate_spec(out);
}

bool spec_equivalent(const NucaSpec& raw_a, const NucaSpec& raw_b) {
  NucaSpec a = validate_spec(raw_a);
  NucaSpec b = validate_spec(raw_b);
  if (a.p != b.p || a.k != b.k || a.d != b.d) return false;
  if (a.sparse.has_value() != b.sparse.has_value()) return false;
  if (!a.fully_linear() || !b.fully_linear())
    throw SpecError("spec_equivalent compares linear specs only");

  if (base_symbol(a) != base_symbol(b)) return false;

  if (a.sparse) {
    const auto& sa = *a.sparse;
    const auto& sb = *b.sparse;
    if (sa.placement != sb.placement || sa.degree != sb.degree ||
        sa.clusters.size() != sb.clusters.size())
      return false;
    // Structural comparison after normalization; memories already agree.
  }

  SiteList cells = site_union(a.perturbation_support(), b.perturbation_support());
  SiteList mem = site_union(a.memory, b.memory);
  for (const auto& g : cells) {
    LinearRule ra = local_rule_at(a, g).linear();
    LinearRule rb = local_rule_at(b, g).linear();
    LocalRule la = realign_rule(LocalRule{ra}, a.memory, mem, a.p, a.k);
    LocalRule lb = realign_rule(LocalRule{rb}, b.memory, mem, b.p, b.k);
    if (!(la.linear().coeffs == lb.linear().coeffs)) return false;
  }
  return true;
}

}  // namespace nuca
