#include "nuca/kernel_oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "nuca/endo.hpp"
#include "nuca/induced.hpp"

namespace nuca::oracle {

namespace {

NucaSpec base_only(const NucaSpec& spec) {
  NucaSpec b = spec;
  b.perturbations.clear();
  b.sparse.reset();
  return b;
}

std::string config_key(const PatternConfig& x) {
  std::ostringstream os;
  for (const auto& [g, v] : x.support()) {
    os << point_to_string(g) << ':';
    for (auto c : v) os << c << ',';
  }
  return os.str();
}

// The k impulse responses at the origin determine a shift-commuting linear
// map completely, so iterating them iterates the base automaton.
struct ImpulseState {
  std::vector<PatternConfig> resp;

  static ImpulseState initial(const NucaSpec& spec) {
    ImpulseState s;
    for (std::uint32_t c = 0; c < spec.k; ++c)
      s.resp.push_back(impulse_config(spec, origin(spec.d), c));
    return s;
  }
  void advance(const NucaSpec& base) {
    for (auto& r : resp) r = apply_step(base, r);
  }
  bool operator==(const ImpulseState& o) const { return resp == o.resp; }
  std::string key() const {
    std::string s;
    for (const auto& r : resp) {
      s += config_key(r);
      s += '|';
    }
    return s;
  }
  bool all_zero() const {
    for (const auto& r : resp)
      if (!r.is_zero()) return false;
    return true;
  }
};

void add_scaled(PatternConfig& acc, const PatternConfig& x, std::uint32_t c, std::uint32_t p) {
  if (c == 0) return;
  for (const auto& [g, v] : x.support()) {
    auto cur = acc.at(g);
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = add_mod(cur[i], mul_mod(c, v[i], p), p);
    acc.set(g, cur);
  }
}

// All lattice points with coordinates in [-radius, radius].
SiteList box_sites(std::uint32_t d, std::int32_t radius) {
  std::vector<Point> pts;
  Point cur(d, -radius);
  while (true) {
    pts.push_back(cur);
    std::size_t i = 0;
    while (i < d && cur[i] == radius) cur[i++] = -radius;
    if (i == d) break;
    ++cur[i];
  }
  return sorted_unique(std::move(pts));
}

}  // namespace

BaseProbe probe_base_nilpotent(const NucaSpec& raw) {
  NucaSpec spec = validate_spec(raw);
  NucaSpec base = base_only(spec);
  BaseProbe out;
  ImpulseState st = ImpulseState::initial(spec);
  for (std::uint64_t n = 1; n <= spec.k; ++n) {
    st.advance(base);
    if (st.all_zero()) {
      out.verdict = true;
      out.index = n;
      return out;
    }
  }
  // A nilpotent k-dimensional rule must die within k steps.
  out.verdict = false;
  return out;
}

BaseProbe probe_base_periodic(const NucaSpec& raw, std::uint64_t cap) {
  NucaSpec spec = validate_spec(raw);
  NucaSpec base = base_only(spec);
  BaseProbe out;
  ImpulseState start = ImpulseState::initial(spec);
  ImpulseState st = start;
  std::map<std::string, std::uint64_t> seen;
  for (std::uint64_t n = 1; n <= cap; ++n) {
    st.advance(base);
    if (st == start) {
      out.verdict = true;
      out.period = n;
      out.preperiod = 0;
      return out;
    }
    auto [it, fresh] = seen.emplace(st.key(), n);
    if (!fresh) {
      out.verdict = false;  // powers repeat without passing the identity
      out.preperiod = it->second;
      out.period = n - it->second;
      return out;
    }
  }
  return out;  // undecided within cap
}

BaseProbe probe_base_eventually_periodic(const NucaSpec& raw, std::uint64_t cap) {
  NucaSpec spec = validate_spec(raw);
  NucaSpec base = base_only(spec);
  BaseProbe out;
  ImpulseState start = ImpulseState::initial(spec);
  ImpulseState st = start;
  std::map<std::string, std::uint64_t> seen;
  for (std::uint64_t n = 1; n <= cap; ++n) {
    st.advance(base);
    if (st == start) {
      out.verdict = true;
      out.preperiod = 0;
      out.period = n;
      return out;
    }
    auto [it, fresh] = seen.emplace(st.key(), n);
    if (!fresh) {
      // First collision a = it->second < n; the identity was never passed,
      // so the preperiod is a itself.
      out.verdict = true;
      out.preperiod = it->second;
      out.period = n - it->second;
      return out;
    }
  }
  return out;
}

bool oracle_power_agreement(const NucaSpec& raw, const NucaSpec& power, std::uint64_t n,
                            std::uint32_t trials, std::int32_t radius, std::uint64_t seed) {
  NucaSpec spec = validate_spec(raw);
  NucaSpec pw = validate_spec(power);
  if (spec.p != pw.p || spec.k != pw.k || spec.d != pw.d)
    throw SpecError("power-agreement oracle: mismatched specs");
  std::mt19937_64 rng(seed);
  for (std::uint32_t i = 0; i < trials; ++i) {
    PatternConfig x = random_config(spec, radius, rng);
    if (apply_steps(spec, x, n) != apply_step(pw, x)) return false;
  }
  return true;
}

TrappedReport oracle_trapped_enumeration(const NucaSpec& raw, Property property,
                                         std::size_t carrier_cap) {
  NucaSpec spec = validate_spec(raw);
  if (spec.sparse) throw SpecError("trapped enumeration runs on plain specs");
  if (property == Property::cayley_hamilton) property = Property::eventually_periodic;
  if (property != Property::nilpotent && property != Property::periodic &&
      property != Property::eventually_periodic)
    throw SpecError("trapped enumeration: unsupported property");

  TrappedReport rep;
  std::uint64_t n0 = 1;
  if (property == Property::nilpotent) {
    BaseProbe bp = probe_base_nilpotent(spec);
    if (!*bp.verdict) return rep;
    n0 = *bp.index;
  } else if (property == Property::periodic) {
    BaseProbe bp = probe_base_periodic(spec);
    if (!bp.verdict) throw ResourceLimit("base probe undecided within its cap");
    if (!*bp.verdict) return rep;
    n0 = *bp.period;
  } else {
    BaseProbe bp = probe_base_eventually_periodic(spec);
    if (!bp.verdict) throw ResourceLimit("base probe undecided within its cap");
    if (!*bp.verdict) return rep;
    std::uint64_t m0 = *bp.preperiod, nb = *bp.period;
    n0 = nb * ((std::max<std::uint64_t>(m0, 1) + nb - 1) / nb);
  }

  SiteList e = spec.perturbation_support();
  if (e.empty()) {
    rep.verdict = true;
    rep.preperiod = 0;
    rep.period = 1;
    return rep;
  }
  SiteList n_mem = site_power(spec.memory, n0, spec.d);
  SiteList en = site_sum(e, n_mem);
  SiteList window = (property == Property::nilpotent) ? en : site_sum(en, n_mem);

  std::size_t total = 1;
  for (std::size_t i = 0; i < window.size() * spec.k; ++i) {
    if (total > carrier_cap / spec.p) throw ResourceLimit("trapped carrier too large");
    total *= spec.p;
  }

  auto one_step = [&](const PatternConfig& x) { return apply_steps(spec, x, n0); };

  if (property == Property::nilpotent) {
    std::map<std::string, bool> dies;            // key -> orbit reaches zero
    std::map<std::string, std::uint64_t> depth;  // steps to zero, for stats
    std::uint64_t max_depth = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
      PatternConfig x = config_from_window(spec, window, pattern_decode(idx, spec.p, window.size() * spec.k));
      std::vector<std::pair<std::string, PatternConfig>> path;
      std::set<std::string> on_path;
      bool ok;
      std::uint64_t base_depth = 0;
      while (true) {
        if (x.is_zero()) {
          ok = true;
          break;
        }
        std::string key = config_key(x);
        auto it = dies.find(key);
        if (it != dies.end()) {
          ok = it->second;
          if (ok) base_depth = depth[key];
          break;
        }
        if (on_path.count(key)) {
          ok = false;  // nonzero cycle: the orbit never dies
          break;
        }
        on_path.insert(key);
        path.emplace_back(key, x);
        x = one_step(x);
      }
      if (!ok) return rep;  // verdict false
      for (std::size_t i = path.size(); i-- > 0;) {
        ++base_depth;
        dies[path[i].first] = true;
        depth[path[i].first] = base_depth;
        if (base_depth > max_depth) max_depth = base_depth;
      }
    }
    rep.verdict = true;
    rep.preperiod = max_depth;
    rep.period = 1;
    return rep;
  }

  if (property == Property::periodic) {
    std::vector<std::size_t> next(total);
    std::set<std::string> images;
    for (std::size_t idx = 0; idx < total; ++idx) {
      PatternConfig x = config_from_window(spec, window, pattern_decode(idx, spec.p, window.size() * spec.k));
      PatternConfig y = one_step(x);
      for (const auto& [g, v] : y.support())
        if (!site_contains(window, g))
          throw ReductionError("trapped orbit escaped the window; far rules are not trivial");
      if (!images.insert(config_key(y)).second) return rep;  // collision: not injective
      next[idx] = pattern_encode(window_values(y, window), spec.p);
    }
    rep.verdict = true;
    rep.preperiod = 0;
    // Permutation order = lcm of cycle lengths.
    std::vector<bool> visited(total, false);
    std::uint64_t per = 1;
    bool per_ok = true;
    for (std::size_t s = 0; s < total && per_ok; ++s) {
      if (visited[s]) continue;
      std::uint64_t len = 0;
      std::size_t u = s;
      do {
        visited[u] = true;
        u = next[u];
        ++len;
      } while (u != s);
      try {
        per = lcm_capped(per, len, 1ull << 40);
      } catch (const ResourceLimit&) {
        per_ok = false;
      }
    }
    if (per_ok) rep.period = per;
    return rep;
  }

  // Eventually periodic: iterate the unconstrained dynamics of every window
  // seed until its orbit repeats (the support may leave the window).
  rep.verdict = true;
  std::uint64_t max_pre = 0, lcm_per = 1;
  for (std::size_t idx = 0; idx < total; ++idx) {
    PatternConfig x = config_from_window(spec, window, pattern_decode(idx, spec.p, window.size() * spec.k));
    std::map<std::string, std::uint64_t> seen;
    std::uint64_t step = 0;
    while (true) {
      auto [it, fresh] = seen.emplace(config_key(x), step);
      if (!fresh) {
        max_pre = std::max(max_pre, it->second);
        lcm_per = lcm_capped(lcm_per, step - it->second, 1ull << 40);
        break;
      }
      if (++step > 4096) throw ResourceLimit("trapped orbit exceeded the step cap");
      x = one_step(x);
    }
  }
  rep.preperiod = max_pre;
  rep.period = lcm_per;
  return rep;
}

std::optional<PatternConfig> finite_support_kernel(const NucaSpec& raw, std::int32_t radius) {
  NucaSpec spec = validate_spec(raw);
  if (!spec.fully_linear()) throw SpecError("kernel search requires linear rules");
  SiteList box = box_sites(spec.d, radius);
  SiteList h = site_sum(box, spec.memory);
  InducedMap f(spec, h);
  Mat m = f.matrix();
  Mat sub(m.rows(), box.size() * spec.k, spec.p);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t i = 0; i < box.size(); ++i) {
      std::size_t c0 = site_index(f.in_sites(), box[i]) * spec.k;
      for (std::uint32_t c = 0; c < spec.k; ++c) sub.set(r, i * spec.k + c, m.at(r, c0 + c));
    }
  Subspace ker = rref_kernel(sub);
  if (ker.dim() == 0) return std::nullopt;
  PatternConfig w = config_from_window(spec, box, ker.basis().row(0));
  if (!apply_step(spec, w).is_zero())
    throw ReductionError("kernel witness fails direct verification");
  return w;
}

TailSubspace tail_subspace(const NucaSpec& raw, bool left) {
  NucaSpec spec = validate_spec(raw);
  if (spec.d != 1) throw SpecError("tail subspaces are a d = 1 construction");
  const std::uint32_t k = spec.k, p = spec.p;

  // Trimmed span of the base rule.
  std::int32_t lo = 0, hi = 0;
  bool any = false;
  for (std::size_t i = 0; i < spec.memory.size(); ++i) {
    if (spec.base.coeffs[i].is_zero()) continue;
    std::int32_t m = spec.memory[i][0];
    if (!any) {
      lo = hi = m;
      any = true;
    } else {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  }
  if (!any)  // zero rule: every configuration is in the kernel
    return TailSubspace{left, 1, Subspace::full(k, p)};

  const std::uint32_t s = static_cast<std::uint32_t>(hi - lo);
  const std::uint32_t w = std::max<std::uint32_t>(s, 1);

  // One peeled equation on the extended (w+1)-site strip: positions of the
  // read sites depend on which end carries the boundary.
  Mat eq(k, (w + 1) * k, p);
  for (std::size_t i = 0; i < spec.memory.size(); ++i) {
    const Mat& a = spec.base.coeffs[i];
    if (a.is_zero()) continue;
    std::int32_t m = spec.memory[i][0];
    std::size_t posn = left ? static_cast<std::size_t>(static_cast<std::int32_t>(w) - hi + m)
                            : static_cast<std::size_t>(m - lo);
    for (std::uint32_t r = 0; r < k; ++r)
      for (std::uint32_t c = 0; c < k; ++c)
        eq.set(r, posn * k + c, add_mod(eq.at(r, posn * k + c), a.at(r, c), p));
  }

  Subspace l = Subspace::full(w * k, p);
  for (std::uint32_t round = 0; round <= k * w + 1; ++round) {
    // Constrain the strip: the peeled equation plus membership of the inner
    // window (old boundary) in the current space.
    Mat ann = l.annihilator();
    Mat cons(eq.rows() + ann.rows(), (w + 1) * k, p);
    for (std::size_t r = 0; r < eq.rows(); ++r)
      for (std::size_t c = 0; c < eq.cols(); ++c) cons.set(r, c, eq.at(r, c));
    std::size_t off = left ? 0 : k;  // inner window position within the strip
    for (std::size_t r = 0; r < ann.rows(); ++r)
      for (std::size_t c = 0; c < ann.cols(); ++c)
        cons.set(eq.rows() + r, off + c, ann.at(r, c));
    Subspace sol = rref_kernel(cons);
    // Project onto the boundary window.
    std::size_t proj_off = left ? k : 0;
    Mat rows(sol.dim(), w * k, p);
    for (std::size_t r = 0; r < sol.dim(); ++r)
      for (std::size_t c = 0; c < w * k; ++c) rows.set(r, c, sol.basis().at(r, proj_off + c));
    Subspace next = Subspace::from_rows(std::move(rows));
    if (next == l) return TailSubspace{left, w, l};
    l = next;
  }
  throw ReductionError("tail subspace chain failed to stabilize; oracle bug");
}

SiteList kernel_window_sites(const NucaSpec& raw, std::int32_t r) {
  NucaSpec spec = validate_spec(raw);
  if (spec.sparse) throw SpecError("kernel windows run on plain specs");
  std::int32_t wmax = 0, e = 0;
  for (const auto& m : spec.memory) wmax = std::max(wmax, std::abs(m[0]));
  for (const auto& pert : spec.perturbations) e = std::max(e, std::abs(pert.first[0]));
  std::int32_t radius = e + 2 * wmax + r;
  SiteList z;
  for (std::int32_t i = -radius; i <= radius; ++i) z.push_back({i});
  return z;
}

Subspace kernel_window_d1(const NucaSpec& raw, std::int32_t r) {
  NucaSpec spec = validate_spec(raw);
  if (spec.d != 1) throw SpecError("the kernel window is a d = 1 construction");
  if (spec.sparse) throw SpecError("kernel windows run on plain specs");
  if (!spec.fully_linear()) throw SpecError("kernel window requires linear rules");
  if (r < 1) throw SpecError("kernel window radius must be >= 1");
  const std::uint32_t k = spec.k, p = spec.p;

  SiteList z = kernel_window_sites(spec, r);
  std::int32_t radius = z.back()[0];
  std::int32_t wmax = 0;
  for (const auto& m : spec.memory) wmax = std::max(wmax, std::abs(m[0]));

  std::vector<Mat> row_blocks;
  // Every kernel equation whose (nonzero-coefficient) reads stay inside the
  // window.  Far rules are trimmed to their actual span, so the interior
  // range meets the tail-covered range without a gap.
  for (std::int32_t h = -radius - wmax; h <= radius + wmax; ++h) {
    LinearRule rule = local_rule_at(spec, {h}).linear();
    bool inside = true;
    for (std::size_t i = 0; i < spec.memory.size() && inside; ++i)
      if (!rule.coeffs[i].is_zero() && std::abs(h + spec.memory[i][0]) > radius) inside = false;
    if (!inside) continue;
    Mat row(k, z.size() * k, p);
    for (std::size_t i = 0; i < spec.memory.size(); ++i) {
      const Mat& a = rule.coeffs[i];
      if (a.is_zero()) continue;
      std::size_t col0 = static_cast<std::size_t>(h + spec.memory[i][0] + radius) * k;
      for (std::uint32_t rr = 0; rr < k; ++rr)
        for (std::uint32_t cc = 0; cc < k; ++cc)
          row.set(rr, col0 + cc, add_mod(row.at(rr, col0 + cc), a.at(rr, cc), p));
    }
    row_blocks.push_back(std::move(row));
  }

  TailSubspace tl = tail_subspace(spec, true);
  TailSubspace tr = tail_subspace(spec, false);
  {
    Mat ann = tl.space.annihilator();  // leftmost sites window
    Mat row(ann.rows(), z.size() * k, p);
    for (std::size_t rr = 0; rr < ann.rows(); ++rr)
      for (std::size_t cc = 0; cc < ann.cols(); ++cc) row.set(rr, cc, ann.at(rr, cc));
    row_blocks.push_back(std::move(row));
  }
  {
    Mat ann = tr.space.annihilator();  // rightmost sites window
    std::size_t off = (z.size() - tr.width) * k;
    Mat row(ann.rows(), z.size() * k, p);
    for (std::size_t rr = 0; rr < ann.rows(); ++rr)
      for (std::size_t cc = 0; cc < ann.cols(); ++cc) row.set(rr, off + cc, ann.at(rr, cc));
    row_blocks.push_back(std::move(row));
  }

  Mat all(0, z.size() * k, p);
  for (const auto& b : row_blocks) all = vstack(all, b);
  return rref_kernel(all);
}

bool oracle_annihilator(const NucaSpec& raw, const std::vector<std::uint32_t>& coeffs,
                        std::uint32_t trials, std::int32_t radius, std::uint64_t seed) {
  NucaSpec spec = validate_spec(raw);
  if (!spec.fully_linear()) throw SpecError("annihilator evaluation requires linear rules");
  if (coeffs.empty()) throw SpecError("empty polynomial");
  std::mt19937_64 rng(seed);
  for (std::uint32_t t = 0; t < trials; ++t) {
    PatternConfig x = random_config(spec, radius, rng);
    PatternConfig acc(spec.p, spec.k, spec.d);
    PatternConfig cur = x;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      add_scaled(acc, cur, coeffs[j] % spec.p, spec.p);
      if (j + 1 < coeffs.size()) cur = apply_step(spec, cur);
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

}  // namespace nuca::oracle
