#include "nuca/nuca_decide.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <tuple>

#include "nuca/induced.hpp"
#include "nuca/kernel_oracle.hpp"

namespace nuca {

namespace {

constexpr std::uint64_t kSampleSeed = 0x5eedULL;
constexpr std::uint32_t kSamples = 4;
constexpr std::int32_t kSampleRadius = 2;
constexpr std::uint64_t kExactCheckPowerLimit = 64;  // power specs beyond this: sample only

NucaSpec identity_like(const NucaSpec& spec) {
  NucaSpec id;
  id.p = spec.p;
  id.k = spec.k;
  id.d = spec.d;
  id.memory = {origin(spec.d)};
  id.base.coeffs = {Mat::identity(spec.k, spec.p)};
  return validate_spec(id);
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// sigma^a and sigma^b agree as global maps, checked exactly through the
// power-spec representation when affordable.
bool exact_power_agreement(const NucaSpec& spec, std::uint64_t a, std::uint64_t b) {
  NucaSpec pa = power_spec(spec, a);
  NucaSpec pb = power_spec(spec, b);
  return spec_equivalent(pa, pb);
}

bool can_check_exactly(const NucaSpec& spec, std::uint64_t max_power) {
  return spec.fully_linear() && !spec.sparse && max_power >= 1 &&
         max_power <= kExactCheckPowerLimit;
}

void sample_verify(const NucaSpec& spec, std::uint64_t skip, std::uint64_t extra,
                   bool expect_zero, const char* what) {
  std::mt19937_64 rng(kSampleSeed + 31 * skip + extra);
  for (std::uint32_t i = 0; i < kSamples; ++i) {
    PatternConfig x = random_config(spec, kSampleRadius, rng);
    PatternConfig y = apply_steps(spec, x, skip);
    PatternConfig z = apply_steps(spec, y, extra);
    bool ok = expect_zero ? z.is_zero() : (z == y);
    if (!ok) throw ReductionError(std::string("certificate re-verification failed: ") + what);
  }
}

// Certificate checks.  "Exact" goes through power specs; sampling is the
// fallback for large exponents or table rules.
void verify_nilpotent_cert(const NucaSpec& spec, std::uint64_t e, DecisionReport& rep) {
  bool exact = can_check_exactly(spec, e);
  if (exact) {
    NucaSpec pe = power_spec(spec, e);
    if (!base_symbol(pe).is_zero() || !pe.perturbations.empty())
      throw ReductionError("certificate re-verification failed: power is not the zero map");
  }
  sample_verify(spec, e, 0, true, "nilpotent exponent");
  rep.diagnostics["certificate-check"] = exact ? "exact" : "sampled";
}

void verify_periodic_cert(const NucaSpec& spec, std::uint64_t n, DecisionReport& rep) {
  bool exact = can_check_exactly(spec, n);
  if (exact && !spec_equivalent(power_spec(spec, n), identity_like(spec)))
    throw ReductionError("certificate re-verification failed: power is not the identity");
  std::mt19937_64 rng(kSampleSeed + n);
  for (std::uint32_t i = 0; i < kSamples; ++i) {
    PatternConfig x = random_config(spec, kSampleRadius, rng);
    if (apply_steps(spec, x, n) != x)
      throw ReductionError("certificate re-verification failed: period");
  }
  rep.diagnostics["certificate-check"] = exact ? "exact" : "sampled";
}

bool verify_eventual_cert(const NucaSpec& spec, std::uint64_t m, std::uint64_t n,
                          DecisionReport& rep, bool throw_on_failure) {
  bool exact = can_check_exactly(spec, m + n) && m >= 1;
  if (exact && !exact_power_agreement(spec, m + n, m)) {
    if (throw_on_failure)
      throw ReductionError("certificate re-verification failed: eventual powers differ");
    return false;
  }
  try {
    sample_verify(spec, m, n, false, "eventual period");
  } catch (const ReductionError&) {
    if (throw_on_failure) throw;
    return false;
  }
  rep.diagnostics["certificate-check"] = exact ? "exact" : "sampled";
  return true;
}

// Exact eventual certificate by iterating power specs until two coincide.
std::optional<std::pair<std::uint64_t, std::uint64_t>> exact_power_certificate(
    const NucaSpec& spec, std::uint64_t cap) {
  std::vector<NucaSpec> powers;  // powers[j] = spec of sigma^(j+1)
  for (std::uint64_t j = 1; j <= cap; ++j) {
    NucaSpec pj = power_spec(spec, j);
    for (std::uint64_t a = 0; a + 1 < j; ++a)
      if (spec_equivalent(powers[a], pj)) return std::make_pair(a + 1, j - (a + 1));
    powers.push_back(std::move(pj));
  }
  return std::nullopt;
}

Mat select_columns(const Mat& m, const std::vector<std::size_t>& cols, std::uint32_t k) {
  Mat out(m.rows(), cols.size() * k, m.modulus());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t i = 0; i < cols.size(); ++i)
      for (std::uint32_t c = 0; c < k; ++c) out.set(r, i * k + c, m.at(r, cols[i] * k + c));
  return out;
}

}  // namespace

PhiReduction reduce_phi(const NucaSpec& raw, PhiMode mode, std::uint64_t n0) {
  NucaSpec spec = validate_spec(raw);
  if (spec.sparse) throw SpecError("reduce_phi applies to plain specs; use decide_sparse");
  if (n0 < 1) throw ReductionError("reduction needs n0 >= 1");

  PhiReduction red;
  red.mode = mode;
  red.n0 = n0;

  // Far-rule check, part 1: the n0-th base power must be trivial so that
  // cells far from the perturbations do nothing / copy / project.
  SymbolMatrix sn = base_symbol(spec).pow(n0);
  bool symbol_ok = mode == PhiMode::nilpotent   ? sn.is_zero()
                   : mode == PhiMode::periodic  ? sn.is_identity()
                                                : (sn * sn == sn);
  if (!symbol_ok)
    throw ReductionError("reduction-precondition-violated: base power is not trivial");

  red.t = power_spec(spec, n0);
  red.big_memory = red.t.memory;

  SiteList e = spec.perturbation_support();
  if (e.empty()) {
    red.degenerate = true;
    red.far_rules_checked = true;
    return red;
  }

  const std::uint32_t k = spec.k;
  SiteList en = site_sum(e, red.big_memory);
  SiteList en2 = site_sum(en, red.big_memory);
  red.window = (mode == PhiMode::nilpotent) ? en : en2;

  // Far-rule check, part 2: outside EN the composed rules must coincide with
  // the pure base power; probe the band one original memory-width out.
  {
    LinearRule pure = rule_from_symbol(sn, red.t.memory);
    for (const auto& g : red.t.perturbation_support())
      if (!site_contains(en, g))
        throw ReductionError("reduction-precondition-violated: composed perturbation at " +
                             point_to_string(g) + " escapes the window");
    for (const auto& g : site_difference(site_sum(en, spec.memory), en))
      if (!rules_equal(red.t, local_rule_at(red.t, g), LocalRule{pure}))
        throw ReductionError("reduction-precondition-violated: far rule at " + point_to_string(g));
  }
  red.far_rules_checked = true;

  InducedMap inner(red.t, en);  // in_sites = EN + N (= EN^2 in the wide modes)

  if (red.t.fully_linear()) {
    if (mode == PhiMode::nilpotent) {
      // phi(w) = sigma_t(w extended by zero) restricted to EN.
      std::vector<std::size_t> cols;
      for (const auto& g : en) cols.push_back(site_index(inner.in_sites(), g));
      Mat ambient = select_columns(inner.matrix(), cols, k);
      Subspace carrier = image_basis(inner.matrix());
      red.phi = FiniteEndo::linear(std::move(carrier), ambient);
      return red;
    }
    // Wide modes: recompute EN from the window, keep the outer ring.
    if (inner.in_sites() != en2)
      throw ReductionError("window bookkeeping mismatch; reduction bug");
    Mat ambient(k * en2.size(), k * en2.size(), spec.p);
    for (std::size_t gi = 0; gi < en.size(); ++gi) {
      std::size_t row0 = site_index(en2, en[gi]) * k;
      for (std::uint32_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < ambient.cols(); ++c)
          ambient.set(row0 + r, c, inner.matrix().at(gi * k + r, c));
    }
    for (const auto& g : site_difference(en2, en)) {
      std::size_t i = site_index(en2, g) * k;
      for (std::uint32_t r = 0; r < k; ++r) ambient.set(i + r, i + r, 1);
    }
    if (mode == PhiMode::periodic) {
      red.phi = FiniteEndo::linear(Subspace::full(k * en2.size(), spec.p), ambient);
      return red;
    }
    InducedMap wide(red.t, en2);
    Subspace carrier = image_basis(wide.matrix());
    try {
      red.phi = FiniteEndo::linear(std::move(carrier), ambient);
    } catch (const ReductionError&) {
      // The reachable-window space is not invariant under the glued map for
      // this spec; fall back to the full window, which always is.
      red.carrier_widened = true;
      red.phi = FiniteEndo::linear(Subspace::full(k * en2.size(), spec.p), ambient);
    }
    return red;
  }

  // Table rules: enumerate the window patterns and tabulate one t-step.
  const SiteList& win = red.window;
  std::size_t total = pattern_space_size(spec.p, k, win.size());
  std::vector<std::vector<std::uint32_t>> elems(total);
  std::vector<std::size_t> next(total);
  const SiteList& in = inner.in_sites();
  for (std::size_t idx = 0; idx < total; ++idx) {
    auto w = pattern_decode(idx, spec.p, win.size() * k);
    std::vector<std::uint32_t> input(in.size() * k, 0);
    for (std::size_t i = 0; i < win.size(); ++i) {
      std::size_t j = site_index(in, win[i]);
      for (std::uint32_t c = 0; c < k; ++c) input[j * k + c] = w[i * k + c];
    }
    auto out = inner.apply(input);  // values on EN
    std::vector<std::uint32_t> nw(win.size() * k, 0);
    for (std::size_t i = 0; i < win.size(); ++i) {
      if (site_contains(en, win[i])) {
        std::size_t j = site_index(en, win[i]);
        for (std::uint32_t c = 0; c < k; ++c) nw[i * k + c] = out[j * k + c];
      } else {
        for (std::uint32_t c = 0; c < k; ++c) nw[i * k + c] = w[i * k + c];
      }
    }
    next[idx] = pattern_encode(nw, spec.p);
    elems[idx] = std::move(w);
  }
  red.phi = FiniteEndo::table(std::move(elems), std::move(next), 0);
  return red;
}

namespace {

void fill_phi_diagnostics(const PhiReduction& red, const EndoClass& cls, DecisionReport& rep) {
  rep.diagnostics["n0"] = std::to_string(red.n0);
  rep.diagnostics["window-sites"] = std::to_string(red.window.size());
  if (red.degenerate) {
    rep.diagnostics["reduction"] = "degenerate (no perturbations)";
    return;
  }
  rep.diagnostics["carrier"] = red.phi.is_linear() ? "dimension " + std::to_string(red.phi.dim())
                                                   : "patterns " + std::to_string(red.phi.size());
  rep.diagnostics["phi-preperiod"] = std::to_string(cls.preperiod);
  if (cls.period) rep.diagnostics["phi-period"] = std::to_string(*cls.period);
  if (red.carrier_widened) rep.diagnostics["carrier-widened"] = "true";
}

}  // namespace

DecisionReport decide_nilpotent(const NucaSpec& raw) {
  NucaSpec spec = validate_spec(raw);
  if (spec.sparse) return decide_sparse(spec, Property::nilpotent);
  DecisionReport rep;
  rep.property = Property::nilpotent;
  CaVerdict base = ca_nilpotent(base_symbol(spec));
  rep.diagnostics["base-verdict"] = bool_str(base.verdict);
  if (!base.verdict) return rep;

  PhiReduction red = reduce_phi(spec, PhiMode::nilpotent, *base.index);
  EndoClass cls = red.phi.classify();
  fill_phi_diagnostics(red, cls, rep);
  rep.verdict = cls.nilpotent_to_zero;
  if (rep.verdict) {
    std::uint64_t e = red.degenerate ? *base.index : red.n0 * (cls.preperiod + 1);
    verify_nilpotent_cert(spec, e, rep);
    rep.exponent = e;
  }
  return rep;
}

DecisionReport decide_periodic(const NucaSpec& raw) {
  NucaSpec spec = validate_spec(raw);
  if (spec.sparse) return decide_sparse(spec, Property::periodic);
  DecisionReport rep;
  rep.property = Property::periodic;
  CaVerdict base = ca_periodic(base_symbol(spec));
  rep.diagnostics["base-verdict"] = bool_str(base.verdict);
  if (base.repeat)
    rep.diagnostics["base-power-collision"] =
        std::to_string(base.repeat->first) + " = " + std::to_string(base.repeat->second);
  if (!base.verdict) return rep;

  PhiReduction red = reduce_phi(spec, PhiMode::periodic, *base.period);
  EndoClass cls = red.phi.classify();
  fill_phi_diagnostics(red, cls, rep);
  rep.verdict = cls.bijective;
  if (rep.verdict) {
    if (cls.period) {
      std::uint64_t n = red.n0 * *cls.period;
      verify_periodic_cert(spec, n, rep);
      rep.period = n;
    } else {
      rep.diagnostics["certificate"] = "omitted: period search exceeded its cap";
    }
  }
  return rep;
}

namespace {

DecisionReport decide_eventual_impl(const NucaSpec& spec, Property prop) {
  DecisionReport rep;
  rep.property = prop;
  CaVerdict base = ca_eventually_periodic(base_symbol(spec));
  rep.diagnostics["base-verdict"] = bool_str(base.verdict);
  if (!base.verdict) return rep;
  rep.verdict = true;  // finite window dynamics are always eventually periodic

  std::uint64_t m0 = *base.preperiod, nb = *base.period;
  std::uint64_t n0 = nb * ((std::max<std::uint64_t>(m0, 1) + nb - 1) / nb);

  if (spec.perturbations.empty()) {
    std::uint64_t m = std::max<std::uint64_t>(m0, 1), n = nb;
    verify_eventual_cert(spec, m, n, rep, true);
    rep.preperiod = m;
    rep.period = n;
    return rep;
  }

  PhiReduction red;
  try {
    red = reduce_phi(spec, PhiMode::eventual, n0);
  } catch (const ResourceLimit& e) {
    rep.diagnostics["certificate"] = std::string("omitted: ") + e.what();
    return rep;  // verdict is cap-free; only the certificate is lost
  }
  EndoClass cls = red.phi.classify();
  fill_phi_diagnostics(red, cls, rep);
  if (!cls.period) {
    rep.diagnostics["certificate"] = "omitted: period search exceeded its cap";
    return rep;
  }
  std::uint64_t m = red.n0 * (cls.preperiod + 1), n = red.n0 * *cls.period;
  if (!verify_eventual_cert(spec, m, n, rep, false)) {
    // The windowed estimate missed; fall back to the exact power iteration.
    auto exact = exact_power_certificate(spec, 4 * (m + n) + 8);
    if (!exact) throw ReductionError("eventual certificate could not be established");
    std::tie(m, n) = *exact;
    verify_eventual_cert(spec, m, n, rep, true);
    rep.diagnostics["certificate-source"] = "power iteration";
  }
  rep.preperiod = m;
  rep.period = n;
  return rep;
}

}  // namespace

DecisionReport decide_eventually_periodic(const NucaSpec& raw) {
  NucaSpec spec = validate_spec(raw);
  if (spec.sparse) return decide_sparse(spec, Property::eventually_periodic);
  return decide_eventual_impl(spec, Property::eventually_periodic);
}

DecisionReport decide_cayley_hamilton(const NucaSpec& raw) {
  NucaSpec spec = validate_spec(raw);
  if (spec.sparse) return decide_sparse(spec, Property::cayley_hamilton);
  if (!spec.fully_linear())
    throw SpecError("the annihilator property concerns linear rules only");
  DecisionReport rep = decide_eventual_impl(spec, Property::cayley_hamilton);
  if (rep.verdict && rep.preperiod && rep.period)
    rep.diagnostics["annihilator"] =
        "z^" + std::to_string(*rep.preperiod) + "*(z^" + std::to_string(*rep.period) + "-1)";
  return rep;
}

DecisionReport decide_injective(const NucaSpec& raw) {
  NucaSpec spec = validate_spec(raw);
  if (spec.sparse) throw SpecError("injectivity is not decided for sparse specs");
  if (!spec.fully_linear()) throw SpecError("injectivity requires linear rules");
  DecisionReport rep;
  rep.property = Property::injective;

  CaVerdict inv = ca_invertible(base_symbol(spec));
  rep.diagnostics["base-invertible"] = bool_str(inv.verdict);
  if (!inv.verdict) {
    // Look for a finitely supported witness; some kernels have none.
    for (std::int32_t r = 0; r <= 2 && !rep.kernel_witness; ++r)
      rep.kernel_witness = oracle::finite_support_kernel(spec, r);
    if (!rep.kernel_witness) {
      rep.diagnostics["kernel"] = "nonzero, but with no finitely supported member in reach";
      if (spec.d == 1)
        rep.diagnostics["kernel-window-dimension"] =
            std::to_string(oracle::kernel_window_d1(spec, 1).dim());
    }
    return rep;
  }

  SiteList e = spec.perturbation_support();
  if (e.empty()) {
    rep.verdict = true;  // invertible base, nothing else
    rep.kernel_dimension = 0;
    return rep;
  }

  // Any kernel element maps to a configuration supported in E under the base
  // rule, so its own support sits inside D = E + (-N'), N' the inverse memory.
  SiteList np;
  for (const auto& ex : inv.inverse->support()) np.push_back(Point(ex.begin(), ex.end()));
  np.push_back(origin(spec.d));
  SiteList d = site_sum(e, site_negate(sorted_unique(std::move(np))));
  SiteList h = site_sum(d, spec.memory);
  rep.diagnostics["support-bound-sites"] = std::to_string(d.size());

  InducedMap f(spec, h);
  std::vector<std::size_t> cols;
  for (const auto& g : d) cols.push_back(site_index(f.in_sites(), g));
  Subspace ker = rref_kernel(select_columns(f.matrix(), cols, spec.k));
  rep.diagnostics["kernel-dimension-on-window"] = std::to_string(ker.dim());
  if (ker.dim() == 0) {
    rep.verdict = true;
    rep.kernel_dimension = 0;
    return rep;
  }
  PatternConfig w = config_from_window(spec, d, ker.basis().row(0));
  if (!apply_step(spec, w).is_zero())
    throw ReductionError("kernel witness fails re-verification; solver bug");
  rep.kernel_witness = std::move(w);
  return rep;
}

std::optional<NucaSpec> construct_inverse(const NucaSpec& raw, std::uint32_t max_radius) {
  NucaSpec spec = validate_spec(raw);
  DecisionReport inj = decide_injective(spec);
  if (!inj.verdict) throw SpecError("no inverse: the automaton is not injective");

  SymbolMatrix binv = *ca_invertible(base_symbol(spec)).inverse;
  std::vector<Point> np;
  for (const auto& ex : binv.support()) np.push_back(Point(ex.begin(), ex.end()));
  np.push_back(origin(spec.d));
  SiteList n0 = sorted_unique(std::move(np));
  SiteList e = spec.perturbation_support();

  const std::uint32_t k = spec.k, p = spec.p;
  for (std::uint32_t r = 0; r <= max_radius; ++r) {
    SiteList nt = site_sum(n0, site_power(spec.memory, r, spec.d));
    NucaSpec t;
    t.p = p;
    t.k = k;
    t.d = spec.d;
    t.memory = nt;
    t.base = rule_from_symbol(binv, nt);
    if (e.empty()) return validate_spec(t);

    SiteList f = site_sum(e, site_negate(nt));
    SiteList u = site_sum(nt, spec.memory);  // relative read offsets of t∘s at one cell
    bool all_solved = true;
    for (const auto& g : f) {
      // sum over nu of B_nu * A^(g+nu)_(delta-nu) = [delta = 0] * I, solved
      // in transposed form so the unknown blocks stack as matrix columns.
      Mat c(u.size() * k, nt.size() * k, p);
      Mat rhs(u.size() * k, k, p);
      for (std::size_t ui = 0; ui < u.size(); ++ui) {
        for (std::size_t ni = 0; ni < nt.size(); ++ni) {
          Point mu = point_sub(u[ui], nt[ni]);
          if (!site_contains(spec.memory, mu)) continue;
          LinearRule rule = local_rule_at(spec, point_add(g, nt[ni])).linear();
          const Mat& a = rule.coeffs[site_index(spec.memory, mu)];
          for (std::uint32_t row = 0; row < k; ++row)
            for (std::uint32_t col = 0; col < k; ++col)
              c.set(ui * k + row, ni * k + col,
                    add_mod(c.at(ui * k + row, ni * k + col), a.at(col, row), p));
        }
        if (u[ui] == origin(spec.d))
          for (std::uint32_t row = 0; row < k; ++row) rhs.set(ui * k + row, row, 1);
      }
      auto x = solve_linear(c, rhs);
      if (!x) {
        all_solved = false;
        break;
      }
      std::map<Point, Mat, PointLess> blocks;
      for (std::size_t ni = 0; ni < nt.size(); ++ni) {
        Mat b(k, k, p);
        for (std::uint32_t row = 0; row < k; ++row)
          for (std::uint32_t col = 0; col < k; ++col) b.set(row, col, x->at(ni * k + col, row));
        blocks.emplace(nt[ni], std::move(b));
      }
      t.perturbations.emplace(g, LocalRule{linear_rule_for(nt, blocks, k, p)});
    }
    if (!all_solved) continue;

    NucaSpec result = validate_spec(t);
    NucaSpec id = identity_like(spec);
    if (!spec_equivalent(compose_specs(result, spec), id))
      throw ReductionError("inverse failed the left composition check; solver bug");
    if (!spec_equivalent(compose_specs(spec, result), id))
      throw ReductionError("inverse failed the right composition check");
    return result;
  }
  return std::nullopt;
}

DecisionReport decide_post_surjective(const NucaSpec& raw) {
  NucaSpec spec = validate_spec(raw);
  if (spec.sparse) throw SpecError("post-surjectivity is not decided for sparse specs");
  if (!spec.fully_linear()) throw SpecError("post-surjectivity requires linear rules");
  NucaSpec dual = dual_spec(spec);
  DecisionReport inner = decide_injective(dual);
  DecisionReport rep;
  rep.property = Property::post_surjective;
  rep.verdict = inner.verdict;
  rep.kernel_dimension = inner.kernel_dimension;
  for (const auto& [key, val] : inner.diagnostics) rep.diagnostics["dual-" + key] = val;
  if (inner.kernel_witness) {
    rep.diagnostics["witness-lives-in-dual"] = "true";
    rep.kernel_witness = inner.kernel_witness;
  }
  return rep;
}

namespace {

// Sparse helpers: a placement's exclusion footprint is its cell support
// fattened by three big-memory widths.
SiteList placement_footprint(const ClusterType& cl, const Point& anchor, const SiteList& n3) {
  std::vector<Point> cells;
  for (const auto& [c, rule] : cl.cells) cells.push_back(point_add(anchor, c));
  return site_sum(sorted_unique(std::move(cells)), n3);
}

bool site_lists_intersect(const SiteList& a, const SiteList& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  PointLess less;
  while (ia != a.end() && ib != b.end()) {
    if (less(*ia, *ib))
      ++ia;
    else if (less(*ib, *ia))
      ++ib;
    else
      return true;
  }
  return false;
}

struct SparsePlacement {
  std::size_t cluster;
  Point anchor;
  SiteList footprint;
};

std::int64_t generated_position(const SparseInfo& sp, std::uint64_t n) {
  if (sp.placement == Placement::polynomial) {
    std::int64_t pos = 1;
    for (std::uint32_t i = 0; i < sp.degree; ++i) pos *= static_cast<std::int64_t>(n);
    return pos;
  }
  return std::int64_t(1) << n;
}

}  // namespace

DecisionReport decide_sparse(const NucaSpec& raw, Property prop) {
  NucaSpec spec = validate_spec(raw);
  if (!spec.sparse) throw SpecError("decide_sparse needs a sparse spec");
  if (prop == Property::injective || prop == Property::post_surjective)
    throw SpecError("sparse specs: " + property_name(prop) + " is not supported");
  const SparseInfo& sp = *spec.sparse;

  DecisionReport rep;
  rep.property = prop;

  // Base analysis fixes the power n0 and the disjointness margin; the base's
  // own certificate numbers seed the combined certificate.
  SymbolMatrix s = base_symbol(spec);
  std::uint64_t n0 = 1;
  std::uint64_t base_pre = 0, base_per = 1;
  bool base_ok = false;
  switch (prop) {
    case Property::nilpotent: {
      CaVerdict b = ca_nilpotent(s);
      base_ok = b.verdict;
      if (base_ok) n0 = *b.index;
      break;
    }
    case Property::periodic: {
      CaVerdict b = ca_periodic(s);
      base_ok = b.verdict;
      if (base_ok) n0 = base_per = *b.period;
      break;
    }
    default: {
      CaVerdict b = ca_eventually_periodic(s);
      base_ok = b.verdict;
      if (base_ok) {
        std::uint64_t m0 = *b.preperiod, nb = *b.period;
        n0 = nb * ((std::max<std::uint64_t>(m0, 1) + nb - 1) / nb);
        base_pre = std::max<std::uint64_t>(m0, 1);
        base_per = nb;
      }
      break;
    }
  }
  rep.diagnostics["base-verdict"] = bool_str(base_ok);
  if (!base_ok) return rep;

  SiteList n = site_power(spec.memory, n0, spec.d);
  SiteList n3 = site_sum(site_sum(n, n), n);

  // Materialize placements: explicit anchors, plus generated ones until the
  // gaps exceed the footprint diameter (later copies are then isolated and
  // behave like the representative type).
  std::vector<SparsePlacement> placements;
  std::vector<bool> has_tail(sp.clusters.size(), false);
  for (std::size_t ci = 0; ci < sp.clusters.size(); ++ci) {
    const ClusterType& cl = sp.clusters[ci];
    for (const auto& a : cl.anchors)
      placements.push_back({ci, a, placement_footprint(cl, a, n3)});
    if (sp.placement == Placement::promise) {
      has_tail[ci] = cl.infinite || cl.count > cl.anchors.size();
      continue;
    }
    // Generated placements march along axis 0.
    std::int64_t lo = 0, hi = 0;
    for (const auto& [c, rule] : cl.cells) {
      lo = std::min<std::int64_t>(lo, c[0]);
      hi = std::max<std::int64_t>(hi, c[0]);
    }
    std::int64_t diam = (hi - lo) + 2 * (n3.empty() ? 0 : (n3.back()[0] - n3.front()[0]));
    std::uint64_t count = cl.infinite ? UINT64_MAX : cl.count;
    for (std::uint64_t i = 1; i <= count; ++i) {
      if (i > 40) throw ResourceLimit("sparse placement horizon too deep");
      std::int64_t pos = generated_position(sp, i);
      if (pos > std::numeric_limits<std::int32_t>::max())
        throw ResourceLimit("sparse placement position overflow");
      std::int64_t next_gap =
          (i < count) ? generated_position(sp, i + 1) - pos : std::numeric_limits<std::int64_t>::max();
      Point a = origin(spec.d);
      a[0] = static_cast<std::int32_t>(pos);
      placements.push_back({ci, a, placement_footprint(cl, a, n3)});
      if (next_gap > diam && pos > diam) {
        has_tail[ci] = i < count;
        break;
      }
    }
  }

  // Union-find over footprint overlaps; cell-level conflicts are fatal.
  std::vector<std::size_t> parent(placements.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < placements.size(); ++i)
    for (std::size_t j = i + 1; j < placements.size(); ++j)
      if (site_lists_intersect(placements[i].footprint, placements[j].footprint))
        parent[find(i)] = find(j);

  std::map<std::size_t, std::map<Point, LocalRule, PointLess>> groups;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    auto& cells = groups[find(i)];
    const ClusterType& cl = sp.clusters[placements[i].cluster];
    for (const auto& [c, rule] : cl.cells) {
      Point abs = point_add(placements[i].anchor, c);
      auto [it, fresh] = cells.emplace(abs, rule);
      if (!fresh && !rules_equal(spec, it->second, rule))
        throw SpecError("sparse placements conflict at cell " + point_to_string(abs) +
                        "; disjointness violated");
    }
  }

  // One plain sub-spec per merged group, plus one isolated representative for
  // every cluster type with placements beyond the materialized horizon.
  std::vector<NucaSpec> parts;
  for (const auto& [root, cells] : groups) {
    NucaSpec part;
    part.p = spec.p;
    part.k = spec.k;
    part.d = spec.d;
    part.memory = spec.memory;
    part.base = spec.base;
    for (const auto& [g, rule] : cells) part.perturbations.emplace(g, rule);
    parts.push_back(validate_spec(part));
  }
  for (std::size_t ci = 0; ci < sp.clusters.size(); ++ci) {
    if (!has_tail[ci]) continue;
    NucaSpec part;
    part.p = spec.p;
    part.k = spec.k;
    part.d = spec.d;
    part.memory = spec.memory;
    part.base = spec.base;
    for (const auto& [c, rule] : sp.clusters[ci].cells) part.perturbations.emplace(c, rule);
    parts.push_back(validate_spec(part));
  }
  rep.diagnostics["cluster-groups"] = std::to_string(parts.size());

  bool all = true;
  std::uint64_t max_expo = n0, max_pre = base_pre, lcm_per = base_per;
  bool have_cert = true;
  for (const auto& part : parts) {
    DecisionReport sub = decide_property(part, prop);
    all = all && sub.verdict;
    if (!sub.verdict) continue;
    if (sub.exponent) max_expo = std::max(max_expo, *sub.exponent);
    if (sub.preperiod) max_pre = std::max(max_pre, *sub.preperiod);
    if (sub.period)
      lcm_per = lcm_capped(lcm_per, *sub.period, 1ull << 40);
    else if (prop != Property::nilpotent)
      have_cert = false;
  }
  rep.verdict = all;
  if (!all) return rep;

  switch (prop) {
    case Property::nilpotent:
      rep.exponent = max_expo;
      break;
    case Property::periodic:
      if (have_cert) rep.period = lcm_per;
      break;
    default:
      if (have_cert) {
        rep.preperiod = std::max<std::uint64_t>(max_pre, 1);
        rep.period = lcm_per;
        if (prop == Property::cayley_hamilton)
          rep.diagnostics["annihilator"] =
              "z^" + std::to_string(*rep.preperiod) + "*(z^" + std::to_string(*rep.period) + "-1)";
      }
      break;
  }

  // Dynamic spot-check whenever the spec can be evaluated pointwise; a
  // sparseness promise with unlisted placements cannot be.
  bool evaluable = sp.placement != Placement::promise ||
                   std::none_of(has_tail.begin(), has_tail.end(), [](bool b) { return b; });
  if (evaluable) {
    std::mt19937_64 rng(kSampleSeed);
    for (std::uint32_t i = 0; i < 2; ++i) {
      PatternConfig x = random_config(spec, 1, rng);
      if (prop == Property::nilpotent && rep.exponent) {
        if (!apply_steps(spec, x, *rep.exponent).is_zero())
          throw ReductionError("sparse certificate re-verification failed");
      } else if (prop == Property::periodic && rep.period) {
        if (apply_steps(spec, x, *rep.period) != x)
          throw ReductionError("sparse certificate re-verification failed");
      } else if (rep.preperiod && rep.period) {
        PatternConfig y = apply_steps(spec, x, *rep.preperiod);
        if (apply_steps(spec, y, *rep.period) != y)
          throw ReductionError("sparse certificate re-verification failed");
      }
    }
    rep.diagnostics["certificate-check"] = "sampled";
  } else {
    rep.diagnostics["certificate-check"] = "window-level only (sparseness promise)";
  }
  return rep;
}

DecisionReport decide_property(const NucaSpec& spec, Property prop) {
  switch (prop) {
    case Property::nilpotent: return decide_nilpotent(spec);
    case Property::periodic: return decide_periodic(spec);
    case Property::eventually_periodic: return decide_eventually_periodic(spec);
    case Property::cayley_hamilton: return decide_cayley_hamilton(spec);
    case Property::injective: return decide_injective(spec);
    case Property::post_surjective: return decide_post_surjective(spec);
  }
  throw SpecError("unknown property");
}

}  // namespace nuca
