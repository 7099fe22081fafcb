#include <doctest.h>

#include <random>

#include "nuca/config.hpp"
#include "nuca/endo.hpp"
#include "nuca/induced.hpp"
#include "nuca/spec.hpp"
#include "suite.hpp"

using namespace nuca;
using testsuite::plain_spec;
using testsuite::scalar_block;

namespace {

NucaSpec rule90() {
  return plain_spec(2, 1, 1, {{-1}, {1}},
                    {{{-1}, scalar_block(2, 1)}, {{1}, scalar_block(2, 1)}});
}

PatternConfig random_cfg(const NucaSpec& s, std::mt19937_64& rng, std::int32_t radius = 2) {
  return random_config(s, radius, rng);
}

}  // namespace

TEST_CASE("site lists: sums, powers, ordering") {
  SiteList m = {{-1}, {0}, {1}};
  SiteList s2 = site_sum(m, m);
  CHECK(s2.size() == 5);
  CHECK(s2.front() == Point{-2});
  CHECK(s2.back() == Point{2});
  CHECK(site_power(m, 0, 1) == SiteList{{0}});
  CHECK(site_power(m, 3, 1).size() == 7);
  CHECK(site_index(m, {0}) == 1);
  CHECK_THROWS_AS(site_index(m, {5}), SpecError);
  SiteList a = {{0, 1}, {1, 0}};
  SiteList b = site_negate(a);
  CHECK(site_contains(b, {0, -1}));
  CHECK(site_contains(b, {-1, 0}));
}

TEST_CASE("validation normalizes memory and drops redundant perturbations") {
  NucaSpec raw = plain_spec(2, 1, 1, {{0}, {1}}, {{{1}, scalar_block(2, 1)}});
  NucaSpec v = validate_spec(raw);
  CHECK(v.memory == SiteList{{-1}, {0}, {1}});  // symmetrized, 0 kept
  CHECK(v.base.coeffs.size() == 3);
  CHECK(v.base.coeffs[2].at(0, 0) == 1);  // offset +1 block survived realignment

  // A perturbation equal to the base disappears.
  raw.perturbations.emplace(Point{4}, LocalRule{raw.base});
  CHECK(validate_spec(raw).perturbations.empty());

  CHECK_THROWS_AS(validate_spec(plain_spec(4, 1, 1, {{0}}, {})), SpecError);
}

TEST_CASE("table rules must be zero-quiescent") {
  NucaSpec s = plain_spec(2, 1, 1, {{0}}, {});
  TableRule t;
  t.outputs = {{1}, {0}};  // all-zero pattern maps to 1: rejected
  s.perturbations.emplace(Point{0}, LocalRule{t});
  CHECK_THROWS_WITH_AS(validate_spec(s), doctest::Contains("zero-quiescent"), SpecError);

  TableRule ok;
  ok.outputs = {{0}, {1}};
  NucaSpec s2 = plain_spec(2, 1, 1, {{0}}, {});
  s2.perturbations.emplace(Point{0}, LocalRule{ok});
  CHECK_NOTHROW(validate_spec(s2));
}

TEST_CASE("table rules are re-indexed when the memory grows") {
  // Declared memory {0, 1}; the table implements x(0) AND x(1).  After
  // normalization the memory is {-1, 0, 1} and patterns have three sites.
  NucaSpec s = plain_spec(2, 1, 1, {{0}, {1}}, {});
  TableRule t;
  for (std::size_t idx = 0; idx < 4; ++idx) {
    std::uint32_t x0 = idx & 1, x1 = (idx >> 1) & 1;
    t.outputs.push_back({x0 & x1});
  }
  s.memory = {{0}, {1}};  // plain_spec sorted it already; keep explicit
  s.perturbations.emplace(Point{0}, LocalRule{t});
  NucaSpec v = validate_spec(s);
  const LocalRule& rule = v.perturbations.at(Point{0});
  REQUIRE_FALSE(rule.is_linear());
  // Pattern (x(-1), x(0), x(1)) = (1, 1, 0): AND of sites 0 and 1 is 0.
  CHECK(evaluate_rule(v, rule, std::vector<std::uint32_t>{1, 1, 0}) ==
        std::vector<std::uint32_t>{0});
  CHECK(evaluate_rule(v, rule, std::vector<std::uint32_t>{0, 1, 1}) ==
        std::vector<std::uint32_t>{1});
  // The stray site -1 is ignored.
  CHECK(evaluate_rule(v, rule, std::vector<std::uint32_t>{1, 1, 1}) ==
        std::vector<std::uint32_t>{1});
}

TEST_CASE("impulse response of the two-neighbor parity rule") {
  NucaSpec s = validate_spec(rule90());
  PatternConfig x = impulse_config(s, {0}, 0);
  x = apply_step(s, x);
  CHECK(x.at({-1}) == std::vector<std::uint32_t>{1});
  CHECK(x.at({1}) == std::vector<std::uint32_t>{1});
  CHECK(x.at({0}) == std::vector<std::uint32_t>{0});
  x = apply_step(s, x);
  CHECK(x.support().size() == 2);
  CHECK(x.at({-2}) == std::vector<std::uint32_t>{1});
  CHECK(x.at({2}) == std::vector<std::uint32_t>{1});
}

TEST_CASE("apply_steps equals repeated apply_step") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    NucaSpec s = testsuite::random_plain_spec(rng);
    PatternConfig x = random_cfg(s, rng);
    PatternConfig a = x, b = apply_steps(s, x, 3);
    for (int i = 0; i < 3; ++i) a = apply_step(s, a);
    CHECK(a == b);
  }
}

TEST_CASE("power_spec agrees with iterated stepping and with composition") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 12; ++trial) {
    NucaSpec s = testsuite::random_plain_spec(rng);
    std::uint64_t n = 1 + rng() % 3;
    NucaSpec pw = power_spec(s, n);
    for (int rep = 0; rep < 4; ++rep) {
      PatternConfig x = random_cfg(s, rng);
      CHECK(apply_steps(s, x, n) == apply_step(pw, x));
    }
    if (s.fully_linear()) {
      NucaSpec sq = power_spec(s, 2);
      CHECK(spec_equivalent(sq, compose_specs(s, s)));
    }
  }
}

TEST_CASE("squared two-neighbor parity reads offsets -2 and +2") {
  NucaSpec sq = power_spec(validate_spec(rule90()), 2);
  SymbolMatrix sym = base_symbol(sq);
  CHECK(sym.at(0, 0).coeff({2}) == 1);
  CHECK(sym.at(0, 0).coeff({-2}) == 1);
  CHECK(sym.at(0, 0).coeff({0}) == 0);
}

TEST_CASE("composition order: compose_specs(a, b) applies b first") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    NucaSpec a = testsuite::random_plain_spec(rng);
    NucaSpec b = testsuite::random_plain_spec(rng);
    if (a.p != b.p || a.k != b.k || !a.fully_linear() || !b.fully_linear()) continue;
    NucaSpec c = compose_specs(a, b);
    for (int rep = 0; rep < 4; ++rep) {
      PatternConfig x = random_cfg(a, rng);
      CHECK(apply_step(c, x) == apply_step(a, apply_step(b, x)));
    }
  }
}

TEST_CASE("shift equivariance of the dynamics") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    NucaSpec s = testsuite::random_plain_spec(rng);
    Point g = {static_cast<std::int32_t>(rng() % 7) - 3};
    NucaSpec sg = shift_spec(s, g);
    PatternConfig x = random_cfg(s, rng);
    std::uint64_t n = 1 + rng() % 3;
    CHECK(apply_steps(sg, shift_config(x, g), n) == shift_config(apply_steps(s, x, n), g));
  }
}

TEST_CASE("pairing adjointness of the dual automaton") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    NucaSpec s = testsuite::random_plain_spec(rng);
    if (!s.fully_linear()) continue;
    NucaSpec ds = dual_spec(s);
    PatternConfig x = random_cfg(s, rng), y = random_cfg(s, rng);
    CHECK(pairing(apply_step(s, x), y) == pairing(x, apply_step(ds, y)));
  }
}

TEST_CASE("dual of the dual is the original") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    NucaSpec s = testsuite::random_plain_spec(rng);
    if (!s.fully_linear()) continue;
    CHECK(spec_equivalent(dual_spec(dual_spec(s)), s));
  }
}

TEST_CASE("spec_equivalent sees through memory padding and catches differences") {
  NucaSpec a = plain_spec(2, 1, 1, {{0}}, {{Point{0}, scalar_block(2, 1)}});
  NucaSpec b = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {{Point{0}, scalar_block(2, 1)}});
  CHECK(spec_equivalent(a, b));
  NucaSpec c = b;
  c.perturbations.emplace(Point{2}, LocalRule{linear_rule_for(c.memory, {}, 1, 2)});
  CHECK_FALSE(spec_equivalent(a, c));
}

TEST_CASE("induced window map matches direct stepping") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    NucaSpec s = testsuite::random_plain_spec(rng);
    SiteList cells = {{-1}, {0}, {2}};
    InducedMap f(s, cells);
    // Window input: values over cells ⊕ M; build a config from it.
    std::vector<std::uint32_t> win(f.in_dim());
    for (auto& v : win) v = static_cast<std::uint32_t>(rng() % s.p);
    PatternConfig x = config_from_window(s, f.in_sites(), win);
    auto out = f.apply(win);
    PatternConfig y = apply_step(s, x);
    auto expect = window_values(y, cells);
    CHECK(out == expect);
    if (f.linear()) CHECK(f.matrix().apply(win) == expect);
  }
}

TEST_CASE("induced map refuses a matrix in table mode but still applies") {
  NucaSpec s = plain_spec(2, 1, 1, {{0}}, {});
  TableRule t;
  t.outputs = {{0}, {1}};
  s.perturbations.emplace(Point{0}, LocalRule{t});
  s = validate_spec(s);
  InducedMap f(s, SiteList{{0}});
  CHECK_FALSE(f.linear());
  CHECK_THROWS_AS(f.matrix(), ReductionError);
  std::vector<std::uint32_t> win(f.in_dim(), 1);
  CHECK(f.apply(win).size() == f.out_dim());
}

TEST_CASE("finite endomorphism classification matches exhaustive orbit walks") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    std::uint32_t p = trial % 2 ? 2 : 3;
    std::size_t n = 1 + rng() % (p == 2 ? 6 : 4);  // carrier <= 2^6 / 3^4
    Mat map(n, n, p);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) map.set(r, c, static_cast<std::uint32_t>(rng() % p));
    FiniteEndo endo = FiniteEndo::linear(Subspace::full(n, p), map);
    EndoClass cls = endo.classify();

    // Exhaustive reference: iterate every vector.
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= p;
    auto decode = [&](std::size_t idx) {
      std::vector<std::uint32_t> v(n);
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = idx % p;
        idx /= p;
      }
      return v;
    };
    auto encode = [&](const std::vector<std::uint32_t>& v) {
      std::size_t idx = 0;
      for (std::size_t i = n; i-- > 0;) idx = idx * p + v[i];
      return idx;
    };
    std::vector<std::size_t> next(total);
    for (std::size_t i = 0; i < total; ++i) next[i] = encode(map.apply(decode(i)));

    // Bijectivity.
    std::vector<bool> hit(total, false);
    bool bij = true;
    for (std::size_t i = 0; i < total; ++i) {
      if (hit[next[i]]) bij = false;
      hit[next[i]] = true;
    }
    CHECK(cls.bijective == bij);

    // Nilpotency: everything reaches 0 within total steps.
    bool nil = true;
    for (std::size_t i = 0; i < total && nil; ++i) {
      std::size_t v = i;
      for (std::size_t s = 0; s < total && v != 0; ++s) v = next[v];
      if (v != 0) nil = false;
    }
    CHECK(cls.nilpotent_to_zero == nil);

    // Global preperiod/period: first (m, T) with phi^(m+T) = phi^m.
    std::vector<std::vector<std::size_t>> powers;
    std::vector<std::size_t> cur(total);
    for (std::size_t i = 0; i < total; ++i) cur[i] = i;
    std::uint64_t pre = 0, per = 0;
    while (true) {
      for (std::size_t m = 0; m < powers.size(); ++m)
        if (powers[m] == cur) {
          pre = m;
          per = powers.size() - m;
          break;
        }
      if (per) break;
      powers.push_back(cur);
      std::vector<std::size_t> nx(total);
      for (std::size_t i = 0; i < total; ++i) nx[i] = next[cur[i]];
      cur = nx;
    }
    CHECK(cls.preperiod == pre);
    REQUIRE(cls.period.has_value());
    CHECK(*cls.period == per);
  }
}

TEST_CASE("table-mode endomorphism classification") {
  // A 3-element map: 0 -> 0, 1 -> 2, 2 -> 1: bijective, period 2.
  FiniteEndo endo = FiniteEndo::table({{0}, {1}, {2}}, {0, 2, 1}, 0);
  EndoClass cls = endo.classify();
  CHECK(cls.bijective);
  CHECK_FALSE(cls.nilpotent_to_zero);
  CHECK(cls.preperiod == 0);
  CHECK(cls.period == 2);

  // 0 -> 0, 1 -> 0, 2 -> 1: nilpotent in two steps.
  FiniteEndo endo2 = FiniteEndo::table({{0}, {1}, {2}}, {0, 0, 1}, 0);
  EndoClass cls2 = endo2.classify();
  CHECK(cls2.nilpotent_to_zero);
  CHECK_FALSE(cls2.bijective);
  CHECK(cls2.preperiod == 2);
  CHECK(cls2.period == 1);
}

TEST_CASE("empty endomorphism is vacuously trivial") {
  FiniteEndo endo;
  EndoClass cls = endo.classify();
  CHECK(cls.nilpotent_to_zero);
  CHECK(cls.bijective);
  CHECK(cls.preperiod == 0);
  CHECK(cls.period == 1);
}

TEST_CASE("config round-trips through windows") {
  NucaSpec s = plain_spec(3, 2, 1, {{0}}, {});
  SiteList win = {{-1}, {0}, {1}};
  std::vector<std::uint32_t> vals = {1, 2, 0, 1, 2, 0};
  PatternConfig x = config_from_window(s, win, vals);
  CHECK(window_values(x, win) == vals);
  CHECK(x.at({-1}) == std::vector<std::uint32_t>{1, 2});
  CHECK(x.at({1}) == std::vector<std::uint32_t>{2, 0});
}
