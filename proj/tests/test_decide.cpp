#include <doctest.h>

#include <random>

#include "nuca/ca_decide.hpp"
#include "nuca/config.hpp"
#include "nuca/kernel_oracle.hpp"
#include "nuca/nuca_decide.hpp"
#include "suite.hpp"

using namespace nuca;
using testsuite::plain_spec;
using testsuite::scalar_block;

namespace {

SymbolMatrix sym1(std::uint32_t p, std::initializer_list<std::pair<std::int32_t, std::int64_t>> terms) {
  SymbolMatrix s(1, p, 1);
  for (auto [e, c] : terms) s.at(0, 0).add_term({e}, c);
  return s;
}

// sigma^(m+n) and sigma^m agree on random configurations.
bool eventual_cert_holds(const NucaSpec& spec, std::uint64_t m, std::uint64_t n,
                         std::uint64_t seed, int trials = 8) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < trials; ++i) {
    PatternConfig x = random_config(spec, 2, rng);
    if (apply_steps(spec, x, m + n) != apply_steps(spec, x, m)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("uniform decisions on scalar symbols") {
  CaVerdict nil = ca_nilpotent(SymbolMatrix(1, 2, 1));  // zero rule
  CHECK(nil.verdict);
  CHECK(nil.index == 1);

  CHECK_FALSE(ca_nilpotent(sym1(2, {{1, 1}})).verdict);  // shift

  CaVerdict per = ca_periodic(SymbolMatrix::identity(1, 2, 1));
  CHECK(per.verdict);
  CHECK(per.period == 1);

  CaVerdict per3 = ca_periodic(sym1(3, {{0, 2}}));  // scalar 2 over GF(3)
  CHECK(per3.verdict);
  CHECK(per3.period == 2);

  CHECK_FALSE(ca_periodic(sym1(2, {{1, 1}})).verdict);          // shift
  CHECK_FALSE(ca_periodic(sym1(2, {{0, 1}, {1, 1}})).verdict);  // 1 + x
  CHECK_FALSE(ca_eventually_periodic(sym1(2, {{0, 1}, {1, 1}})).verdict);
  CHECK_FALSE(ca_eventually_periodic(sym1(2, {{-1, 1}, {1, 1}})).verdict);

  CaVerdict ev = ca_eventually_periodic(SymbolMatrix(1, 3, 1));
  CHECK(ev.verdict);  // the zero rule is eventually periodic (period 1)
  CHECK(ev.period == 1);
}

TEST_CASE("uniform decisions on k = 2 symbols") {
  SymbolMatrix tri(2, 2, 1);  // [[0, x], [0, 0]]: squares to zero
  tri.at(0, 1).add_term({1}, 1);
  CaVerdict nil = ca_nilpotent(tri);
  CHECK(nil.verdict);
  CHECK(nil.index == 2);
  CaVerdict ev = ca_eventually_periodic(tri);
  CHECK(ev.verdict);
  CHECK(ev.preperiod == 2);
  CHECK(ev.period == 1);
  CHECK_FALSE(ca_periodic(tri).verdict);

  SymbolMatrix uni = SymbolMatrix::identity(2, 2, 1);  // [[1, 1], [0, 1]]
  uni.at(0, 1).add_term({0}, 1);
  CaVerdict up = ca_periodic(uni);
  CHECK(up.verdict);
  CHECK(up.period == 2);

  // [[1, x], [0, 1]] is periodic over GF(2) as well: unipotent of order 2.
  SymbolMatrix unipx = SymbolMatrix::identity(2, 2, 1);
  unipx.at(0, 1).add_term({1}, 1);
  CaVerdict upx = ca_periodic(unipx);
  CHECK(upx.verdict);
  CHECK(upx.period == 2);
}

TEST_CASE("uniform invertibility and the inverse symbol") {
  CaVerdict shift = ca_invertible(sym1(2, {{1, 1}}));
  CHECK(shift.verdict);
  REQUIRE(shift.inverse.has_value());
  CHECK((*shift.inverse * sym1(2, {{1, 1}})).is_identity());

  CHECK_FALSE(ca_invertible(sym1(2, {{0, 1}, {1, 1}})).verdict);
  CHECK_FALSE(ca_invertible(SymbolMatrix(1, 2, 1)).verdict);

  // Unipotent k = 2 with an off-diagonal shift: inverse exists.
  SymbolMatrix unipx = SymbolMatrix::identity(2, 3, 1);
  unipx.at(0, 1).add_term({1}, 2);
  CaVerdict v = ca_invertible(unipx);
  CHECK(v.verdict);
  REQUIRE(v.inverse.has_value());
  CHECK((*v.inverse * unipx).is_identity());
  CHECK((unipx * *v.inverse).is_identity());
}

TEST_CASE("eventual certificates from the uniform decision are sound") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    NucaSpec s = testsuite::random_plain_spec(rng);
    if (!s.fully_linear()) continue;
    NucaSpec pure = s;
    pure.perturbations.clear();
    CaVerdict ev = ca_eventually_periodic(base_symbol(pure));
    if (!ev.verdict) continue;
    CHECK(eventual_cert_holds(pure, *ev.preperiod, *ev.period, rng()));
  }
}

TEST_CASE("curated suite: all six properties match the hand-derived verdicts") {
  for (const auto& c : testsuite::curated_suite()) {
    CAPTURE(c.name);
    for (const auto& [prop, expect] : c.verdicts) {
      CAPTURE(property_name(prop));
      if (!expect.has_value()) {
        CHECK_THROWS_AS(decide_property(c.spec, prop), SpecError);
        continue;
      }
      DecisionReport rep = decide_property(c.spec, prop);
      CHECK(rep.verdict == *expect);
      if (prop == Property::nilpotent && rep.verdict && c.nilpotency_exponent)
        CHECK(rep.exponent == *c.nilpotency_exponent);
      if (prop == Property::periodic && rep.verdict && c.period) CHECK(rep.period == *c.period);
    }
  }
}

TEST_CASE("emitted certificates hold under direct stepping") {
  for (const auto& c : testsuite::curated_suite()) {
    CAPTURE(c.name);
    if (c.spec.sparse && c.spec.sparse->placement == Placement::promise) continue;
    DecisionReport ev = decide_eventually_periodic(c.spec);
    if (ev.verdict && ev.preperiod && ev.period)
      CHECK(eventual_cert_holds(c.spec, *ev.preperiod, *ev.period, 0x9001));
    DecisionReport nil = decide_nilpotent(c.spec);
    if (nil.verdict && nil.exponent) {
      std::mt19937_64 rng(0x9002);
      for (int i = 0; i < 6; ++i)
        CHECK(apply_steps(c.spec, random_config(c.spec, 2, rng), *nil.exponent).is_zero());
    }
    DecisionReport per = decide_periodic(c.spec);
    if (per.verdict && per.period) {
      std::mt19937_64 rng(0x9003);
      for (int i = 0; i < 6; ++i) {
        PatternConfig x = random_config(c.spec, 2, rng);
        CHECK(apply_steps(c.spec, x, *per.period) == x);
      }
    }
  }
}

TEST_CASE("nilpotency looks past a perturbation that only delays death") {
  // Zero base with a chain: cell 0 reads cell 1, cell 1 reads cell 2.
  NucaSpec s = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {});
  auto read_right = LocalRule{linear_rule_for(s.memory, {{Point{1}, scalar_block(2, 1)}}, 1, 2)};
  s.perturbations.emplace(Point{0}, read_right);
  s.perturbations.emplace(Point{1}, read_right);
  DecisionReport rep = decide_nilpotent(s);
  CHECK(rep.verdict);
  REQUIRE(rep.exponent.has_value());
  // The chain dies in three steps and the certificate must cover that.
  std::mt19937_64 rng(79);
  for (int i = 0; i < 6; ++i)
    CHECK(apply_steps(s, random_config(s, 2, rng), *rep.exponent).is_zero());
  CHECK_FALSE(apply_steps(s, impulse_config(s, {2}, 0), 2).is_zero());
}

TEST_CASE("a perturbation can break base periodicity") {
  // Identity base but cell 0 copies its right neighbor: information merges,
  // and after one step cell 0 mirrors cell 1 forever (sigma^2 = sigma).
  NucaSpec s = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {{Point{0}, scalar_block(2, 1)}});
  s.perturbations.emplace(
      Point{0}, LocalRule{linear_rule_for(s.memory, {{Point{1}, scalar_block(2, 1)}}, 1, 2)});
  DecisionReport rep = decide_periodic(s);
  CHECK_FALSE(rep.verdict);
  DecisionReport ev = decide_eventually_periodic(s);
  CHECK(ev.verdict);
  REQUIRE(ev.preperiod.has_value());
  CHECK(eventual_cert_holds(s, *ev.preperiod, *ev.period, 0x9005));
  DecisionReport inj = decide_injective(s);
  CHECK_FALSE(inj.verdict);
}

TEST_CASE("injectivity: verdicts, witnesses and kernel dimensions") {
  auto suite = testsuite::curated_suite();
  for (const auto& c : suite) {
    CAPTURE(c.name);
    auto expect = c.verdicts.at(Property::injective);
    if (!expect.has_value()) continue;
    DecisionReport rep = decide_injective(c.spec);
    CHECK(rep.verdict == *expect);
    if (rep.verdict) {
      CHECK(rep.kernel_dimension == 0);
    } else if (rep.kernel_witness) {
      CHECK_FALSE(rep.kernel_witness->is_zero());
      CHECK(apply_step(c.spec, *rep.kernel_witness).is_zero());
    }
  }
}

TEST_CASE("the one-plus-x kernel has no finitely supported member") {
  NucaSpec s = plain_spec(2, 1, 1, {{0}, {1}},
                          {{Point{0}, scalar_block(2, 1)}, {Point{1}, scalar_block(2, 1)}});
  DecisionReport rep = decide_injective(s);
  CHECK_FALSE(rep.verdict);
  CHECK_FALSE(rep.kernel_witness.has_value());
  CHECK(rep.diagnostics.count("kernel-window-dimension"));
  CHECK(oracle::finite_support_kernel(s, 3) == std::nullopt);
}

TEST_CASE("inverse construction composes to the identity both ways") {
  for (const auto& c : testsuite::curated_suite()) {
    if (!c.invertible) continue;
    CAPTURE(c.name);
    auto inv = construct_inverse(c.spec, 4);
    REQUIRE(inv.has_value());
    NucaSpec identity = plain_spec(c.spec.p, c.spec.k, c.spec.d,
                                   {origin(c.spec.d)},
                                   {{origin(c.spec.d), Mat::identity(c.spec.k, c.spec.p)}});
    CHECK(spec_equivalent(compose_specs(*inv, c.spec), identity));
    CHECK(spec_equivalent(compose_specs(c.spec, *inv), identity));
  }
}

TEST_CASE("the involution is its own inverse") {
  NucaSpec s = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {{Point{0}, scalar_block(2, 1)}});
  s.perturbations.emplace(
      Point{0}, LocalRule{linear_rule_for(
                    s.memory, {{Point{0}, scalar_block(2, 1)}, {Point{1}, scalar_block(2, 1)}}, 1, 2)});
  auto inv = construct_inverse(s, 4);
  REQUIRE(inv.has_value());
  CHECK(spec_equivalent(*inv, s));
}

TEST_CASE("construct_inverse refuses non-injective specs") {
  NucaSpec s = plain_spec(2, 1, 1, {{0}, {1}},
                          {{Point{0}, scalar_block(2, 1)}, {Point{1}, scalar_block(2, 1)}});
  CHECK_THROWS_AS(construct_inverse(s, 3), SpecError);
}

TEST_CASE("post-surjectivity mirrors injectivity of the dual") {
  auto suite = testsuite::curated_suite();
  for (const auto& c : suite) {
    CAPTURE(c.name);
    auto expect = c.verdicts.at(Property::post_surjective);
    if (!expect.has_value()) continue;
    DecisionReport rep = decide_post_surjective(c.spec);
    CHECK(rep.verdict == *expect);
  }
  // The witness for the erased origin travels through the dual.
  NucaSpec s = plain_spec(2, 1, 1, {{0}}, {{Point{0}, scalar_block(2, 1)}});
  s.perturbations.emplace(Point{0}, LocalRule{linear_rule_for(s.memory, {}, 1, 2)});
  DecisionReport rep = decide_post_surjective(s);
  CHECK_FALSE(rep.verdict);
  CHECK(rep.diagnostics.count("witness-lives-in-dual"));
}

TEST_CASE("verdicts are invariant under shifting the spec") {
  std::vector<Point> shifts1 = {{-3}, {-1}, {2}, {3}};
  for (const auto& c : testsuite::curated_suite()) {
    CAPTURE(c.name);
    std::vector<Point> shifts;
    if (c.spec.d == 1)
      shifts = shifts1;
    else
      shifts = {{1, -2}, {-3, 3}};
    for (const Point& g : shifts) {
      NucaSpec moved = shift_spec(c.spec, g);
      for (const auto& [prop, expect] : c.verdicts) {
        CAPTURE(property_name(prop));
        if (!expect.has_value()) {
          CHECK_THROWS_AS(decide_property(moved, prop), SpecError);
        } else {
          CHECK(decide_property(moved, prop).verdict == *expect);
        }
      }
    }
  }
}

TEST_CASE("sparse decisions: generated placements") {
  NucaSpec s = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {});
  ClusterType ct;
  ct.cells.emplace(Point{0},
                   LocalRule{linear_rule_for(s.memory, {{Point{1}, scalar_block(2, 1)}}, 1, 2)});
  ct.infinite = true;
  SparseInfo si;
  si.clusters.push_back(ct);
  si.placement = Placement::polynomial;
  si.degree = 2;
  s.sparse = si;

  DecisionReport nil = decide_nilpotent(s);
  CHECK(nil.verdict);
  CHECK(nil.exponent == 2);
  CHECK_FALSE(decide_periodic(s).verdict);
  DecisionReport ev = decide_eventually_periodic(s);
  CHECK(ev.verdict);
  CHECK(eventual_cert_holds(s, *ev.preperiod, *ev.period, 0x9004));
  CHECK_THROWS_AS(decide_injective(s), SpecError);
  CHECK_THROWS_AS(decide_post_surjective(s), SpecError);
}

TEST_CASE("sparse decisions: exponential placements and a live cluster") {
  // Cluster cells at 0 and 1 copy each other: a two-cell oscillator seed.
  NucaSpec s = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {});
  ClusterType ct;
  ct.cells.emplace(Point{0},
                   LocalRule{linear_rule_for(s.memory, {{Point{1}, scalar_block(2, 1)}}, 1, 2)});
  ct.cells.emplace(Point{1},
                   LocalRule{linear_rule_for(s.memory, {{Point{-1}, scalar_block(2, 1)}}, 1, 2)});
  ct.infinite = true;
  SparseInfo si;
  si.clusters.push_back(ct);
  si.placement = Placement::exponential;
  s.sparse = si;

  CHECK_FALSE(decide_nilpotent(s).verdict);
  DecisionReport ev = decide_eventually_periodic(s);
  CHECK(ev.verdict);  // swap cells forever: eventually periodic, not nilpotent
  CHECK_FALSE(decide_periodic(s).verdict);  // everything else is erased
}

TEST_CASE("sparse conflicts and malformed descriptors are rejected") {
  NucaSpec s = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {});
  ClusterType a;
  a.cells.emplace(Point{0},
                  LocalRule{linear_rule_for(s.memory, {{Point{1}, scalar_block(2, 1)}}, 1, 2)});
  a.anchors.push_back(Point{0});
  ClusterType b;
  b.cells.emplace(Point{0},
                  LocalRule{linear_rule_for(s.memory, {{Point{-1}, scalar_block(2, 1)}}, 1, 2)});
  b.anchors.push_back(Point{0});
  SparseInfo si;
  si.clusters = {a, b};
  si.placement = Placement::promise;
  s.sparse = si;
  // Same cell claimed by two different rules.
  CHECK_THROWS_AS(decide_nilpotent(s), SpecError);

  NucaSpec s2 = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {});
  SparseInfo bad;
  bad.clusters = {a};
  bad.placement = Placement::polynomial;
  bad.degree = 1;
  s2.sparse = bad;
  CHECK_THROWS_WITH_AS(validate_spec(s2), doctest::Contains("degree"), SpecError);
}

TEST_CASE("sparse promise suite case reports window-level checking") {
  auto suite = testsuite::curated_suite();
  for (const auto& c : suite) {
    if (!c.spec.sparse || c.spec.sparse->placement != Placement::promise) continue;
    DecisionReport rep = decide_nilpotent(c.spec);
    CHECK(rep.verdict);
    bool mentions_promise = false;
    for (const auto& [key, val] : rep.diagnostics)
      if (val.find("promise") != std::string::npos) mentions_promise = true;
    CHECK(mentions_promise);
  }
}

TEST_CASE("cayley-hamilton matches eventual periodicity everywhere") {
  for (const auto& c : testsuite::curated_suite()) {
    CAPTURE(c.name);
    DecisionReport ch = decide_cayley_hamilton(c.spec);
    DecisionReport ev = decide_eventually_periodic(c.spec);
    CHECK(ch.verdict == ev.verdict);
    if (ch.verdict) CHECK(ch.diagnostics.count("annihilator"));
  }
}

TEST_CASE("table perturbations flow through the nonlinear reduction") {
  // Identity base; cell 0 applies a zero-quiescent AND of its two neighbors.
  NucaSpec s = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {{Point{0}, scalar_block(2, 1)}});
  TableRule t;
  for (std::size_t idx = 0; idx < 8; ++idx) {
    std::uint32_t left = idx & 1, right = (idx >> 2) & 1;
    t.outputs.push_back({left & right});
  }
  s.perturbations.emplace(Point{0}, LocalRule{t});
  DecisionReport ev = decide_eventually_periodic(s);
  CHECK(ev.verdict);  // away from 0 the identity holds; the window stabilizes
  DecisionReport per = decide_periodic(s);
  CHECK_FALSE(per.verdict);  // the AND merges distinct windows
  CHECK_THROWS_AS(decide_injective(s), SpecError);
}
