#include "suite.hpp"

#include <algorithm>

namespace nuca::testsuite {

Mat scalar_block(std::uint32_t p, std::uint32_t v) {
  Mat m(1, 1, p);
  m.set(0, 0, v);
  return m;
}

NucaSpec plain_spec(std::uint32_t p, std::uint32_t k, std::uint32_t d, SiteList memory,
                    std::map<Point, Mat, PointLess> base_coeffs) {
  NucaSpec s;
  s.p = p;
  s.k = k;
  s.d = d;
  s.memory = sorted_unique(std::move(memory));
  s.base = linear_rule_for(s.memory, base_coeffs, k, p);
  return s;
}

namespace {

LocalRule linear_at(const NucaSpec& s, std::map<Point, Mat, PointLess> coeffs) {
  return LocalRule{linear_rule_for(s.memory, coeffs, s.k, s.p)};
}

using V = std::map<Property, std::optional<bool>>;

V verdicts(std::optional<bool> nil, std::optional<bool> per, std::optional<bool> ev,
           std::optional<bool> ch, std::optional<bool> inj, std::optional<bool> ps) {
  return V{{Property::nilpotent, nil},         {Property::periodic, per},
           {Property::eventually_periodic, ev}, {Property::cayley_hamilton, ch},
           {Property::injective, inj},          {Property::post_surjective, ps}};
}

}  // namespace

std::vector<SuiteCase> curated_suite() {
  std::vector<SuiteCase> out;
  const Point o1 = {0};

  {  // zero rule: one step kills everything
    SuiteCase c;
    c.name = "zero";
    c.spec = plain_spec(2, 1, 1, {{0}}, {});
    c.verdicts = verdicts(true, false, true, true, false, false);
    c.nilpotency_exponent = 1;
    out.push_back(c);
  }
  {  // identity
    SuiteCase c;
    c.name = "identity";
    c.spec = plain_spec(2, 1, 1, {{0}}, {{o1, scalar_block(2, 1)}});
    c.verdicts = verdicts(false, true, true, true, true, true);
    c.invertible = true;
    c.period = 1;
    out.push_back(c);
  }
  {  // left shift x(g) <- x(g+1): invertible, never repeats
    SuiteCase c;
    c.name = "shift";
    c.spec = plain_spec(2, 1, 1, {{-1}, {1}}, {{{1}, scalar_block(2, 1)}});
    c.verdicts = verdicts(false, false, false, false, true, true);
    c.invertible = true;
    out.push_back(c);
  }
  {  // 1 + x: kernel is the constants, so no finitely supported witness
    SuiteCase c;
    c.name = "one-plus-x";
    c.spec = plain_spec(2, 1, 1, {{0}, {1}},
                        {{o1, scalar_block(2, 1)}, {{1}, scalar_block(2, 1)}});
    c.verdicts = verdicts(false, false, false, false, false, false);
    out.push_back(c);
  }
  {  // x + 1/x (the two-neighbor parity rule)
    SuiteCase c;
    c.name = "two-neighbor-parity";
    c.spec = plain_spec(2, 1, 1, {{-1}, {1}},
                        {{{-1}, scalar_block(2, 1)}, {{1}, scalar_block(2, 1)}});
    c.verdicts = verdicts(false, false, false, false, false, false);
    out.push_back(c);
  }
  {  // zero base, cell 0 copies itself: an idempotent one-cell trap
    SuiteCase c;
    c.name = "zero-base-own-cell";
    c.spec = plain_spec(2, 1, 1, {{0}}, {});
    c.spec.perturbations.emplace(o1, linear_at(c.spec, {{o1, scalar_block(2, 1)}}));
    c.verdicts = verdicts(false, false, true, true, false, false);
    out.push_back(c);
  }
  {  // zero base, cell 0 reads its right neighbor: dies in two steps
    SuiteCase c;
    c.name = "zero-base-read-right";
    c.spec = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {});
    c.spec.perturbations.emplace(o1, linear_at(c.spec, {{{1}, scalar_block(2, 1)}}));
    c.verdicts = verdicts(true, false, true, true, false, false);
    c.nilpotency_exponent = 2;
    out.push_back(c);
  }
  {  // identity base, cell 0 erased
    SuiteCase c;
    c.name = "identity-erase-origin";
    c.spec = plain_spec(2, 1, 1, {{0}}, {{o1, scalar_block(2, 1)}});
    c.spec.perturbations.emplace(o1, linear_at(c.spec, {}));
    c.verdicts = verdicts(false, false, true, true, false, false);
    out.push_back(c);
  }
  {  // identity base, cell 0 adds its right neighbor: an involution
    SuiteCase c;
    c.name = "identity-add-right";
    c.spec = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {{o1, scalar_block(2, 1)}});
    c.spec.perturbations.emplace(
        o1, linear_at(c.spec, {{o1, scalar_block(2, 1)}, {{1}, scalar_block(2, 1)}}));
    c.verdicts = verdicts(false, true, true, true, true, true);
    c.invertible = true;
    c.period = 2;
    out.push_back(c);
  }
  {  // k = 2 strictly triangular base: S^2 = 0
    SuiteCase c;
    c.name = "triangular-k2";
    Mat a(2, 2, 2);
    a.set(0, 1, 1);
    c.spec = plain_spec(2, 2, 1, {{-1}, {1}}, {{{1}, a}});
    c.verdicts = verdicts(true, false, true, true, false, false);
    c.nilpotency_exponent = 2;
    out.push_back(c);
  }
  {  // sparse, generated placements at n^2: read-right one-cell clusters
    SuiteCase c;
    c.name = "sparse-read-right-squares";
    c.spec = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {});
    ClusterType ct;
    ct.cells.emplace(o1, linear_at(c.spec, {{{1}, scalar_block(2, 1)}}));
    ct.infinite = true;
    SparseInfo si;
    si.clusters.push_back(ct);
    si.placement = Placement::polynomial;
    si.degree = 2;
    c.spec.sparse = si;
    c.verdicts = verdicts(true, false, true, true, std::nullopt, std::nullopt);
    c.nilpotency_exponent = 2;
    out.push_back(c);
  }
  {  // sparse promise: same cluster type, one placement listed, rest promised
    SuiteCase c;
    c.name = "sparse-read-right-promise";
    c.spec = plain_spec(2, 1, 1, {{-1}, {0}, {1}}, {});
    ClusterType ct;
    ct.cells.emplace(o1, linear_at(c.spec, {{{1}, scalar_block(2, 1)}}));
    ct.anchors.push_back(o1);
    ct.infinite = true;
    SparseInfo si;
    si.clusters.push_back(ct);
    si.placement = Placement::promise;
    c.spec.sparse = si;
    c.verdicts = verdicts(true, false, true, true, std::nullopt, std::nullopt);
    c.nilpotency_exponent = 2;
    out.push_back(c);
  }
  {  // d = 2 identity base, origin erased
    SuiteCase c;
    c.name = "identity-erase-origin-2d";
    c.spec = plain_spec(2, 1, 2, {{0, 0}}, {{Point{0, 0}, scalar_block(2, 1)}});
    c.spec.perturbations.emplace(Point{0, 0}, linear_at(c.spec, {}));
    c.verdicts = verdicts(false, false, true, true, false, false);
    out.push_back(c);
  }
  {  // scalar 2 over GF(3): squares to the identity
    SuiteCase c;
    c.name = "scalar-two-gf3";
    c.spec = plain_spec(3, 1, 1, {{0}}, {{o1, scalar_block(3, 2)}});
    c.verdicts = verdicts(false, true, true, true, true, true);
    c.invertible = true;
    c.period = 2;
    out.push_back(c);
  }
  return out;
}

NucaSpec random_plain_spec(std::mt19937_64& rng) {
  auto roll = [&](std::uint64_t n) { return static_cast<std::uint32_t>(rng() % n); };
  const std::uint32_t p = roll(4) ? 2 : 3;
  const std::uint32_t k = roll(3) ? 1 : 2;

  NucaSpec s;
  s.p = p;
  s.k = k;
  s.d = 1;
  s.memory = {{-1}, {0}, {1}};

  auto ident = [&] {
    return Mat::identity(k, p);
  };
  auto zero = [&] { return Mat(k, k, p); };

  std::map<Point, Mat, PointLess> base;
  switch (roll(6)) {
    case 0: break;  // zero base
    case 1: base.emplace(Point{0}, ident()); break;
    case 2: {  // scalar
      Mat m = ident();
      std::uint32_t lambda = 1 + roll(p - 1);
      for (std::uint32_t i = 0; i < k; ++i) m.set(i, i, lambda);
      base.emplace(Point{0}, m);
      break;
    }
    case 3: base.emplace(Point{roll(2) ? 1 : -1}, ident()); break;  // shift
    case 4: {  // strictly triangular (zero when k = 1)
      Mat m = zero();
      if (k == 2) m.set(0, 1, 1 + roll(p - 1));
      base.emplace(Point{static_cast<std::int32_t>(roll(3)) - 1}, m);
      break;
    }
    default: {  // unipotent
      Mat m = ident();
      if (k == 2) m.set(0, 1, 1 + roll(p - 1));
      base.emplace(Point{0}, m);
      break;
    }
  }
  s.base = linear_rule_for(s.memory, base, k, p);

  const std::uint32_t ncells = roll(3);  // 0, 1 or 2 perturbed cells
  std::vector<std::int32_t> cells = {-1, 0, 1};
  for (std::uint32_t i = 0; i < ncells; ++i) {
    Point cell = {cells[roll(static_cast<std::uint32_t>(cells.size()))]};
    cells.erase(std::find(cells.begin(), cells.end(), cell[0]));
    if (roll(8) == 0) {  // zero-quiescent random table
      std::size_t entries = pattern_space_size(p, k, s.memory.size());
      TableRule t;
      for (std::size_t e = 0; e < entries; ++e) {
        std::vector<std::uint32_t> v(k, 0);
        if (e)
          for (auto& x : v) x = roll(p);
        t.outputs.push_back(std::move(v));
      }
      s.perturbations.emplace(cell, LocalRule{std::move(t)});
    } else {
      std::map<Point, Mat, PointLess> co;
      for (const Point& m : s.memory) {
        if (roll(2)) continue;
        Mat a(k, k, p);
        for (std::uint32_t r = 0; r < k; ++r)
          for (std::uint32_t c = 0; c < k; ++c) a.set(r, c, roll(p));
        co.emplace(m, a);
      }
      s.perturbations.emplace(cell, LocalRule{linear_rule_for(s.memory, co, k, p)});
    }
  }
  return validate_spec(s);
}

}  // namespace nuca::testsuite
