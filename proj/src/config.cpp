#include "nuca/config.hpp"

#include <algorithm>

namespace nuca {

PatternConfig::PatternConfig(std::uint32_t p, std::uint32_t k, std::uint32_t d)
    : p_(p), k_(k), d_(d) {}

std::vector<std::uint32_t> PatternConfig::at(const Point& g) const {
  auto it = cells_.find(g);
  if (it == cells_.end()) return std::vector<std::uint32_t>(k_, 0);
  return it->second;
}

void PatternConfig::set(const Point& g, std::vector<std::uint32_t> v) {
  if (g.size() != d_) throw SpecError("configuration site has wrong dimension");
  if (v.size() != k_) throw SpecError("configuration value has wrong alphabet dimension");
  bool zero = true;
  for (auto& c : v) {
    c %= p_;
    if (c != 0) zero = false;
  }
  if (zero)
    cells_.erase(g);
  else
    cells_[g] = std::move(v);
}

bool PatternConfig::operator==(const PatternConfig& o) const {
  return p_ == o.p_ && k_ == o.k_ && d_ == o.d_ && cells_ == o.cells_;
}

PatternConfig impulse_config(const NucaSpec& spec, const Point& g, std::uint32_t comp) {
  PatternConfig x(spec.p, spec.k, spec.d);
  std::vector<std::uint32_t> v(spec.k, 0);
  v[comp] = 1;
  x.set(g, std::move(v));
  return x;
}

PatternConfig apply_step(const NucaSpec& spec, const PatternConfig& x) {
  if (x.p() != spec.p || x.k() != spec.k || x.d() != spec.d)
    throw SpecError("configuration does not match spec alphabet");
  // Every rule is zero-quiescent, so only cells that read some support site
  // can produce output; the perturbed cells are covered because they read
  // themselves (0 is in the normalized memory).
  std::vector<Point> candidates;
  for (const auto& [g, v] : x.support())
    for (const auto& m : spec.memory) candidates.push_back(point_sub(g, m));
  SiteList sites = sorted_unique(std::move(candidates));

  PatternConfig y(spec.p, spec.k, spec.d);
  std::vector<std::uint32_t> pattern(spec.memory.size() * spec.k);
  for (const auto& g : sites) {
    std::size_t at = 0;
    for (const auto& m : spec.memory) {
      auto v = x.at(point_add(g, m));
      for (std::uint32_t c = 0; c < spec.k; ++c) pattern[at++] = v[c];
    }
    LocalRule rule = local_rule_at(spec, g);
    y.set(g, evaluate_rule(spec, rule, pattern));
  }
  return y;
}

PatternConfig apply_steps(const NucaSpec& spec, const PatternConfig& x, std::uint64_t n) {
  PatternConfig y = x;
  for (std::uint64_t i = 0; i < n; ++i) y = apply_step(spec, y);
  return y;
}

PatternConfig shift_config(const PatternConfig& x, const Point& g) {
  PatternConfig y(x.p(), x.k(), x.d());
  for (const auto& [h, v] : x.support()) y.set(point_add(h, g), v);
  return y;
}

Scalar pairing(const PatternConfig& x, const PatternConfig& y) {
  if (x.p() != y.p() || x.k() != y.k() || x.d() != y.d())
    throw SpecError("pairing of configurations over different alphabets");
  std::uint32_t acc = 0;
  for (const auto& [g, v] : x.support()) {
    auto w = y.at(g);
    for (std::uint32_t c = 0; c < x.k(); ++c) acc = add_mod(acc, mul_mod(v[c], w[c], x.p()), x.p());
  }
  return Scalar(acc, x.p());
}

PatternConfig random_config(const NucaSpec& spec, std::int32_t radius, std::mt19937_64& rng) {
  PatternConfig x(spec.p, spec.k, spec.d);
  std::uniform_int_distribution<std::uint32_t> dist(0, spec.p - 1);
  std::vector<Point> box = {origin(spec.d)};
  for (std::uint32_t axis = 0; axis < spec.d; ++axis) {
    std::vector<Point> next;
    for (const auto& pt : box)
      for (std::int32_t v = -radius; v <= radius; ++v) {
        Point q = pt;
        q[axis] = v;
        next.push_back(q);
      }
    box = std::move(next);
  }
  for (const auto& g : sorted_unique(std::move(box))) {
    std::vector<std::uint32_t> v(spec.k);
    for (auto& c : v) c = dist(rng);
    x.set(g, std::move(v));
  }
  return x;
}

PatternConfig config_from_window(const NucaSpec& spec, const SiteList& window,
                                 std::span<const std::uint32_t> values) {
  if (values.size() != window.size() * spec.k) throw SpecError("window value vector has wrong length");
  PatternConfig x(spec.p, spec.k, spec.d);
  for (std::size_t i = 0; i < window.size(); ++i)
    x.set(window[i], std::vector<std::uint32_t>(values.begin() + i * spec.k,
                                                values.begin() + (i + 1) * spec.k));
  return x;
}

std::vector<std::uint32_t> window_values(const PatternConfig& x, const SiteList& window) {
  std::vector<std::uint32_t> out(window.size() * x.k());
  std::size_t at = 0;
  for (const auto& g : window) {
    auto v = x.at(g);
    for (std::uint32_t c = 0; c < x.k(); ++c) out[at++] = v[c];
  }
  return out;
}

}  // namespace nuca
