#include "nuca/endo.hpp"

#include <numeric>
#include <unordered_map>

#include "nuca/errors.hpp"

namespace nuca {

std::uint64_t lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  std::uint64_t g = std::gcd(a, b);
  unsigned __int128 l = (unsigned __int128)(a / g) * b;
  if (l > cap) throw ResourceLimit("lcm of cycle lengths exceeds the period cap");
  return static_cast<std::uint64_t>(l);
}

FiniteEndo FiniteEndo::linear(Subspace carrier, const Mat& ambient_map) {
  if (ambient_map.rows() != carrier.ambient_dim() || ambient_map.cols() != carrier.ambient_dim())
    throw SpecError("ambient map shape does not match carrier");
  const std::size_t w = carrier.dim();
  Mat restricted(w, w, carrier.modulus());
  for (std::size_t i = 0; i < w; ++i) {
    auto image = ambient_map.apply(carrier.basis().row(i));
    auto coords = carrier.coordinates(image);
    if (!coords) throw ReductionError("carrier is not invariant under the map; reduction bug");
    for (std::size_t j = 0; j < w; ++j) restricted.set(j, i, (*coords)[j]);
  }
  FiniteEndo e;
  e.linear_ = LinearData{std::move(carrier), std::move(restricted)};
  return e;
}

FiniteEndo FiniteEndo::table(std::vector<std::vector<std::uint32_t>> elems,
                             std::vector<std::size_t> next, std::size_t zero_index) {
  if (elems.size() != next.size()) throw SpecError("table endomorphism: size mismatch");
  for (auto n : next)
    if (n >= elems.size()) throw ReductionError("table endomorphism image escapes the carrier");
  FiniteEndo e;
  e.table_ = TableData{std::move(elems), std::move(next), zero_index};
  return e;
}

std::size_t FiniteEndo::dim() const {
  if (!linear_) throw SpecError("dim() on a table-mode endomorphism");
  return linear_->carrier.dim();
}

std::size_t FiniteEndo::size() const {
  if (!table_) throw SpecError("size() on a linear-mode endomorphism");
  return table_->elems.size();
}

EndoClass FiniteEndo::classify(std::uint64_t period_cap) const {
  EndoClass out;
  if (!linear_ && !table_) {  // empty carrier: everything holds vacuously
    out.nilpotent_to_zero = true;
    out.bijective = true;
    out.period = 1;
    return out;
  }
  if (linear_) {
    const Mat& R = linear_->restricted;
    const std::size_t w = R.rows();
    out.nilpotent_to_zero = R.pow(w).is_zero();
    out.bijective = (R.rank() == w);

    // Preperiod = rank stabilization index (Fitting decomposition).
    Mat P = Mat::identity(w, R.modulus());
    std::size_t prev_rank = w;
    std::uint64_t m = 0;
    while (true) {
      P = P * R;
      std::size_t r = P.rank();
      if (r == prev_rank) break;
      prev_rank = r;
      ++m;
    }
    out.preperiod = m;

    // On the eventual image the map is a bijection; its order is the period.
    Subspace ev = image_basis(R.pow(m));
    const std::size_t e = ev.dim();
    Mat RE(e, e, R.modulus());
    for (std::size_t i = 0; i < e; ++i) {
      auto img = R.apply(ev.basis().row(i));
      auto coords = ev.coordinates(img);
      if (!coords) throw ReductionError("eventual image not invariant; classification bug");
      for (std::size_t j = 0; j < e; ++j) RE.set(j, i, (*coords)[j]);
    }
    Mat Q = RE;
    std::uint64_t n = 1;
    while (!Q.is_identity()) {
      Q = Q * RE;
      if (++n > period_cap) return out;  // period stays nullopt
    }
    out.period = n;
    return out;
  }

  const auto& t = *table_;
  const std::size_t n = t.elems.size();
  out.bijective = [&] {
    std::vector<bool> seen(n, false);
    for (auto v : t.next) {
      if (seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }();

  // Functional graph: tail depths and cycle lengths.
  std::vector<std::int64_t> depth(n, -1);
  std::vector<bool> on_cycle(n, false);
  std::uint64_t period = 1;
  bool period_ok = true;
  std::uint64_t max_depth = 0;
  std::vector<std::size_t> path;
  std::unordered_map<std::size_t, std::size_t> pos;
  for (std::size_t s = 0; s < n; ++s) {
    if (depth[s] != -1) continue;
    path.clear();
    pos.clear();
    std::size_t u = s;
    while (depth[u] == -1 && !pos.count(u)) {
      pos[u] = path.size();
      path.push_back(u);
      u = t.next[u];
    }
    std::size_t settled_from;
    if (depth[u] != -1) {
      settled_from = path.size();  // walk ended on an already-classified node
    } else {
      // New cycle: path[pos[u]..end].
      std::size_t start = pos[u];
      std::uint64_t len = path.size() - start;
      try {
        period = lcm_capped(period, len, 1ull << 40);
      } catch (const ResourceLimit&) {
        period_ok = false;
      }
      for (std::size_t i = start; i < path.size(); ++i) {
        depth[path[i]] = 0;
        on_cycle[path[i]] = true;
      }
      settled_from = start;
    }
    for (std::size_t i = settled_from; i-- > 0;) {
      depth[path[i]] = depth[t.next[path[i]]] + 1;
      if ((std::uint64_t)depth[path[i]] > max_depth) max_depth = (std::uint64_t)depth[path[i]];
    }
  }
  out.preperiod = max_depth;
  if (period_ok && period <= period_cap) out.period = period;

  out.nilpotent_to_zero = true;
  for (std::size_t i = 0; i < n; ++i)
    if (on_cycle[i] && i != t.zero_index) {
      out.nilpotent_to_zero = false;
      break;
    }
  return out;
}

}  // namespace nuca
