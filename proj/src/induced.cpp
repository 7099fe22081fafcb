#include "nuca/induced.hpp"

namespace nuca {

InducedMap::InducedMap(const NucaSpec& spec, SiteList cells)
    : spec_(spec),
      out_(std::move(cells)),
      in_(site_sum(out_, spec.memory)),
      linear_(true),
      body_(0, 0, spec.p) {
  const std::uint32_t k = spec_.k;
  for (const auto& g : out_) rules_.push_back(local_rule_at(spec_, g));
  for (const auto& r : rules_)
    if (!r.is_linear()) linear_ = false;

  if (linear_) {
    Mat m(out_dim(), in_dim(), spec_.p);
    for (std::size_t gi = 0; gi < out_.size(); ++gi) {
      const LinearRule& rule = rules_[gi].linear();
      for (std::size_t mi = 0; mi < spec_.memory.size(); ++mi) {
        const Mat& a = rule.coeffs[mi];
        if (a.is_zero()) continue;
        std::size_t col0 = site_index(in_, point_add(out_[gi], spec_.memory[mi])) * k;
        for (std::uint32_t r = 0; r < k; ++r)
          for (std::uint32_t c = 0; c < k; ++c)
            m.set(gi * k + r, col0 + c, add_mod(m.at(gi * k + r, col0 + c), a.at(r, c), spec_.p));
      }
    }
    body_ = std::move(m);
  }
}

const Mat& InducedMap::matrix() const {
  if (!linear_) throw ReductionError("window map has table rules; no matrix form");
  return body_;
}

std::vector<std::uint32_t> InducedMap::apply(std::span<const std::uint32_t> window) const {
  if (window.size() != in_dim()) throw ReductionError("window vector has wrong length");
  if (linear_) return body_.apply(window);
  const std::uint32_t k = spec_.k;
  std::vector<std::uint32_t> out(out_dim(), 0);
  std::vector<std::uint32_t> pattern(spec_.memory.size() * k);
  for (std::size_t gi = 0; gi < out_.size(); ++gi) {
    for (std::size_t mi = 0; mi < spec_.memory.size(); ++mi) {
      std::size_t src = site_index(in_, point_add(out_[gi], spec_.memory[mi])) * k;
      for (std::uint32_t c = 0; c < k; ++c) pattern[mi * k + c] = window[src + c];
    }
    auto v = evaluate_rule(spec_, rules_[gi], pattern);
    for (std::uint32_t c = 0; c < k; ++c) out[gi * k + c] = v[c];
  }
  return out;
}

}  // namespace nuca
