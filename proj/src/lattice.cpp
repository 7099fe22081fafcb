#include "nuca/lattice.hpp"

#include <set>
#include <sstream>

namespace nuca {

Point point_add(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw SpecError("lattice point dimension mismatch");
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Point point_sub(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw SpecError("lattice point dimension mismatch");
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Point point_neg(const Point& a) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

Point origin(std::uint32_t d) { return Point(d, 0); }

std::string point_to_string(const Point& a) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out << ",";
    out << a[i];
  }
  out << ")";
  return out.str();
}

SiteList sorted_unique(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), PointLess{});
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

SiteList site_sum(const SiteList& a, const SiteList& b) {
  std::set<Point, PointLess> s;
  for (const auto& x : a)
    for (const auto& y : b) s.insert(point_add(x, y));
  return SiteList(s.begin(), s.end());
}

SiteList site_power(const SiteList& m, std::uint64_t n, std::uint32_t d, std::size_t cap) {
  SiteList acc = {origin(d)};
  for (std::uint64_t i = 0; i < n; ++i) {
    acc = site_sum(acc, m);
    if (acc.size() > cap) throw ResourceLimit("memory-cap exceeded while composing neighborhoods");
  }
  return acc;
}

SiteList site_negate(const SiteList& a) {
  std::vector<Point> pts;
  pts.reserve(a.size());
  for (const auto& x : a) pts.push_back(point_neg(x));
  return sorted_unique(std::move(pts));
}

SiteList site_shift(const SiteList& a, const Point& g) {
  std::vector<Point> pts;
  pts.reserve(a.size());
  for (const auto& x : a) pts.push_back(point_add(x, g));
  return sorted_unique(std::move(pts));
}

SiteList site_union(const SiteList& a, const SiteList& b) {
  std::vector<Point> pts(a);
  pts.insert(pts.end(), b.begin(), b.end());
  return sorted_unique(std::move(pts));
}

SiteList site_difference(const SiteList& a, const SiteList& b) {
  SiteList out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), PointLess{});
  return out;
}

bool site_contains(const SiteList& a, const Point& g) {
  return std::binary_search(a.begin(), a.end(), g, PointLess{});
}

std::size_t site_index(const SiteList& a, const Point& g) {
  auto it = std::lower_bound(a.begin(), a.end(), g, PointLess{});
  if (it == a.end() || *it != g) throw SpecError("site " + point_to_string(g) + " not in window");
  return static_cast<std::size_t>(it - a.begin());
}

}  // namespace nuca
