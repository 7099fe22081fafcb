#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "nuca/errors.hpp"

// Geometry of the group Z^d.  Sites are integer coordinate vectors; every
// ordered site collection in the project (memory sets, windows, supports) is
// sorted lexicographically, which fixes the vectorization order of window
// patterns once and for all: sites ascending, then the k vector components
// of each site.

namespace nuca {

using Point = std::vector<std::int32_t>;

struct PointLess {
  bool operator()(const Point& a, const Point& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

// Sorted, duplicate-free list of sites.
using SiteList = std::vector<Point>;

Point point_add(const Point& a, const Point& b);
Point point_sub(const Point& a, const Point& b);
Point point_neg(const Point& a);
Point origin(std::uint32_t d);

std::string point_to_string(const Point& a);

SiteList sorted_unique(std::vector<Point> pts);

// Minkowski sum {a + b : a in A, b in B}.
SiteList site_sum(const SiteList& a, const SiteList& b);

// n-fold Minkowski power of m with itself; n = 0 gives {0}.
SiteList site_power(const SiteList& m, std::uint64_t n, std::uint32_t d,
                    std::size_t cap = 200000);

SiteList site_negate(const SiteList& a);
SiteList site_shift(const SiteList& a, const Point& g);
SiteList site_union(const SiteList& a, const SiteList& b);
SiteList site_difference(const SiteList& a, const SiteList& b);
bool site_contains(const SiteList& a, const Point& g);
// Index of g in the sorted list; throws if absent.
std::size_t site_index(const SiteList& a, const Point& g);

}  // namespace nuca
