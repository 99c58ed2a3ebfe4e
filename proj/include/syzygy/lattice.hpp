#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "syzygy/errors.hpp"

namespace syz {

/// Lattice point in Z^r.  Comparison is lexicographic (std::vector order),
/// which is the canonical basis order everywhere in this library.
using Point = std::vector<std::int32_t>;

inline Point point_add(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw config_error("point ranks disagree");
  Point c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

struct PointHash {
  std::size_t operator()(const Point& p) const {
    std::size_t h = 0x9e3779b97f4a7c15ull ^ p.size();
    for (std::int32_t c : p) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(c)) +
           0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Minkowski sum of two point sets, deduplicated and lex-sorted.
inline std::vector<Point> minkowski_sum(const std::vector<Point>& a,
                                        const std::vector<Point>& b) {
  std::vector<Point> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(point_add(x, y));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Sorted, deduplicated copy; validates uniform rank.
inline std::vector<Point> canonical_point_set(std::vector<Point> pts) {
  for (const auto& p : pts)
    if (p.size() != pts.front().size())
      throw config_error("point set has mixed ranks");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

inline std::string point_to_string(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  s += ")";
  return s;
}

}  // namespace syz
