#pragma once

// Brute-force reference implementations used only by tests.  These stay
// independent of the library's algorithms: membership in a convex hull is
// decided by Caratheodory triangles, periods by direct checking.

#include <set>
#include <vector>

#include "nivat/configuration.hpp"
#include "nivat/geometry.hpp"
#include "nivat/rng.hpp"

namespace oracle {

using nivat::CellSet;
using nivat::Coord;
using nivat::Point;
using nivat::Vec;

inline bool on_segment(const Point& a, const Point& b, const Point& p) {
  if (nivat::cross(b - a, p - a) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool in_triangle(const Point& a, const Point& b, const Point& c, const Point& p) {
  Coord d1 = nivat::cross(b - a, p - a);
  Coord d2 = nivat::cross(c - b, p - b);
  Coord d3 = nivat::cross(a - c, p - c);
  bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(has_neg && has_pos);
}

// p in conv(pts), by Caratheodory: p lies on a segment or in a triangle
// spanned by input points.
inline bool point_in_hull(const std::vector<Point>& pts, const Point& p) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] == p) return true;
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (on_segment(pts[i], pts[j], p)) return true;
      for (std::size_t k = j + 1; k < pts.size(); ++k)
        if (in_triangle(pts[i], pts[j], pts[k], p)) return true;
    }
  }
  return false;
}

// conv(pts) ∩ Z^2 by exhaustive bounding-box scan.
inline CellSet hull_points(const std::vector<Point>& pts) {
  Coord x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
  for (const Point& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  CellSet out;
  for (Coord y = y0; y <= y1; ++y)
    for (Coord x = x0; x <= x1; ++x)
      if (point_in_hull(pts, {x, y})) out.push_back({x, y});
  return nivat::make_cell_set(std::move(out));
}

// Distinct factors of length m in a finite word.
inline long long factor_count(const std::vector<nivat::Symbol>& word, std::size_t m) {
  std::set<std::vector<nivat::Symbol>> factors;
  for (std::size_t i = 0; i + m <= word.size(); ++i)
    factors.insert(std::vector<nivat::Symbol>(word.begin() + i, word.begin() + i + m));
  return static_cast<long long>(factors.size());
}

// Random periodic configuration over at most `symbols` symbols.
inline nivat::Config random_periodic(nivat::CounterRng& rng, Coord max_side, int symbols) {
  Coord w = rng.range(1, max_side), h = rng.range(1, max_side);
  std::vector<std::string> toks;
  for (int i = 0; i < symbols; ++i) toks.push_back(std::to_string(i));
  std::vector<nivat::Symbol> grid;
  for (Coord i = 0; i < w * h; ++i)
    grid.push_back(static_cast<nivat::Symbol>(rng.below(symbols)));
  return nivat::Config::periodic(nivat::Alphabet(toks), w, h, std::move(grid));
}

}  // namespace oracle
