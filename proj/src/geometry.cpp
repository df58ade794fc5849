#include "nivat/geometry.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nivat {

Coord gcd_ll(Coord a, Coord b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Coord t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Vec primitive(const Vec& v) {
  if (v.x == 0 && v.y == 0) throw std::invalid_argument("zero vector has no primitive form");
  Coord g = gcd_ll(v.x, v.y);
  return {v.x / g, v.y / g};
}

std::string to_string(const Point& p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

Coord div_floor(Coord a, Coord b) {
  Coord q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Coord div_ceil(Coord a, Coord b) { return -div_floor(-a, b); }

CellSet make_cell_set(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool cell_set_contains(const CellSet& cells, const Point& p) {
  return std::binary_search(cells.begin(), cells.end(), p);
}

CellSet normalize_cells(const CellSet& cells, Vec* shift_out) {
  if (cells.empty()) {
    if (shift_out) *shift_out = {0, 0};
    return {};
  }
  Coord mx = cells.front().x, my = cells.front().y;
  for (const Point& p : cells) {
    mx = std::min(mx, p.x);
    my = std::min(my, p.y);
  }
  Vec shift{-mx, -my};
  if (shift_out) *shift_out = shift;
  CellSet out;
  out.reserve(cells.size());
  for (const Point& p : cells) out.push_back(p + shift);
  return out;  // order preserved: translation is monotone for row-major order
}

bool is_subset(const CellSet& a, const CellSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string cell_set_key(const CellSet& cells) {
  std::string key;
  key.reserve(cells.size() * 6);
  for (const Point& p : cells) {
    key += std::to_string(p.x);
    key += ',';
    key += std::to_string(p.y);
    key += ';';
  }
  return key;
}

DirectedLine::DirectedLine(Vec dir, Point anchor_pt) : direction(dir), anchor(anchor_pt) {
  if (dir.x == 0 && dir.y == 0) throw std::invalid_argument("line direction must be nonzero");
  if (gcd_ll(dir.x, dir.y) != 1) throw std::invalid_argument("line direction must be primitive");
}

bool DirectedLine::same_line_as(const DirectedLine& o) const {
  return direction == o.direction || direction == -o.direction;
}

Coord ConvexLatticeSet::Edge::lattice_points() const {
  Vec d = to - from;
  return gcd_ll(d.x, d.y) + 1;
}

Coord ConvexLatticeSet::Edge::length2() const {
  Vec d = to - from;
  return dot(d, d);
}

namespace {

// Strict hull, counterclockwise, no collinear vertices.  For collinear
// input returns the two extreme points (or one).
std::vector<Point> strict_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Point> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;  // ccw, starts at the lexicographically smallest point
}

bool hull_has_area(const std::vector<Point>& hull) { return hull.size() >= 3; }

// All lattice points inside a ccw convex polygon, row by row.
CellSet fill_hull(const std::vector<Point>& hull) {
  if (hull.size() == 1) return {hull[0]};
  if (hull.size() == 2) {
    Vec step = primitive(hull[1] - hull[0]);
    Coord g = gcd_ll(hull[1].x - hull[0].x, hull[1].y - hull[0].y);
    CellSet out;
    for (Coord i = 0; i <= g; ++i) out.push_back(hull[0] + step * i);
    return make_cell_set(std::move(out));
  }
  Coord ymin = hull[0].y, ymax = hull[0].y;
  for (const Point& p : hull) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  CellSet out;
  for (Coord y = ymin; y <= ymax; ++y) {
    // Lattice x-range at height y: the polygon's slice is [cL, cR] with
    // cL = min edge crossing, cR = max; ceil/floor commute with min/max,
    // so take min of per-edge ceilings and max of per-edge floors.
    bool have = false;
    Coord xlo = 0, xhi = 0;
    auto consider = [&](Coord lo, Coord hi) {
      if (!have) {
        xlo = lo;
        xhi = hi;
        have = true;
      } else {
        xlo = std::min(xlo, lo);
        xhi = std::max(xhi, hi);
      }
    };
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Point& a = hull[i];
      const Point& b = hull[(i + 1) % hull.size()];
      if (a.y == b.y) {
        if (a.y == y) consider(std::min(a.x, b.x), std::max(a.x, b.x));
        continue;
      }
      Coord lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
      if (y < lo || y > hi) continue;
      // x = a.x + (y-a.y)(b.x-a.x)/(b.y-a.y), exact bounds via floor/ceil
      Coord num = a.x * (b.y - a.y) + (y - a.y) * (b.x - a.x);
      Coord den = b.y - a.y;
      if (den < 0) {
        num = -num;
        den = -den;
      }
      consider(div_ceil(num, den), div_floor(num, den));
    }
    if (!have) continue;
    for (Coord x = xlo; x <= xhi; ++x) out.push_back({x, y});
  }
  return make_cell_set(std::move(out));
}

}  // namespace

ConvexLatticeSet ConvexLatticeSet::hull_of(std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("empty point set");
  std::vector<Point> pts(points.begin(), points.end());
  std::vector<Point> hull = strict_hull(std::move(pts));
  ConvexLatticeSet s;
  s.points_ = fill_hull(hull);
  s.vertices_ = hull;
  if (hull_has_area(hull)) {
    s.edges_.reserve(hull.size());
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Point& a = hull[i];
      const Point& b = hull[(i + 1) % hull.size()];
      s.edges_.push_back(Edge{a, b, primitive(b - a)});
    }
  }
  return s;
}

ConvexLatticeSet ConvexLatticeSet::from_convex_points(std::vector<Point> points) {
  CellSet given = make_cell_set(points);
  ConvexLatticeSet s = hull_of(given);
  if (s.points_ != given) throw std::invalid_argument("point set is not convex");
  return s;
}

bool ConvexLatticeSet::is_vertex(const Point& p) const {
  return std::find(vertices_.begin(), vertices_.end(), p) != vertices_.end();
}

std::vector<ConvexLatticeSet::Edge> ConvexLatticeSet::edges_parallel_to(const Vec& d) const {
  std::vector<Edge> out;
  for (const Edge& e : edges_)
    if (e.direction == d) out.push_back(e);
  return out;
}

ConvexLatticeSet ConvexLatticeSet::remove_vertex(const Point& v) const {
  if (!is_vertex(v)) throw std::invalid_argument("not a boundary vertex");
  if (points_.size() == 1) throw std::invalid_argument("cannot empty the set");
  CellSet rest;
  rest.reserve(points_.size() - 1);
  for (const Point& p : points_)
    if (!(p == v)) rest.push_back(p);
  return hull_of(rest);
}

ConvexLatticeSet ConvexLatticeSet::remove_edge(const Edge& w) const {
  CellSet removed = make_cell_set(edge_cells(w));
  CellSet rest;
  rest.reserve(points_.size());
  for (const Point& p : points_)
    if (!cell_set_contains(removed, p)) rest.push_back(p);
  if (rest.empty()) throw std::invalid_argument("removing edge empties the set");
  return hull_of(rest);
}

ConvexLatticeSet ConvexLatticeSet::translated(const Vec& u) const {
  ConvexLatticeSet s = *this;
  for (Point& p : s.points_) p = p + u;
  for (Point& p : s.vertices_) p = p + u;
  for (Edge& e : s.edges_) {
    e.from = e.from + u;
    e.to = e.to + u;
  }
  return s;
}

ConvexLatticeSet rect(Coord n, Coord k) {
  if (n < 1 || k < 1) throw std::invalid_argument("rectangle sides must be positive");
  std::vector<Point> corners{{0, 0}, {n - 1, 0}, {n - 1, k - 1}, {0, k - 1}};
  return ConvexLatticeSet::hull_of(corners);
}

ConvexLatticeSet convex_hull(std::span<const Point> points) {
  return ConvexLatticeSet::hull_of(points);
}

bool is_convex_cell_set(const CellSet& pts) {
  if (pts.empty()) return false;
  return ConvexLatticeSet::hull_of(pts).points() == pts;
}

std::vector<std::pair<Coord, Coord>> line_lattice_count(const ConvexLatticeSet& s,
                                                        const DirectedLine& l) {
  std::vector<std::pair<Coord, Coord>> counts;
  for (const Point& p : s.points()) {
    Coord off = l.offset(p);
    auto it = std::find_if(counts.begin(), counts.end(),
                           [&](const auto& e) { return e.first == off; });
    if (it == counts.end())
      counts.emplace_back(off, 1);
    else
      ++it->second;
  }
  std::sort(counts.begin(), counts.end());
  return counts;
}

std::vector<Point> edge_cells(const ConvexLatticeSet::Edge& w) {
  std::vector<Point> out;
  Coord g = gcd_ll(w.to.x - w.from.x, w.to.y - w.from.y);
  for (Coord i = 0; i <= g; ++i) out.push_back(w.from + w.direction * i);
  return out;
}

bool is_enveloped(const ConvexLatticeSet& t, const ConvexLatticeSet& s) {
  for (const auto& te : t.edges()) {
    bool ok = false;
    for (const auto& se : s.edges()) {
      if (se.direction == te.direction && te.length2() >= se.length2()) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

ConvexLatticeSet parse_shape_text(const std::string& text, ShapeStrictness mode) {
  std::vector<Point> pts;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    Coord x, y;
    if (ls >> x >> y) {
      std::string extra;
      if (ls >> extra)
        throw std::invalid_argument("shape line " + std::to_string(lineno) +
                                    ": trailing token '" + extra + "'");
      pts.push_back({x, y});
    } else {
      std::string tok;
      std::istringstream probe(line);
      if (probe >> tok)
        throw std::invalid_argument("shape line " + std::to_string(lineno) +
                                    ": expected 'x y', got '" + tok + "'");
    }
  }
  if (pts.empty()) throw std::invalid_argument("empty point set");
  if (mode == ShapeStrictness::reject_nonconvex)
    return ConvexLatticeSet::from_convex_points(std::move(pts));
  return ConvexLatticeSet::hull_of(pts);
}

std::string emit_shape_text(const ConvexLatticeSet& s) {
  std::string out;
  for (const Point& p : s.points()) {
    out += std::to_string(p.x);
    out += ' ';
    out += std::to_string(p.y);
    out += '\n';
  }
  return out;
}

}  // namespace nivat
