#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nivat {

using Coord = long long;

// Lattice point / integer vector.  Ordered row-major: by y, then x.
struct Point {
  Coord x = 0;
  Coord y = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend bool operator<(const Point& a, const Point& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  }
  Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
  Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
  Point operator-() const { return {-x, -y}; }
  Point operator*(Coord k) const { return {x * k, y * k}; }
};
using Vec = Point;

inline Coord cross(const Vec& a, const Vec& b) { return a.x * b.y - a.y * b.x; }
inline Coord dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y; }

Coord gcd_ll(Coord a, Coord b);

// v divided by gcd of its components; throws on the zero vector.
Vec primitive(const Vec& v);

std::string to_string(const Point& p);

// Floor/ceil division with sign handled for negative operands.
Coord div_floor(Coord a, Coord b);
Coord div_ceil(Coord a, Coord b);

// A set of cells, kept sorted row-major and unique.
using CellSet = std::vector<Point>;

CellSet make_cell_set(std::vector<Point> pts);
bool cell_set_contains(const CellSet& cells, const Point& p);
// Translate of min corner (componentwise min) to the origin.
CellSet normalize_cells(const CellSet& cells, Vec* shift_out = nullptr);
bool is_subset(const CellSet& a, const CellSet& b);
std::string cell_set_key(const CellSet& cells);

// Directed rational line: a primitive direction plus an anchor point it
// passes through.  Cells strictly to the left of the direction of travel
// have positive offset.
struct DirectedLine {
  Vec direction{1, 0};
  Point anchor{0, 0};

  DirectedLine() = default;
  DirectedLine(Vec dir, Point anchor_pt = {0, 0});

  DirectedLine antiparallel() const { return DirectedLine{-direction, anchor}; }
  // Signed lattice offset of p: cross(direction, p - anchor).
  Coord offset(const Point& p) const { return cross(direction, p - anchor); }
  Coord norm2() const { return dot(direction, direction); }
  // Same undirected line direction (parallel or antiparallel).
  bool same_line_as(const DirectedLine& o) const;

  friend bool operator==(const DirectedLine&, const DirectedLine&) = default;
};

// Finite convex subset of Z^2: the set equals conv(points) ∩ Z^2.
// Hull vertices are stored counterclockwise; if the hull has zero area
// the edge list is empty and the vertices are the segment endpoints.
class ConvexLatticeSet {
 public:
  struct Edge {
    Point from;
    Point to;
    Vec direction;  // primitive step from `from` toward `to`
    // Number of integer points on the closed segment.
    Coord lattice_points() const;
    Coord length2() const;  // squared Euclidean length
  };

  ConvexLatticeSet() = default;  // empty placeholder; fill via the factories

  // conv(points) ∩ Z^2.  Throws std::invalid_argument on empty input.
  static ConvexLatticeSet hull_of(std::span<const Point> points);
  // Wraps a point set that must already be convex; throws otherwise.
  static ConvexLatticeSet from_convex_points(std::vector<Point> points);

  const CellSet& points() const { return points_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return points_.size(); }
  bool contains(const Point& p) const { return cell_set_contains(points_, p); }
  bool zero_area() const { return edges_.empty(); }
  bool is_vertex(const Point& p) const;

  const std::vector<Edge>& edges() const { return edges_; }
  // Edges whose direction equals d (directed comparison).
  std::vector<Edge> edges_parallel_to(const Vec& d) const;

  // S \ {v} for a hull vertex v; the result is convex.  Throws
  // std::invalid_argument("not a boundary vertex") otherwise.
  ConvexLatticeSet remove_vertex(const Point& v) const;
  // S minus all lattice points of edge w (which must be an edge of S).
  ConvexLatticeSet remove_edge(const Edge& w) const;

  ConvexLatticeSet translated(const Vec& u) const;

  friend bool operator==(const ConvexLatticeSet& a, const ConvexLatticeSet& b) {
    return a.points_ == b.points_;
  }

 private:
  CellSet points_;
  std::vector<Point> vertices_;
  std::vector<Edge> edges_;
};

// n by k axis-aligned rectangle [0,n-1] x [0,k-1]; n, k >= 1.
ConvexLatticeSet rect(Coord n, Coord k);

ConvexLatticeSet convex_hull(std::span<const Point> points);
// True when conv(pts) ∩ Z^2 adds no points, i.e. pts is already convex.
bool is_convex_cell_set(const CellSet& pts);

// For every translate of l meeting S: (canonical offset, number of points
// of S on that translate), sorted by offset.
std::vector<std::pair<Coord, Coord>> line_lattice_count(const ConvexLatticeSet& s,
                                                        const DirectedLine& l);

// Integer points on the closed segment of edge w.
std::vector<Point> edge_cells(const ConvexLatticeSet::Edge& w);

// T is enveloped by S when T is convex and every edge of T is parallel to
// some edge of S of no greater length.
bool is_enveloped(const ConvexLatticeSet& t, const ConvexLatticeSet& s);

// Shape file I/O: one "x y" pair per line, '#' starts a comment.
enum class ShapeStrictness { reject_nonconvex, complete };
ConvexLatticeSet parse_shape_text(const std::string& text, ShapeStrictness mode);
std::string emit_shape_text(const ConvexLatticeSet& s);

}  // namespace nivat
