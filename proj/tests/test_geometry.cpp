#include <stdexcept>

#include "doctest.h"
#include "nivat/geometry.hpp"
#include "nivat/rng.hpp"
#include "oracles.hpp"

using namespace nivat;

TEST_CASE("hull of axis-aligned square corners fills the square") {
  std::vector<Point> corners{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
  ConvexLatticeSet s = convex_hull(corners);
  CHECK(s.size() == 9);
  CHECK(s.vertices().size() == 4);
  CHECK(s.edges().size() == 4);
}

TEST_CASE("hull of a singleton") {
  std::vector<Point> pts{{0, 0}};
  ConvexLatticeSet s = convex_hull(pts);
  CHECK(s.size() == 1);
  CHECK(s.vertices() == std::vector<Point>{{0, 0}});
  CHECK(s.edges().empty());
}

TEST_CASE("hull of a slanted triangle matches the brute-force oracle") {
  std::vector<Point> pts{{0, 0}, {3, 1}, {1, 3}};
  ConvexLatticeSet s = convex_hull(pts);
  CHECK(s.points() == oracle::hull_points(pts));
  CHECK(s.size() == 7);
  CHECK(s.contains({1, 1}));
  CHECK(s.contains({2, 2}));  // boundary point of the slanted edge
}

TEST_CASE("empty input is rejected") {
  std::vector<Point> none;
  CHECK_THROWS_WITH_AS(convex_hull(none), "empty point set", std::invalid_argument);
}

TEST_CASE("boundary edges of a rectangle run counterclockwise") {
  ConvexLatticeSet r23 = rect(2, 3);
  auto edges = r23.edges();
  REQUIRE(edges.size() == 4);
  std::vector<Vec> dirs;
  for (const auto& e : edges) dirs.push_back(e.direction);
  CHECK(std::count(dirs.begin(), dirs.end(), Vec{1, 0}) == 1);
  CHECK(std::count(dirs.begin(), dirs.end(), Vec{0, 1}) == 1);
  CHECK(std::count(dirs.begin(), dirs.end(), Vec{-1, 0}) == 1);
  CHECK(std::count(dirs.begin(), dirs.end(), Vec{0, -1}) == 1);
}

TEST_CASE("collinear sets have no edges") {
  std::vector<Point> seg{{0, 0}, {1, 0}, {2, 0}};
  ConvexLatticeSet s = convex_hull(seg);
  CHECK(s.edges().empty());
  CHECK(s.vertices().size() == 2);
}

TEST_CASE("hexagon edges come in antiparallel pairs") {
  std::vector<Point> pts;
  for (Coord y = 0; y < 3; ++y)
    for (Coord x = 0; x < 3; ++x)
      if (!((x == 0 && y == 0) || (x == 2 && y == 2))) pts.push_back({x, y});
  ConvexLatticeSet hex = ConvexLatticeSet::from_convex_points(pts);
  auto edges = hex.edges();
  REQUIRE(edges.size() == 6);
  CHECK(hex.points() == oracle::hull_points(pts));
  int pairs = 0;
  for (const auto& a : edges)
    for (const auto& b : edges)
      if (a.direction == -b.direction) ++pairs;
  CHECK(pairs == 6);  // each edge finds exactly one antiparallel partner
}

TEST_CASE("remove_vertex keeps the set convex") {
  ConvexLatticeSet r22 = rect(2, 2);
  ConvexLatticeSet l = r22.remove_vertex({0, 0});
  CHECK(l.size() == 3);
  CHECK(is_convex_cell_set(l.points()));

  ConvexLatticeSet seg = convex_hull(std::vector<Point>{{0, 0}, {1, 0}});
  ConvexLatticeSet single = seg.remove_vertex({1, 0});
  CHECK(single.points() == CellSet{{0, 0}});

  ConvexLatticeSet r23 = rect(2, 3);
  CHECK_THROWS_WITH_AS(r23.remove_vertex({1, 1}), "not a boundary vertex",
                       std::invalid_argument);
}

TEST_CASE("line_lattice_count matches the stated examples") {
  ConvexLatticeSet r23 = rect(2, 3);
  SUBCASE("vertical lines") {
    auto counts = line_lattice_count(r23, DirectedLine{{0, 1}});
    REQUIRE(counts.size() == 2);
    CHECK(counts[0].second == 3);
    CHECK(counts[1].second == 3);
  }
  SUBCASE("diagonal lines") {
    auto counts = line_lattice_count(r23, DirectedLine{{1, 1}});
    REQUIRE(counts.size() == 4);
    std::vector<Coord> cs;
    for (auto& [off, c] : counts) cs.push_back(c);
    CHECK(cs == std::vector<Coord>{1, 2, 2, 1});
  }
  SUBCASE("singleton") {
    ConvexLatticeSet one = convex_hull(std::vector<Point>{{5, 7}});
    auto counts = line_lattice_count(one, DirectedLine{{2, 1}});
    REQUIRE(counts.size() == 1);
    CHECK(counts[0].second == 1);
  }
}

TEST_CASE("line counts always total the set size") {
  CounterRng rng(11);
  for (int t = 0; t < 30; ++t) {
    std::vector<Point> pts;
    int m = 1 + static_cast<int>(rng.below(6));
    for (int i = 0; i < m; ++i) pts.push_back({rng.range(-4, 4), rng.range(-4, 4)});
    ConvexLatticeSet s = convex_hull(pts);
    for (Vec d : {Vec{1, 0}, Vec{0, 1}, Vec{1, 1}, Vec{2, -1}, Vec{1, -3}}) {
      auto counts = line_lattice_count(s, DirectedLine{d});
      Coord total = 0;
      for (auto& [off, c] : counts) total += c;
      CHECK(total == static_cast<Coord>(s.size()));
    }
  }
}

TEST_CASE("is_enveloped compares directed edges and lengths") {
  ConvexLatticeSet r23 = rect(2, 3);
  std::vector<Point> doubled;
  for (const Point& p : r23.points()) doubled.push_back({p.x * 2, p.y * 2});
  ConvexLatticeSet big = convex_hull(doubled);
  CHECK(is_enveloped(big, r23));

  ConvexLatticeSet tri = convex_hull(std::vector<Point>{{0, 0}, {3, 0}, {0, 3}});
  CHECK_FALSE(is_enveloped(tri, r23));

  ConvexLatticeSet r32 = rect(3, 2);
  CHECK_FALSE(is_enveloped(r32, r23));
}

TEST_CASE("hull construction is idempotent") {
  CounterRng rng(7);
  for (int t = 0; t < 50; ++t) {
    std::vector<Point> pts;
    int m = 1 + static_cast<int>(rng.below(7));
    for (int i = 0; i < m; ++i) pts.push_back({rng.range(-5, 5), rng.range(-5, 5)});
    ConvexLatticeSet s = convex_hull(pts);
    ConvexLatticeSet again = convex_hull(s.points());
    CHECK(s.points() == again.points());
    CHECK(s.points() == oracle::hull_points(pts));
  }
}

TEST_CASE("random vertex removal keeps convexity") {
  CounterRng rng(13);
  for (int t = 0; t < 40; ++t) {
    std::vector<Point> pts;
    int m = 2 + static_cast<int>(rng.below(6));
    for (int i = 0; i < m; ++i) pts.push_back({rng.range(0, 5), rng.range(0, 5)});
    ConvexLatticeSet s = convex_hull(pts);
    if (s.size() < 2) continue;
    const Point& v = s.vertices()[rng.below(s.vertices().size())];
    CHECK(is_convex_cell_set(s.remove_vertex(v).points()));
  }
}

TEST_CASE("hull boundary turns left and closes up") {
  CounterRng rng(17);
  for (int t = 0; t < 40; ++t) {
    std::vector<Point> pts;
    int m = 3 + static_cast<int>(rng.below(6));
    for (int i = 0; i < m; ++i) pts.push_back({rng.range(-6, 6), rng.range(-6, 6)});
    ConvexLatticeSet s = convex_hull(pts);
    auto edges = s.edges();
    if (edges.empty()) continue;
    Vec sum{0, 0};
    for (std::size_t i = 0; i < edges.size(); ++i) {
      Vec a = edges[i].to - edges[i].from;
      Vec b = edges[(i + 1) % edges.size()].to - edges[(i + 1) % edges.size()].from;
      CHECK(cross(a, b) > 0);
      sum = sum + a;
    }
    CHECK(sum == Vec{0, 0});
  }
}

TEST_CASE("antiparallel is an involution") {
  DirectedLine l{{3, -2}, {1, 4}};
  CHECK(l.antiparallel().antiparallel() == l);
  CHECK(l.antiparallel().direction == Vec{-3, 2});
  CHECK(l.antiparallel().anchor == l.anchor);
}

TEST_CASE("shape files round-trip and honor strictness") {
  ConvexLatticeSet r23 = rect(2, 3);
  std::string text = emit_shape_text(r23);
  ConvexLatticeSet parsed = parse_shape_text(text, ShapeStrictness::reject_nonconvex);
  CHECK(parsed.points() == r23.points());

  std::string sparse = "# corners only\n0 0\n2 0 # inline comment\n0 2\n2 2\n";
  CHECK_THROWS_AS(parse_shape_text(sparse, ShapeStrictness::reject_nonconvex),
                  std::invalid_argument);
  ConvexLatticeSet completed = parse_shape_text(sparse, ShapeStrictness::complete);
  CHECK(completed.size() == 9);
}
