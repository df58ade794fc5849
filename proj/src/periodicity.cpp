#include "nivat/periodicity.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace nivat {

namespace {

Coord lcm_ll(Coord a, Coord b) { return a / gcd_ll(a, b) * b; }

// Hermite basis {(a,0),(b,c)} of the subgroup generated by vecs.
std::vector<Vec> hermite_basis(std::vector<Vec> vecs) {
  Coord a = 0;
  Vec u{0, 0};
  auto extgcd = [](Coord x, Coord y, Coord& s, Coord& t) {
    Coord old_r = x, r = y, old_s = 1, ss = 0, old_t = 0, tt = 1;
    while (r != 0) {
      Coord q = old_r / r;
      Coord tmp = old_r - q * r;
      old_r = r;
      r = tmp;
      tmp = old_s - q * ss;
      old_s = ss;
      ss = tmp;
      tmp = old_t - q * tt;
      old_t = tt;
      tt = tmp;
    }
    s = old_s;
    t = old_t;
    return old_r;
  };
  for (const Vec& v : vecs) {
    if (v.x == 0 && v.y == 0) continue;
    if (v.y == 0) {
      a = gcd_ll(a, v.x);
      continue;
    }
    if (u.y == 0) {
      a = gcd_ll(a, u.x);
      u = v;
      continue;
    }
    Coord s, t;
    Coord g = extgcd(u.y, v.y, s, t);
    Vec nu = u * s + v * t;  // y-component g
    Vec rem = v * (u.y / g) - u * (v.y / g);  // y-component 0
    a = gcd_ll(a, rem.x);
    u = nu;
  }
  if (u.y < 0) u = -u;
  if (a < 0) a = -a;
  std::vector<Vec> basis;
  if (a != 0) basis.push_back({a, 0});
  if (u.y != 0) {
    if (a != 0) {
      Coord r = u.x % a;
      if (r < 0) r += a;
      u.x = r;
    }
    basis.push_back(u);
  }
  return basis;
}

}  // namespace

bool PeriodLattice::contains(const Vec& v) const {
  if (v.x == 0 && v.y == 0) return true;
  if (generators.empty()) return false;
  if (generators.size() == 1) {
    const Vec& g = generators[0];
    if (cross(g, v) != 0) return false;
    Coord k = g.x != 0 ? v.x / g.x : v.y / g.y;
    return g * k == v;
  }
  const Vec& ax = generators[0];  // (a, 0)
  const Vec& uv = generators[1];  // (b, c)
  if (v.y % uv.y != 0) return false;
  Coord beta = v.y / uv.y;
  Coord rx = v.x - beta * uv.x;
  return rx % ax.x == 0;
}

std::optional<Coord> PeriodLattice::multiple_along(const Vec& dir) const {
  for (Coord k = 1; k <= 1'000'000; ++k) {
    if (contains(dir * k)) return k;
  }
  return std::nullopt;
}

PeriodLattice period_lattice(const Config& eta) {
  if (eta.kind() != SourceKind::periodic)
    throw std::invalid_argument("period lattice requires a periodic source");
  Coord w = eta.period_w(), h = eta.period_h();
  std::vector<Vec> periods{{w, 0}, {0, h}};
  for (Coord vy = 0; vy < h; ++vy)
    for (Coord vx = 0; vx < w; ++vx) {
      if (vx == 0 && vy == 0) continue;
      bool ok = true;
      for (Coord y = 0; y < h && ok; ++y)
        for (Coord x = 0; x < w; ++x)
          if (eta.at({x, y}) != eta.at({x + vx, y + vy})) {
            ok = false;
            break;
          }
      if (ok) periods.push_back({vx, vy});
    }
  PeriodLattice lat;
  lat.generators = hermite_basis(std::move(periods));
  return lat;
}

RegionPeriodicityReport is_periodic_on_region(const Config& alpha, const CellSet& region,
                                              const Vec& u) {
  RegionPeriodicityReport r;
  r.vector = u;
  r.holds = true;
  for (const Point& p : region) {
    Point q = p + u;
    if (!cell_set_contains(region, q)) continue;
    ++r.checked_pairs;
    if (alpha.at(p) != alpha.at(q)) {
      r.holds = false;
      r.first_violation = p;
      return r;
    }
  }
  return r;
}

RegionPeriodicityReport is_periodic_on_region(const Pattern& alpha, const Vec& u) {
  RegionPeriodicityReport r;
  r.vector = u;
  r.holds = true;
  for (std::size_t i = 0; i < alpha.cells.size(); ++i) {
    Point q = alpha.cells[i] + u;
    auto it = std::lower_bound(alpha.cells.begin(), alpha.cells.end(), q);
    if (it == alpha.cells.end() || !(*it == q)) continue;
    ++r.checked_pairs;
    if (alpha.colors[i] != alpha.colors[static_cast<std::size_t>(it - alpha.cells.begin())]) {
      r.holds = false;
      r.first_violation = alpha.cells[i];
      return r;
    }
  }
  return r;
}

PeriodLattice region_period_lattice(const Config& alpha, const CellSet& region,
                                    Coord search_bound) {
  std::vector<Vec> found;
  for (Coord vy = 0; vy <= search_bound; ++vy)
    for (Coord vx = -search_bound; vx <= search_bound; ++vx) {
      if (vy == 0 && vx <= 0) continue;  // canonical half of the plane
      RegionPeriodicityReport r = is_periodic_on_region(alpha, region, {vx, vy});
      if (r.holds && r.checked_pairs > 0) found.push_back({vx, vy});
    }
  // Keep only verified generators: reduce, then re-verify each basis vector.
  PeriodLattice lat;
  lat.generators = hermite_basis(found);
  std::vector<Vec> verified;
  for (const Vec& g : lat.generators) {
    RegionPeriodicityReport r = is_periodic_on_region(alpha, region, g);
    if (r.holds && r.checked_pairs > 0) verified.push_back(g);
  }
  lat.generators = std::move(verified);
  return lat;
}

MorseHedlundVerdict morse_hedlund_1d(const std::vector<Symbol>& word, TreatAs treat) {
  if (word.empty()) throw std::invalid_argument("word must be nonempty");
  MorseHedlundVerdict v;
  const Coord len = static_cast<Coord>(word.size());
  if (treat == TreatAs::periodic) {
    for (Coord m = 1; m <= len; ++m) {
      std::set<std::vector<Symbol>> factors;
      for (Coord i = 0; i < len; ++i) {
        std::vector<Symbol> f(static_cast<std::size_t>(m));
        for (Coord j = 0; j < m; ++j) f[j] = word[(i + j) % len];
        factors.insert(std::move(f));
      }
      v.complexity.push_back(static_cast<long long>(factors.size()));
      if (!v.first_low_n && static_cast<Coord>(factors.size()) <= m) {
        v.first_low_n = m;
        v.period = static_cast<Coord>(factors.size());
      }
    }
    return v;
  }
  // One-sided finite window.
  v.truncated = true;
  for (Coord m = 1; m <= len; ++m) {
    std::set<std::vector<Symbol>> factors;
    for (Coord i = 0; i + m <= len; ++i)
      factors.insert(std::vector<Symbol>(word.begin() + i, word.begin() + i + m));
    v.complexity.push_back(static_cast<long long>(factors.size()));
    if (!v.first_low_n && static_cast<Coord>(factors.size()) <= m) v.first_low_n = m;
  }
  // Minimal (preperiod, period), requiring two full periods in the window.
  for (Coord pre = 0; pre < len && !v.eventual; ++pre)
    for (Coord p = 1; pre + 2 * p <= len; ++p) {
      bool ok = true;
      for (Coord i = pre; i + p < len; ++i)
        if (word[i] != word[i + p]) {
          ok = false;
          break;
        }
      if (ok) {
        v.eventual = {pre, p};
        break;
      }
    }
  return v;
}

Coord brute_minimal_period(const std::vector<Symbol>& word) {
  const Coord len = static_cast<Coord>(word.size());
  for (Coord d = 1; d <= len; ++d) {
    bool ok = true;
    for (Coord i = 0; i < len; ++i)
      if (word[i] != word[(i + d) % len]) {
        ok = false;
        break;
      }
    if (ok) return d;
  }
  return len;
}

StripBoundReport strip_period_bound_check(const Config& eta, const BalancedCertificate& cert,
                                          const Rect& window) {
  if (!cert.balanced()) throw std::invalid_argument("certificate is not balanced");
  StripBoundReport report;
  report.edge_cells = cert.edge_cells;
  const DirectedLine& l = cert.line;
  ConvexLatticeSet base = cert.set.remove_edge(*cert.edge);

  // Offset interval of the thinnest strip containing S \ w.
  Coord o_lo = l.offset(base.points().front()), o_hi = o_lo;
  for (const Point& p : base.points()) {
    o_lo = std::min(o_lo, l.offset(p));
    o_hi = std::max(o_hi, l.offset(p));
  }

  // Fiber sizes of the restriction W(S) -> W(S \ w).
  ExtensionFan fan = extension_fan(eta, base.points(), cert.set.points());
  std::map<std::vector<Symbol>, std::size_t> fiber_size;
  for (const auto& [b, exts] : fan.fibers) fiber_size[b] = exts.size();
  Vec base_shift;
  CellSet base_norm = normalize_cells(base.points(), &base_shift);

  // Window cells grouped by line offset.
  std::map<Coord, std::vector<Point>> by_offset;
  for (Coord y = window.y0; y < window.y0 + window.h; ++y)
    for (Coord x = window.x0; x < window.x0 + window.w; ++x) {
      Point p{x, y};
      if (eta.defined_at(p)) by_offset[l.offset(p)].push_back(p);
    }

  // Translates of the base set inside the window, grouped by strip row.
  std::map<Coord, std::vector<Vec>> row_translates;
  {
    Coord bx0 = base.points().front().x, bx1 = bx0, by0 = base.points().front().y, by1 = by0;
    for (const Point& p : base.points()) {
      bx0 = std::min(bx0, p.x);
      bx1 = std::max(bx1, p.x);
      by0 = std::min(by0, p.y);
      by1 = std::max(by1, p.y);
    }
    for (Coord uy = window.y0 - by0; uy + by1 < window.y0 + window.h; ++uy)
      for (Coord ux = window.x0 - bx0; ux + bx1 < window.x0 + window.w; ++ux) {
        Vec u{ux, uy};
        bool inside = true;
        for (const Point& p : base.points())
          if (!eta.defined_at(p + u)) {
            inside = false;
            break;
          }
        if (inside) row_translates[l.offset(u)].push_back(u);
      }
  }

  for (const auto& [t, translates] : row_translates) {
    StripRowCheck row;
    row.row_offset = t;
    row.positions = static_cast<long long>(translates.size());
    bool all_non_unique = true;
    bool any_unknown = false;
    for (const Vec& u : translates) {
      std::vector<Symbol> colors;
      colors.reserve(base_norm.size());
      for (const Point& p : base.points()) colors.push_back(eta.at(p + u));
      // Reorder into the fan's normalized scan order.
      std::vector<Symbol> key(colors.size());
      for (std::size_t i = 0; i < base.points().size(); ++i) {
        Point q = base.points()[i] + base_shift;
        auto it = std::lower_bound(base_norm.begin(), base_norm.end(), q);
        key[static_cast<std::size_t>(it - base_norm.begin())] = colors[i];
      }
      auto fs = fiber_size.find(key);
      if (fs == fiber_size.end())
        any_unknown = true;
      else if (fs->second <= 1)
        all_non_unique = false;
    }
    row.all_non_unique = all_non_unique;
    row.any_unknown = any_unknown;
    row.bound = all_non_unique ? cert.edge_cells - 1 : 2 * cert.edge_cells - 2;

    // Strip-row region: window cells whose offsets land in the shifted
    // strip interval.
    CellSet region;
    for (Coord o = o_lo + t; o <= o_hi + t; ++o) {
      auto it = by_offset.find(o);
      if (it != by_offset.end())
        region.insert(region.end(), it->second.begin(), it->second.end());
    }
    region = make_cell_set(std::move(region));
    Coord cap = std::max<Coord>(window.w, window.h);
    for (Coord k = 1; k <= cap; ++k) {
      RegionPeriodicityReport r = is_periodic_on_region(eta, region, l.direction * k);
      if (r.holds && r.checked_pairs > 0) {
        row.period = k;
        break;
      }
    }
    row.testable = !any_unknown && row.positions > 0 && row.period.has_value();
    row.violation = row.testable && *row.period > row.bound;
    if (!any_unknown && row.positions > 0 && !row.period && cap > row.bound)
      row.violation = true;  // had room to observe a period within the bound
    if (row.violation) report.any_violation = true;
    report.rows.push_back(row);
  }
  return report;
}

PropagationReport periodic_strip_propagation_check(const Config& eta, const DirectedLine& l,
                                                   const ConvexLatticeSet& s,
                                                   const ConvexLatticeSet::Edge& w) {
  if (eta.kind() != SourceKind::periodic)
    throw std::invalid_argument("propagation check requires a periodic source");
  ConvexLatticeSet base = s.remove_edge(w);
  Coord o_lo = l.offset(base.points().front()), o_hi = o_lo;
  for (const Point& p : base.points()) {
    o_lo = std::min(o_lo, l.offset(p));
    o_hi = std::max(o_hi, l.offset(p));
  }
  Coord pw = eta.period_w(), ph = eta.period_h();
  Vec d = l.direction;
  // Order of the direction step modulo the fundamental lattice.
  Coord m = lcm_ll(d.x == 0 ? 1 : pw / gcd_ll(d.x, pw), d.y == 0 ? 1 : ph / gcd_ll(d.y, ph));
  PropagationReport rep;
  // Exact minimal k with eta(u + k d) = eta(u) on the whole strip: check a
  // transversal of each line in the strip.
  for (Coord k = 1; k <= m; ++k) {
    bool ok = true;
    for (Coord o = o_lo; o <= o_hi && ok; ++o) {
      // Any lattice point on the offset-o line.
      Point p0;
      {
        // Solve cross(d, p) = o, reuse the strip machinery cheaply.
        // gcd(d.x, d.y) = 1 gives p0 = o * (s, t) with d.x*t - d.y*s = 1.
        Coord s, t;
        Coord a = d.x, b = -d.y;
        Coord old_r = a, r = b, old_x = 1, xx = 0, old_y = 0, yy = 1;
        while (r != 0) {
          Coord q = old_r / r;
          Coord tmp = old_r - q * r;
          old_r = r;
          r = tmp;
          tmp = old_x - q * xx;
          old_x = xx;
          xx = tmp;
          tmp = old_y - q * yy;
          old_y = yy;
          yy = tmp;
        }
        t = old_x * old_r;
        s = old_y * old_r;
        p0 = Point{s * o, t * o} + l.anchor;
      }
      for (Coord j = 0; j < m; ++j) {
        Point u = p0 + d * j;
        if (eta.at(u + d * k) != eta.at(u)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      rep.strip_period = k;
      break;
    }
  }
  PeriodLattice lat = period_lattice(eta);
  if (auto k = lat.multiple_along(d)) rep.global_multiple = *k;
  rep.holds = rep.strip_period > 0 && rep.global_multiple > 0;
  return rep;
}

}  // namespace nivat
