#include "nivat/complexity.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "json.hpp"

namespace nivat {

bool PatternSet::contains(const std::vector<Symbol>& colors) const {
  return std::binary_search(patterns.begin(), patterns.end(), colors);
}

int effective_workers(int workers) {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("NIVAT_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

TranslateRange admissible_translates(const Config& eta, const CellSet& shape) {
  Coord sx0 = shape.front().x, sx1 = shape.front().x;
  Coord sy0 = shape.front().y, sy1 = shape.front().y;
  for (const Point& p : shape) {
    sx0 = std::min(sx0, p.x);
    sx1 = std::max(sx1, p.x);
    sy0 = std::min(sy0, p.y);
    sy1 = std::max(sy1, p.y);
  }
  switch (eta.kind()) {
    case SourceKind::periodic:
      return {0, 0, eta.period_w(), eta.period_h()};
    case SourceKind::window:
    case SourceKind::wordlift:
    case SourceKind::substitution: {
      Rect r = *eta.domain_rect();
      Coord w = r.w - (sx1 - sx0);
      Coord h = r.h - (sy1 - sy0);
      if (w <= 0 || h <= 0) return {0, 0, 0, 0};
      return {r.x0 - sx0, r.y0 - sy0, w, h};
    }
    case SourceKind::cellmap: {
      CellSet dom = *eta.domain_cells();
      Coord dx0 = dom.front().x, dx1 = dom.front().x;
      Coord dy0 = dom.front().y, dy1 = dom.front().y;
      for (const Point& p : dom) {
        dx0 = std::min(dx0, p.x);
        dx1 = std::max(dx1, p.x);
        dy0 = std::min(dy0, p.y);
        dy1 = std::max(dy1, p.y);
      }
      Coord w = (dx1 - dx0) - (sx1 - sx0) + 1;
      Coord h = (dy1 - dy0) - (sy1 - sy0) + 1;
      if (w <= 0 || h <= 0) return {0, 0, 0, 0};
      return {dx0 - sx0, dy0 - sy0, w, h};
    }
  }
  return {0, 0, 0, 0};
}

namespace {

std::string shape_descriptor(const CellSet& shape) {
  Coord sx1 = 0, sy1 = 0;
  for (const Point& p : shape) {
    sx1 = std::max(sx1, p.x);
    sy1 = std::max(sy1, p.y);
  }
  bool full = static_cast<Coord>(shape.size()) == (sx1 + 1) * (sy1 + 1);
  if (full) return "R_{" + std::to_string(sx1 + 1) + "," + std::to_string(sy1 + 1) + "}";
  return "shape[" + std::to_string(shape.size()) + " cells]";
}

}  // namespace

PatternSet words(const Config& eta, const CellSet& shape, int workers) {
  if (shape.empty()) {
    PatternSet ps;
    ps.patterns = {{}};
    ps.exhaustive = eta.exhaustive();
    return ps;
  }
  CellSet norm = normalize_cells(shape);
  TranslateRange range = admissible_translates(eta, norm);
  if (range.count() == 0) throw std::invalid_argument("shape exceeds domain");

  const bool cellmap = eta.kind() == SourceKind::cellmap;
  auto scan_rows = [&](Coord row_begin, Coord row_end,
                       std::unordered_set<std::string>& sink, long long& scanned) {
    std::string key(norm.size(), '\0');
    for (Coord uy = row_begin; uy < row_end; ++uy)
      for (Coord ux = range.x0; ux < range.x0 + range.w; ++ux) {
        bool ok = true;
        for (std::size_t i = 0; i < norm.size(); ++i) {
          Point cell{norm[i].x + ux, norm[i].y + uy};
          if (cellmap && !eta.defined_at(cell)) {
            ok = false;
            break;
          }
          key[i] = static_cast<char>(eta.at(cell));
        }
        if (!ok) continue;
        ++scanned;
        sink.insert(key);
      }
  };

  int nworkers = effective_workers(workers);
  nworkers = static_cast<int>(std::min<long long>(nworkers, range.h));
  std::unordered_set<std::string> merged;
  long long scanned = 0;
  if (nworkers <= 1) {
    scan_rows(range.y0, range.y0 + range.h, merged, scanned);
  } else {
    std::vector<std::unordered_set<std::string>> sets(nworkers);
    std::vector<long long> counts(nworkers, 0);
    std::vector<std::thread> threads;
    Coord rows = range.h;
    for (int t = 0; t < nworkers; ++t) {
      Coord b = range.y0 + rows * t / nworkers;
      Coord e = range.y0 + rows * (t + 1) / nworkers;
      threads.emplace_back([&, t, b, e] { scan_rows(b, e, sets[t], counts[t]); });
    }
    for (auto& th : threads) th.join();
    for (int t = 0; t < nworkers; ++t) {
      scanned += counts[t];
      merged.merge(sets[t]);
    }
  }
  if (scanned == 0) throw std::invalid_argument("shape exceeds domain");

  PatternSet ps;
  ps.shape = std::move(norm);
  ps.translate_count = scanned;
  ps.exhaustive = eta.exhaustive();
  ps.patterns.reserve(merged.size());
  for (const auto& key : merged) {
    std::vector<Symbol> colors(key.begin(), key.end());
    ps.patterns.push_back(std::move(colors));
  }
  std::sort(ps.patterns.begin(), ps.patterns.end());
  return ps;
}

PatternSet words(const Config& eta, const ConvexLatticeSet& shape, int workers) {
  return words(eta, shape.points(), workers);
}

long long pattern_count(const Config& eta, const CellSet& shape) {
  return words(eta, shape).count();
}

long long discrepancy(const Config& eta, const CellSet& shape) {
  return pattern_count(eta, shape) - static_cast<long long>(shape.size());
}

ComplexityReport complexity(const Config& eta, const ConvexLatticeSet& shape) {
  PatternSet ps = words(eta, shape);
  ComplexityReport r;
  r.shape_desc = shape_descriptor(ps.shape);
  r.pattern_count = ps.count();
  r.cells = static_cast<long long>(shape.size());
  r.discrepancy = r.pattern_count - r.cells;
  r.translate_count = ps.translate_count;
  r.exhaustive = ps.exhaustive;
  return r;
}

ComplexityReport rect_complexity(const Config& eta, Coord n, Coord k) {
  return complexity(eta, rect(n, k));
}

std::vector<ProfileRow> complexity_profile(const Config& eta, Coord n_max, Coord k) {
  std::vector<ProfileRow> rows;
  rows.reserve(n_max);
  for (Coord n = 1; n <= n_max; ++n) {
    ComplexityReport r = rect_complexity(eta, n, k);
    ProfileRow row;
    row.n = n;
    row.k = k;
    row.pattern_count = r.pattern_count;
    row.bound = n * k;
    row.discrepancy = r.discrepancy;
    row.within_bound = r.pattern_count <= row.bound;
    row.exhaustive = r.exhaustive;
    rows.push_back(row);
  }
  return rows;
}

std::string profile_csv(const std::vector<ProfileRow>& rows) {
  std::string out = "n,k,P,bound,D,exhaustive\n";
  for (const ProfileRow& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.k) + "," +
           std::to_string(r.pattern_count) + "," + std::to_string(r.bound) + "," +
           std::to_string(r.discrepancy) + "," + (r.exhaustive ? "true" : "false") + "\n";
  }
  return out;
}

std::string profile_json(const std::vector<ProfileRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ProfileRow& r : rows) {
    nlohmann::json j;
    j["n"] = r.n;
    j["k"] = r.k;
    j["P"] = r.pattern_count;
    j["bound"] = r.bound;
    j["D"] = r.discrepancy;
    j["within_bound"] = r.within_bound;
    j["exhaustive"] = r.exhaustive;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::string profile_svg(const std::vector<ProfileRow>& rows) {
  // Integer-coordinate polylines: P(n) and the n*k bound.
  const long long width = 640, height = 400, margin = 40;
  long long max_y = 1;
  for (const ProfileRow& r : rows)
    max_y = std::max({max_y, r.pattern_count, r.bound});
  long long max_x = rows.empty() ? 1 : rows.back().n;
  auto sx = [&](long long n) {
    return margin + (max_x <= 1 ? 0 : (n - 1) * (width - 2 * margin) / (max_x - 1));
  };
  auto sy = [&](long long v) { return height - margin - v * (height - 2 * margin) / max_y; };
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
      "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  auto polyline = [&](const std::string& color, bool bound) {
    std::string pts;
    for (const ProfileRow& r : rows) {
      pts += std::to_string(sx(r.n)) + "," +
             std::to_string(sy(bound ? r.bound : r.pattern_count)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"" + pts + "\"/>\n";
  };
  polyline("steelblue", false);
  polyline("firebrick", true);
  svg += "<text x=\"" + std::to_string(margin) + "\" y=\"20\">P(n,k) vs n*k</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace nivat
