#include "nivat/extension.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace nivat {

long long ExtensionFan::ext_count() const {
  long long total = 0;
  for (const auto& [base, exts] : fibers) total += static_cast<long long>(exts.size());
  return total;
}

long long ExtensionFan::non_unique_count() const {
  long long n = 0;
  for (const auto& [base, exts] : fibers)
    if (exts.size() > 1) ++n;
  return n;
}

std::size_t ExtensionFan::max_fiber() const {
  std::size_t m = 0;
  for (const auto& [base, exts] : fibers) m = std::max(m, exts.size());
  return m;
}

ExtensionFan extension_fan(const Config& eta, const CellSet& s1, const CellSet& s2) {
  if (!is_subset(s1, s2) || s1.size() >= s2.size())
    throw std::invalid_argument("base shape must be a proper subset of the extension");
  PatternSet ext = words(eta, s2);
  // Positions of s1 cells inside the normalized s2 scan order.
  Vec shift;
  CellSet norm2 = normalize_cells(s2, &shift);
  std::vector<std::size_t> base_idx;
  base_idx.reserve(s1.size());
  for (const Point& p : s1) {
    Point q = p + shift;
    auto it = std::lower_bound(norm2.begin(), norm2.end(), q);
    base_idx.push_back(static_cast<std::size_t>(it - norm2.begin()));
  }
  std::map<std::vector<Symbol>, std::vector<std::vector<Symbol>>> fibers;
  for (const auto& pat : ext.patterns) {
    std::vector<Symbol> base;
    base.reserve(base_idx.size());
    for (std::size_t i : base_idx) base.push_back(pat[i]);
    fibers[std::move(base)].push_back(pat);
  }
  ExtensionFan fan;
  CellSet base_cells;
  for (std::size_t i : base_idx) base_cells.push_back(norm2[i]);
  fan.base_shape = make_cell_set(std::move(base_cells));
  fan.ext_shape = std::move(norm2);
  fan.translate_count = ext.translate_count;
  fan.exhaustive = ext.exhaustive;
  fan.fibers.reserve(fibers.size());
  for (auto& [base, exts] : fibers) fan.fibers.emplace_back(base, std::move(exts));
  return fan;
}

bool is_generated(const Config& eta, const CellSet& s, const Point& x) {
  if (!cell_set_contains(s, x)) throw std::invalid_argument("point not in the set");
  if (s.size() == 1) return words(eta, s).count() == 1;
  CellSet rest;
  rest.reserve(s.size() - 1);
  for (const Point& p : s)
    if (!(p == x)) rest.push_back(p);
  ExtensionFan fan = extension_fan(eta, rest, s);
  return fan.max_fiber() <= 1;
}

bool is_generated(const Config& eta, const ConvexLatticeSet& s, const Point& x) {
  return is_generated(eta, s.points(), x);
}

DiscrepancyStep discrepancy_step(const Config& eta, const ConvexLatticeSet& s,
                                 const Point& x) {
  if (!s.is_vertex(x)) throw std::invalid_argument("not a boundary vertex");
  DiscrepancyStep step;
  step.d_before = discrepancy(eta, s.points());
  step.d_after = discrepancy(eta, s.remove_vertex(x).points());
  step.generated = is_generated(eta, s.points(), x);
  if (step.generated && step.d_after != step.d_before + 1)
    throw std::logic_error("generated vertex removal must raise D by one");
  if (!step.generated && step.d_after > step.d_before)
    throw std::logic_error("non-generated vertex removal must not raise D");
  return step;
}

EdgeBoundReport verify_edge_bound(const Config& eta, const ConvexLatticeSet& s,
                                  const ConvexLatticeSet::Edge& w) {
  ConvexLatticeSet rest = s.remove_edge(w);
  EdgeBoundReport r;
  r.edge_cells = w.lattice_points();
  r.d_with = discrepancy(eta, s.points());
  r.d_without = discrepancy(eta, rest.points());
  ExtensionFan fan = extension_fan(eta, rest.points(), s.points());
  r.non_unique_count = fan.non_unique_count();
  r.premise = r.d_without > r.d_with;
  r.holds = !r.premise || r.non_unique_count <= r.edge_cells - 1;
  return r;
}

std::vector<long long> chain_discrepancy(const Config& eta, const ConvexLatticeSet& s,
                                         const std::vector<Point>& chain) {
  std::vector<long long> ds;
  ds.push_back(discrepancy(eta, s.points()));
  ConvexLatticeSet cur = s;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (!cur.is_vertex(chain[i]))
      throw std::invalid_argument("removal " + std::to_string(i + 1) + " at " +
                                  to_string(chain[i]) + " leaves a non-convex set");
    cur = cur.remove_vertex(chain[i]);
    ds.push_back(discrepancy(eta, cur.points()));
  }
  long long j = static_cast<long long>(chain.size());
  if (ds.back() > ds.front() + j)
    throw std::logic_error("discrepancy rose by more than the number of removals");
  return ds;
}

std::vector<CellSet> enumerate_convex_subsets(const ConvexLatticeSet& seed,
                                              std::size_t budget) {
  if (seed.size() > budget)
    throw std::invalid_argument("seed set exceeds the exhaustive search budget");
  std::vector<CellSet> out;
  std::unordered_set<std::string> seen;
  std::vector<ConvexLatticeSet> stack{seed};
  seen.insert(cell_set_key(seed.points()));
  while (!stack.empty()) {
    ConvexLatticeSet cur = std::move(stack.back());
    stack.pop_back();
    out.push_back(cur.points());
    if (cur.size() == 1) continue;
    for (const Point& v : cur.vertices()) {
      ConvexLatticeSet next = cur.remove_vertex(v);
      std::string key = cell_set_key(next.points());
      if (seen.insert(key).second) stack.push_back(std::move(next));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

long long memo_discrepancy(const Config& eta, const CellSet& cells,
                           std::unordered_map<std::string, long long>& memo) {
  std::string key = cell_set_key(normalize_cells(cells));
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  long long d = discrepancy(eta, cells);
  memo.emplace(std::move(key), d);
  return d;
}

}  // namespace

std::vector<CellSet> minimal_nonpositive_subsets(const Config& eta,
                                                 const ConvexLatticeSet& seed,
                                                 const SearchOptions& opts) {
  std::vector<CellSet> subsets = enumerate_convex_subsets(seed, opts.exhaustive_budget);
  std::unordered_map<std::string, long long> memo;
  std::vector<CellSet> low;
  for (const CellSet& s : subsets)
    if (memo_discrepancy(eta, s, memo) <= 0) low.push_back(s);
  std::vector<CellSet> minimal;
  for (const CellSet& s : low) {
    bool has_smaller = false;
    for (const CellSet& t : low) {
      if (t.size() < s.size() && is_subset(t, s)) {
        has_smaller = true;
        break;
      }
    }
    if (!has_smaller) minimal.push_back(s);
  }
  std::sort(minimal.begin(), minimal.end(), [](const CellSet& a, const CellSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return minimal;
}

GenSetOutcome find_generating_set(const Config& eta, Coord n, Coord k, SearchMode mode,
                                  const SearchOptions& opts) {
  if (eta.alphabet().size() < 2)
    throw std::invalid_argument("analysis requires an alphabet of at least two symbols");
  if (!eta.exhaustive() && !opts.allow_window_counts)
    throw std::invalid_argument("requires exhaustive counts");
  ConvexLatticeSet seed = rect(n, k);
  long long d_seed = discrepancy(eta, seed.points());
  if (d_seed > 0) return {std::nullopt, "hypothesis fails: D(R) = " + std::to_string(d_seed)};

  if (mode == SearchMode::greedy) {
    ConvexLatticeSet cur = seed;
    long long d_cur = d_seed;
    for (;;) {
      if (cur.size() == 1) break;
      bool moved = false;
      std::vector<Point> verts = cur.vertices();
      std::sort(verts.begin(), verts.end());  // row-major: smallest (y, x) first
      for (const Point& v : verts) {
        ConvexLatticeSet next = cur.remove_vertex(v);
        long long d = discrepancy(eta, next.points());
        if (d <= 0) {
          cur = std::move(next);
          d_cur = d;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    return {GenSetResult{cur, SearchMode::greedy, d_cur, false}, ""};
  }

  std::vector<CellSet> minimal = minimal_nonpositive_subsets(eta, seed, opts);
  if (minimal.empty()) return {std::nullopt, "no convex subset with D <= 0"};
  ConvexLatticeSet best = ConvexLatticeSet::from_convex_points(minimal.front());
  long long d_best = discrepancy(eta, best.points());
  // Certify: every nonempty proper convex subset has positive discrepancy,
  // hence D(S') >= D(S) + 1.
  bool certified = true;
  for (const CellSet& sub : enumerate_convex_subsets(best, opts.exhaustive_budget)) {
    if (sub.size() == best.size()) continue;
    if (discrepancy(eta, sub) < std::max<long long>(1, d_best + 1)) {
      certified = false;
      break;
    }
  }
  if (!certified)
    throw std::logic_error("minimal set failed the proper-subset discrepancy check");
  return {GenSetResult{best, SearchMode::exhaustive, d_best, true}, ""};
}

}  // namespace nivat
