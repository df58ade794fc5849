#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nivat/complexity.hpp"
#include "nivat/configuration.hpp"
#include "nivat/geometry.hpp"

namespace nivat {

// Fiber structure of the restriction map W(s2) -> W(s1) for s1 ⊂ s2.
// Both sides are computed over the translates admissible for s2, so the
// restriction is surjective by construction.
struct ExtensionFan {
  CellSet base_shape;  // normalized s1 cells, as positioned inside normalized s2
  CellSet ext_shape;   // normalized s2 cells
  // One entry per base pattern: (base colors, extension colors over s2).
  std::vector<std::pair<std::vector<Symbol>, std::vector<std::vector<Symbol>>>> fibers;
  long long translate_count = 0;
  bool exhaustive = false;

  long long base_count() const { return static_cast<long long>(fibers.size()); }
  long long ext_count() const;
  long long non_unique_count() const;  // fibers with more than one extension
  std::size_t max_fiber() const;
};

ExtensionFan extension_fan(const Config& eta, const CellSet& s1, const CellSet& s2);

// True when every coloring of S \ {x} determines the color at x.
bool is_generated(const Config& eta, const CellSet& s, const Point& x);
bool is_generated(const Config& eta, const ConvexLatticeSet& s, const Point& x);

struct DiscrepancyStep {
  bool generated = false;
  long long d_before = 0;
  long long d_after = 0;
};

// Removes hull vertex x and reports the discrepancy move; checks the
// removal law (generated: +1, otherwise no increase) and throws
// std::logic_error if the computed counts ever violate it.
DiscrepancyStep discrepancy_step(const Config& eta, const ConvexLatticeSet& s,
                                 const Point& x);

struct EdgeBoundReport {
  long long d_without = 0;        // D(S \ w)
  long long d_with = 0;           // D(S)
  long long non_unique_count = 0; // colorings of S\w with more than one extension
  long long edge_cells = 0;       // |w ∩ S|
  bool premise = false;           // D(S\w) > D(S)
  bool holds = true;              // premise => non_unique_count <= |w∩S|-1
};

EdgeBoundReport verify_edge_bound(const Config& eta, const ConvexLatticeSet& s,
                                  const ConvexLatticeSet::Edge& w);

// D along a removal chain; every prefix must stay convex.
std::vector<long long> chain_discrepancy(const Config& eta, const ConvexLatticeSet& s,
                                         const std::vector<Point>& chain);

enum class SearchMode { greedy, exhaustive };

struct SearchOptions {
  // Largest seed set the exhaustive enumeration will accept.
  std::size_t exhaustive_budget = 24;
  // Accept window-based lower-bound counts in place of exact ones.
  bool allow_window_counts = false;
};

struct GenSetResult {
  ConvexLatticeSet set;
  SearchMode mode = SearchMode::greedy;
  long long discrepancy = 0;
  bool minimality_certified = false;
};

struct GenSetOutcome {
  std::optional<GenSetResult> result;
  std::string not_found_reason;  // set when result is empty
  bool found() const { return result.has_value(); }
};

// Searches R_{n,k} for a generating set with nonpositive discrepancy.
// Exhaustive mode returns the canonically first inclusion-minimal convex
// subset with D <= 0 and certifies that all its proper convex subsets
// have positive discrepancy.
GenSetOutcome find_generating_set(const Config& eta, Coord n, Coord k, SearchMode mode,
                                  const SearchOptions& opts = {});

// All lattice-convex subsets of the seed (including the seed itself),
// reached by repeated hull-vertex removal.  Canonically sorted.
std::vector<CellSet> enumerate_convex_subsets(const ConvexLatticeSet& seed,
                                              std::size_t budget = 24);

// All inclusion-minimal convex subsets with D <= 0, canonically sorted.
std::vector<CellSet> minimal_nonpositive_subsets(const Config& eta,
                                                 const ConvexLatticeSet& seed,
                                                 const SearchOptions& opts = {});

}  // namespace nivat
