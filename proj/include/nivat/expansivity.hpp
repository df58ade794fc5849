#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nivat/configuration.hpp"
#include "nivat/extension.hpp"
#include "nivat/geometry.hpp"

namespace nivat {

// Cells of a bounded strip around a line, with exact rational distance
// comparisons (squared offsets against r^2 * |direction|^2).
struct StripShape {
  DirectedLine line;
  Coord radius = 0;  // Euclidean radius bound
  Coord extent = 0;  // Euclidean bound on the projection along the line
  CellSet cells() const;
};

enum class VerdictKind { nonexpansive_witnessed, expansive_at_scale };

struct Witness {
  CellSet agree_cells;   // cells (relative to the anchor) forced to agree
  Point differ_cell;     // cell where the two patterns differ
  Vec translate_a;
  Vec translate_b;
  std::vector<Symbol> colors_a;  // over agree_cells then differ_cell
  std::vector<Symbol> colors_b;
};

struct ExpansivityVerdict {
  DirectedLine line;
  bool directed = false;  // half-plane (direction) test vs strip (line) test
  Coord depth = 0;        // m for directions, r for lines
  Coord extent = 0;       // L
  VerdictKind kind = VerdictKind::expansive_at_scale;
  std::optional<Witness> witness;

  bool witnessed() const { return kind == VerdictKind::nonexpansive_witnessed; }
  // Recomputes the stored witness against the configuration.
  bool replay(const Config& eta) const;
};

// Cells of the truncated half-plane H(l): 0 < offset, Euclidean depth at
// most m, projection extent at most L.
CellSet half_plane_truncation(const DirectedLine& l, Coord depth, Coord extent);

// Searches the pattern language for two occurrences that agree on the
// truncated half-plane but differ at the anchor cell.
ExpansivityVerdict direction_nonexpansive_at_scale(const Config& eta, const DirectedLine& l,
                                                   Coord depth, Coord extent);

// Strip version: agreement on all cells within distance r of the line,
// difference at a canonical center cell of some lattice line beyond the
// strip (within Euclidean depth `extent`).
ExpansivityVerdict line_nonexpansive_at_scale(const Config& eta, const DirectedLine& l,
                                              Coord radius, Coord extent);

// Distinct primitive edge directions of the generating set, each listed
// with both orientations; empty when the set has no edges.
std::vector<DirectedLine> candidate_nonexpansive_lines(const GenSetResult& s);

struct PairingEntry {
  Vec line_direction;           // canonical orientation of the undirected line
  bool forward_witnessed = false;
  bool backward_witnessed = false;
  bool line_witnessed() const { return forward_witnessed || backward_witnessed; }
  bool flagged = false;  // hypothesis check: witnessed line with one orientation only
};

struct PairingReport {
  std::vector<PairingEntry> entries;
  bool exact_hypothesis = false;  // exact P(n,3) <= 3n established for eta
};

PairingReport antiparallel_pairing_check(const Config& eta,
                                         const std::vector<ExpansivityVerdict>& verdicts,
                                         bool exact_hypothesis);

struct BalancedCertificate {
  ConvexLatticeSet set;
  DirectedLine line;
  std::optional<ConvexLatticeSet::Edge> edge;  // the edge parallel to the line
  bool cond_edge = false;
  bool cond_endpoints = false;
  bool cond_discrepancy = false;
  bool cond_line_counts = false;
  bool endpoint_from_generated = false;
  bool endpoint_to_generated = false;
  long long d_without = 0;  // D(S \ w)
  long long d_with = 0;     // D(S)
  long long edge_cells = 0; // |w ∩ S|
  std::vector<std::pair<Coord, Coord>> line_counts;

  bool balanced() const {
    return cond_edge && cond_endpoints && cond_discrepancy && cond_line_counts;
  }
};

BalancedCertificate is_balanced(const Config& eta, const ConvexLatticeSet& s,
                                const DirectedLine& l, const SearchOptions& opts = {});

struct BalancedSearchResult {
  std::optional<BalancedCertificate> found;
  std::string not_found_reason;
  // Materialized intermediate sets of the construction, for observability.
  std::vector<std::pair<std::string, CellSet>> steps;
};

// Three-case construction of a balanced set inside R_{n,3}: the rectangle
// itself for vertical directions, partial-top-row sets for horizontal
// ones, and the tail-extension descent for oblique slopes 1/a.  Every
// returned set is re-validated by is_balanced.
BalancedSearchResult find_balanced_set(const Config& eta, const DirectedLine& l, Coord n,
                                       const SearchOptions& opts = {});

}  // namespace nivat
