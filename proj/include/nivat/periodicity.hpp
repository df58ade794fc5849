#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nivat/configuration.hpp"
#include "nivat/expansivity.hpp"
#include "nivat/geometry.hpp"

namespace nivat {

// Lattice of period vectors, canonical basis {(a,0),(b,c)} with a,c > 0
// and 0 <= b < a.  Zero or one generators describe region-restricted
// verdicts (aperiodic on region / singly periodic).
struct PeriodLattice {
  std::vector<Vec> generators;

  bool doubly_periodic() const { return generators.size() == 2; }
  bool contains(const Vec& v) const;
  // Least k >= 1 with k * dir in the lattice, when one exists.
  std::optional<Coord> multiple_along(const Vec& dir) const;
};

// Full period lattice of a periodic source, from testing every vector in
// the fundamental-domain box and reducing to a Hermite basis.
PeriodLattice period_lattice(const Config& eta);

struct RegionPeriodicityReport {
  Vec vector;
  bool holds = false;
  std::optional<Point> first_violation;  // row-major first
  long long checked_pairs = 0;
};

RegionPeriodicityReport is_periodic_on_region(const Config& alpha, const CellSet& region,
                                              const Vec& u);
RegionPeriodicityReport is_periodic_on_region(const Pattern& alpha, const Vec& u);

// Periods found among vectors of a bounding box, each verified on the
// region; returns 0, 1 or 2 independent generators.
PeriodLattice region_period_lattice(const Config& alpha, const CellSet& region,
                                    Coord search_bound);

enum class TreatAs { periodic, onesided };

struct MorseHedlundVerdict {
  std::vector<long long> complexity;          // P(1), P(2), ...
  std::optional<Coord> first_low_n;           // least n with P(n) <= n
  std::optional<Coord> period;                // periodic treatment: minimal period
  std::optional<std::pair<Coord, Coord>> eventual;  // onesided: (preperiod, period)
  bool truncated = false;                     // onesided verdicts carry this caveat
};

MorseHedlundVerdict morse_hedlund_1d(const std::vector<Symbol>& word, TreatAs treat);

// Independent brute-force period of a fundamental domain.
Coord brute_minimal_period(const std::vector<Symbol>& word);

struct StripRowCheck {
  Coord row_offset = 0;          // offset shift of this strip translate
  long long positions = 0;       // base-set translates inspected in the row
  bool all_non_unique = false;   // every base pattern extends non-uniquely
  bool any_unknown = false;      // some base pattern absent from the fan
  std::optional<Coord> period;   // minimal period along the line, if found
  long long bound = 0;
  bool testable = false;
  bool violation = false;
};

struct StripBoundReport {
  std::vector<StripRowCheck> rows;
  long long edge_cells = 0;
  bool any_violation = false;
};

// Checks the period bounds of strip restrictions: rows where no base
// pattern extends uniquely must have period at most |w∩S|-1, rows with a
// unique extension at most 2|w∩S|-2.
StripBoundReport strip_period_bound_check(const Config& eta, const BalancedCertificate& cert,
                                          const Rect& window);

struct PropagationReport {
  Coord strip_period = 0;          // minimal multiple of the direction on the strip
  Coord global_multiple = 0;       // least k with k*dir in the period lattice
  bool holds = false;              // strip periodic => global parallel period exists
};

// Instance check: a periodic strip forces a global period parallel to the
// line (periodic sources only, so both sides are decidable).
PropagationReport periodic_strip_propagation_check(const Config& eta, const DirectedLine& l,
                                                   const ConvexLatticeSet& s,
                                                   const ConvexLatticeSet::Edge& w);

}  // namespace nivat
