#pragma once

#include <string>
#include <vector>

#include "nivat/configuration.hpp"
#include "nivat/geometry.hpp"

namespace nivat {

// Distinct colorings of a shape over all admissible translates.
// For periodic sources the scan covers one fundamental domain and the
// counts are exact; for partial sources they are certified lower bounds.
struct PatternSet {
  CellSet shape;  // normalized cells
  std::vector<std::vector<Symbol>> patterns;  // sorted; colors in row-major cell order
  long long translate_count = 0;
  bool exhaustive = false;

  long long count() const { return static_cast<long long>(patterns.size()); }
  bool contains(const std::vector<Symbol>& colors) const;
};

struct ComplexityReport {
  std::string shape_desc;
  long long pattern_count = 0;  // P
  long long cells = 0;          // |S|
  long long discrepancy = 0;    // D = P - |S|
  long long translate_count = 0;
  bool exhaustive = false;
};

// Number of worker threads for translate scans; the result is independent
// of the partitioning.  Reads NIVAT_WORKERS when `workers` is 0.
int effective_workers(int workers);

// Translates u with shape + u inside the defined domain (bounding-box
// range; cellmap domains may still exclude individual u).
struct TranslateRange {
  Coord x0 = 0, y0 = 0, w = 0, h = 0;
  long long count() const { return static_cast<long long>(w) * h; }
};
TranslateRange admissible_translates(const Config& eta, const CellSet& shape);

PatternSet words(const Config& eta, const CellSet& shape, int workers = 0);
PatternSet words(const Config& eta, const ConvexLatticeSet& shape, int workers = 0);

long long pattern_count(const Config& eta, const CellSet& shape);
long long discrepancy(const Config& eta, const CellSet& shape);

ComplexityReport complexity(const Config& eta, const ConvexLatticeSet& shape);
ComplexityReport rect_complexity(const Config& eta, Coord n, Coord k);

struct ProfileRow {
  Coord n = 0, k = 0;
  long long pattern_count = 0;
  long long bound = 0;  // n * k
  long long discrepancy = 0;
  bool within_bound = false;  // P <= n k
  bool exhaustive = false;
};

std::vector<ProfileRow> complexity_profile(const Config& eta, Coord n_max, Coord k);

// CSV with header n,k,P,bound,D,exhaustive.
std::string profile_csv(const std::vector<ProfileRow>& rows);
std::string profile_json(const std::vector<ProfileRow>& rows);
// Growth curve of P and the n*k bound; presentation only.
std::string profile_svg(const std::vector<ProfileRow>& rows);

}  // namespace nivat
