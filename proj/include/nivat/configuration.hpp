#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nivat/geometry.hpp"

namespace nivat {

using Symbol = std::uint8_t;

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(Symbol i) const { return symbols_.at(i); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  Symbol index_of(std::string_view token) const;  // throws on unknown token

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

enum class SourceKind { periodic, window, wordlift, substitution, cellmap };
enum class LiftRule { x, y, x_plus_y };

std::string to_string(SourceKind k);
std::string to_string(LiftRule r);
LiftRule lift_rule_from_string(std::string_view s);

// Block substitution: each symbol maps to an m x m block.
struct SubstitutionRule {
  Coord block_size = 0;  // m >= 2
  // blocks[sym][dy * m + dx], dy = 0 is the bottom row of the block
  std::vector<std::vector<Symbol>> blocks;
};

struct Rect {
  Coord x0 = 0, y0 = 0;  // inclusive min corner
  Coord w = 0, h = 0;
  bool contains(const Point& p) const {
    return p.x >= x0 && p.x < x0 + w && p.y >= y0 && p.y < y0 + h;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// 2x2 integer matrix [[a, b], [c, d]] acting by (x,y) -> (ax+by, cx+dy).
struct Mat2 {
  Coord a = 1, b = 0, c = 0, d = 1;
  Coord det() const { return a * d - b * c; }
  Point apply(const Point& p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
  Mat2 inverse() const;  // requires |det| = 1
};

struct UndefinedCell : std::runtime_error {
  Point cell;
  explicit UndefinedCell(Point p)
      : std::runtime_error("undefined cell " + to_string(p)), cell(p) {}
};

// A coloring of Z^2 (total for periodic sources, partial otherwise).
// Immutable after construction; translation is a cheap view.
class Config {
 public:
  static Config periodic(Alphabet alphabet, Coord w, Coord h, std::vector<Symbol> grid);
  static Config window(Alphabet alphabet, Coord w, Coord h, std::vector<Symbol> grid);
  static Config word_lift(Alphabet alphabet, std::vector<Symbol> word, LiftRule rule);
  static Config substitution(Alphabet alphabet, SubstitutionRule rule, Symbol seed,
                             int iterations);
  static Config cell_map(Alphabet alphabet, std::vector<std::pair<Point, Symbol>> cells);

  SourceKind kind() const;
  const Alphabet& alphabet() const;
  bool exhaustive() const { return kind() == SourceKind::periodic; }

  bool defined_at(const Point& p) const;
  Symbol at(const Point& p) const;  // throws UndefinedCell

  // Lazy translate: at(v) of the result equals at(v + u) of *this.
  Config translated(const Vec& u) const;

  // Composition with the inverse of a unimodular map; |det M| must be 1.
  // Periodic sources stay periodic; other sources become cell maps.
  Config apply_unimodular(const Mat2& m) const;

  // Defined domain of the current view, when it is a rectangle.
  std::optional<Rect> domain_rect() const;
  // Explicit defined cells in view coordinates (cellmap sources only).
  std::optional<CellSet> domain_cells() const;

  // Fundamental domain sizes for periodic sources.
  Coord period_w() const;
  Coord period_h() const;

  // All distinct translates; periodic sources only.
  std::vector<Config> orbit() const;

  // Substitution sources: same rule and seed, different iteration count.
  Config with_iterations(int k) const;
  int iterations() const;
  const SubstitutionRule* substitution_rule() const;
  Symbol substitution_seed() const;
  const std::vector<Symbol>* lift_word() const;
  LiftRule lift_rule() const;

  std::optional<bool> aperiodic_tag() const;
  const std::string& note() const;
  Config with_aperiodic_tag(bool value, std::string note) const;

  // Content equality of the current views (same kind, alphabet, values).
  friend bool operator==(const Config& a, const Config& b);

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  Vec offset_{0, 0};
  explicit Config(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
};

struct Pattern {
  CellSet cells;                // normalized: min corner at the origin
  std::vector<Symbol> colors;   // aligned with cells (row-major)
  friend bool operator==(const Pattern&, const Pattern&) = default;
};

// (T^u eta) restricted to the cells of s.  Throws UndefinedCell listing the
// first offending cell.
Pattern restrict_to(const Config& eta, const CellSet& cells, const Vec& u);
Pattern restrict_to(const Config& eta, const ConvexLatticeSet& s, const Vec& u);

// Built-in 1D words for test corpora and the CLI generator.
std::vector<Symbol> fibonacci_word(std::size_t length);   // over {0, 1}
std::vector<Symbol> thue_morse_word(std::size_t length);  // over {0, 1}
SubstitutionRule thue_morse_2d_rule();

// Text and JSON formats.  Both round-trip bit-exactly through
// parse -> emit.
Config parse_config_text(const std::string& text);
std::string emit_config_text(const Config& c);
Config parse_config_json(const std::string& json_text);
std::string emit_config_json(const Config& c);
Config load_config_file(const std::string& path);  // picks format by content
void save_config_file(const Config& c, const std::string& path);

}  // namespace nivat
