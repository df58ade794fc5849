#include "nivat/configuration.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nivat {

namespace {

Coord mod_floor(Coord a, Coord m) {
  Coord r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("alphabet must not be empty");
  if (symbols_.size() > 255) throw std::invalid_argument("alphabet too large");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].empty()) throw std::invalid_argument("empty alphabet token");
    for (std::size_t j = i + 1; j < symbols_.size(); ++j)
      if (symbols_[i] == symbols_[j])
        throw std::invalid_argument("duplicate alphabet token '" + symbols_[i] + "'");
  }
}

Symbol Alphabet::index_of(std::string_view token) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == token) return static_cast<Symbol>(i);
  throw std::invalid_argument("token '" + std::string(token) + "' not in alphabet");
}

std::string to_string(SourceKind k) {
  switch (k) {
    case SourceKind::periodic: return "periodic";
    case SourceKind::window: return "window";
    case SourceKind::wordlift: return "wordlift";
    case SourceKind::substitution: return "substitution";
    case SourceKind::cellmap: return "cellmap";
  }
  return "?";
}

std::string to_string(LiftRule r) {
  switch (r) {
    case LiftRule::x: return "x";
    case LiftRule::y: return "y";
    case LiftRule::x_plus_y: return "x+y";
  }
  return "?";
}

LiftRule lift_rule_from_string(std::string_view s) {
  if (s == "x") return LiftRule::x;
  if (s == "y") return LiftRule::y;
  if (s == "x+y") return LiftRule::x_plus_y;
  throw std::invalid_argument("unknown lift rule '" + std::string(s) + "'");
}

Mat2 Mat2::inverse() const {
  Coord dt = det();
  if (dt != 1 && dt != -1) throw std::invalid_argument("matrix is not unimodular");
  return Mat2{d / dt, -b / dt, -c / dt, a / dt};
}

struct Config::Impl {
  Alphabet alphabet;
  SourceKind kind;

  Coord w = 0, h = 0;             // grid extent (periodic / window / substitution)
  std::vector<Symbol> grid;       // row-major, y = 0 is the bottom row

  std::vector<Symbol> word;       // wordlift
  LiftRule rule = LiftRule::x;
  Coord lift_extent = 0;          // side of the defined square

  SubstitutionRule srule;         // substitution
  Symbol seed = 0;
  int iters = 0;

  CellSet cells;                  // cellmap (sorted)
  std::vector<Symbol> cell_colors;

  std::optional<bool> aperiodic;
  std::string note;

  explicit Impl(Alphabet a, SourceKind k) : alphabet(std::move(a)), kind(k) {}

  bool base_defined(const Point& p) const {
    switch (kind) {
      case SourceKind::periodic: return true;
      case SourceKind::window:
      case SourceKind::substitution:
        return p.x >= 0 && p.x < w && p.y >= 0 && p.y < h;
      case SourceKind::wordlift:
        return p.x >= 0 && p.x < lift_extent && p.y >= 0 && p.y < lift_extent;
      case SourceKind::cellmap: return cell_set_contains(cells, p);
    }
    return false;
  }

  Symbol base_at(const Point& p) const {
    switch (kind) {
      case SourceKind::periodic:
        return grid[mod_floor(p.y, h) * w + mod_floor(p.x, w)];
      case SourceKind::window:
      case SourceKind::substitution:
        return grid[p.y * w + p.x];
      case SourceKind::wordlift: {
        Coord idx = rule == LiftRule::x ? p.x : rule == LiftRule::y ? p.y : p.x + p.y;
        return word[idx];
      }
      case SourceKind::cellmap: {
        auto it = std::lower_bound(cells.begin(), cells.end(), p);
        return cell_colors[static_cast<std::size_t>(it - cells.begin())];
      }
    }
    return 0;
  }
};

namespace {

void check_symbols(const Alphabet& a, const std::vector<Symbol>& v) {
  for (Symbol s : v)
    if (s >= a.size()) throw std::invalid_argument("symbol index out of range");
}

std::vector<Symbol> expand_substitution(const SubstitutionRule& rule, Symbol seed,
                                        int iterations, Coord* side_out) {
  Coord m = rule.block_size;
  Coord side = 1;
  for (int i = 0; i < iterations; ++i) {
    side *= m;
    if (side > 4096) throw std::invalid_argument("substitution window too large");
  }
  std::vector<Symbol> cur{seed};
  Coord cw = 1;
  for (int i = 0; i < iterations; ++i) {
    Coord nw = cw * m;
    std::vector<Symbol> next(static_cast<std::size_t>(nw) * nw);
    for (Coord y = 0; y < nw; ++y)
      for (Coord x = 0; x < nw; ++x) {
        Symbol parent = cur[(y / m) * cw + (x / m)];
        next[y * nw + x] = rule.blocks[parent][(y % m) * m + (x % m)];
      }
    cur = std::move(next);
    cw = nw;
  }
  *side_out = side;
  return cur;
}

}  // namespace

Config Config::periodic(Alphabet alphabet, Coord w, Coord h, std::vector<Symbol> grid) {
  if (w < 1 || h < 1) throw std::invalid_argument("fundamental domain must be nonempty");
  if (static_cast<Coord>(grid.size()) != w * h)
    throw std::invalid_argument("grid size does not match dimensions");
  check_symbols(alphabet, grid);
  auto impl = std::make_shared<Impl>(std::move(alphabet), SourceKind::periodic);
  Impl* m = impl.get();
  m->w = w;
  m->h = h;
  m->grid = std::move(grid);
  return Config(std::move(impl));
}

Config Config::window(Alphabet alphabet, Coord w, Coord h, std::vector<Symbol> grid) {
  if (w < 1 || h < 1) throw std::invalid_argument("window must be nonempty");
  if (static_cast<Coord>(grid.size()) != w * h)
    throw std::invalid_argument("grid size does not match dimensions");
  check_symbols(alphabet, grid);
  auto impl = std::make_shared<Impl>(std::move(alphabet), SourceKind::window);
  Impl* m = impl.get();
  m->w = w;
  m->h = h;
  m->grid = std::move(grid);
  return Config(std::move(impl));
}

Config Config::word_lift(Alphabet alphabet, std::vector<Symbol> word, LiftRule rule) {
  if (word.empty()) throw std::invalid_argument("lift word must be nonempty");
  check_symbols(alphabet, word);
  auto impl = std::make_shared<Impl>(std::move(alphabet), SourceKind::wordlift);
  Impl* m = impl.get();
  Coord n = static_cast<Coord>(word.size());
  m->word = std::move(word);
  m->rule = rule;
  m->lift_extent = rule == LiftRule::x_plus_y ? (n + 1) / 2 : n;
  if (m->lift_extent < 1) m->lift_extent = 1;
  return Config(std::move(impl));
}

Config Config::substitution(Alphabet alphabet, SubstitutionRule rule, Symbol seed,
                            int iterations) {
  if (rule.block_size < 2) throw std::invalid_argument("block size must be at least 2");
  if (iterations < 0) throw std::invalid_argument("iterations must be nonnegative");
  if (rule.blocks.size() != alphabet.size())
    throw std::invalid_argument("substitution rule must cover every symbol");
  for (const auto& b : rule.blocks) {
    if (static_cast<Coord>(b.size()) != rule.block_size * rule.block_size)
      throw std::invalid_argument("block has wrong size");
    check_symbols(alphabet, b);
  }
  if (seed >= alphabet.size()) throw std::invalid_argument("seed symbol out of range");
  auto impl = std::make_shared<Impl>(std::move(alphabet), SourceKind::substitution);
  Impl* m = impl.get();
  Coord side = 0;
  m->grid = expand_substitution(rule, seed, iterations, &side);
  m->w = m->h = side;
  m->srule = std::move(rule);
  m->seed = seed;
  m->iters = iterations;
  return Config(std::move(impl));
}

Config Config::cell_map(Alphabet alphabet, std::vector<std::pair<Point, Symbol>> cells) {
  if (cells.empty()) throw std::invalid_argument("cell map must be nonempty");
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (cells[i].first == cells[i - 1].first)
      throw std::invalid_argument("duplicate cell " + to_string(cells[i].first));
  auto impl = std::make_shared<Impl>(std::move(alphabet), SourceKind::cellmap);
  Impl* m = impl.get();
  m->cells.reserve(cells.size());
  m->cell_colors.reserve(cells.size());
  for (auto& [p, s] : cells) {
    if (s >= m->alphabet.size()) throw std::invalid_argument("symbol index out of range");
    m->cells.push_back(p);
    m->cell_colors.push_back(s);
  }
  return Config(std::move(impl));
}

SourceKind Config::kind() const { return impl_->kind; }
const Alphabet& Config::alphabet() const { return impl_->alphabet; }

bool Config::defined_at(const Point& p) const { return impl_->base_defined(p + offset_); }

Symbol Config::at(const Point& p) const {
  Point base = p + offset_;
  if (!impl_->base_defined(base)) throw UndefinedCell(p);
  return impl_->base_at(base);
}

Config Config::translated(const Vec& u) const {
  Config c = *this;
  c.offset_ = c.offset_ + u;
  return c;
}

std::optional<Rect> Config::domain_rect() const {
  switch (impl_->kind) {
    case SourceKind::window:
    case SourceKind::substitution:
      return Rect{-offset_.x, -offset_.y, impl_->w, impl_->h};
    case SourceKind::wordlift:
      return Rect{-offset_.x, -offset_.y, impl_->lift_extent, impl_->lift_extent};
    default: return std::nullopt;
  }
}

std::optional<CellSet> Config::domain_cells() const {
  if (impl_->kind != SourceKind::cellmap) return std::nullopt;
  CellSet out;
  out.reserve(impl_->cells.size());
  for (const Point& base : impl_->cells) out.push_back(base - offset_);
  return out;
}

Coord Config::period_w() const {
  if (impl_->kind != SourceKind::periodic) throw std::logic_error("not a periodic source");
  return impl_->w;
}

Coord Config::period_h() const {
  if (impl_->kind != SourceKind::periodic) throw std::logic_error("not a periodic source");
  return impl_->h;
}

std::vector<Config> Config::orbit() const {
  if (impl_->kind != SourceKind::periodic)
    throw std::invalid_argument("orbit closure not finitely computable");
  Coord w = impl_->w, h = impl_->h;
  std::vector<Config> out;
  std::vector<std::vector<Symbol>> seen;
  for (Coord uy = 0; uy < h; ++uy)
    for (Coord ux = 0; ux < w; ++ux) {
      std::vector<Symbol> g(static_cast<std::size_t>(w) * h);
      for (Coord y = 0; y < h; ++y)
        for (Coord x = 0; x < w; ++x)
          g[y * w + x] = impl_->base_at({x + ux + offset_.x, y + uy + offset_.y});
      if (std::find(seen.begin(), seen.end(), g) == seen.end()) {
        seen.push_back(g);
        out.push_back(Config::periodic(impl_->alphabet, w, h, std::move(g)));
      }
    }
  return out;
}

Config Config::apply_unimodular(const Mat2& m) const {
  Coord dt = m.det();
  if (dt != 1 && dt != -1) throw std::invalid_argument("matrix is not unimodular");
  Mat2 inv = m.inverse();
  if (impl_->kind == SourceKind::periodic) {
    Coord w = impl_->w, h = impl_->h;
    // Least a > 0 with M^{-1}(a, 0) in the period lattice <(w,0),(0,h)>,
    // and likewise for (0, b).
    auto axis_period = [&](Coord cx, Coord cy) {
      Coord ax = w / gcd_ll(cx, w);
      Coord ay = h / gcd_ll(cy, h);
      return ax / gcd_ll(ax, ay) * ay;  // lcm
    };
    Coord a = axis_period(inv.a, inv.c);
    Coord b = axis_period(inv.b, inv.d);
    std::vector<Symbol> g(static_cast<std::size_t>(a) * b);
    for (Coord y = 0; y < b; ++y)
      for (Coord x = 0; x < a; ++x) g[y * a + x] = at(inv.apply({x, y}));
    Config out = Config::periodic(impl_->alphabet, a, b, std::move(g));
    if (impl_->aperiodic) out = out.with_aperiodic_tag(*impl_->aperiodic, impl_->note);
    return out;
  }
  // Partial sources: transform the defined cells explicitly.
  std::vector<std::pair<Point, Symbol>> cells;
  if (auto r = domain_rect()) {
    cells.reserve(static_cast<std::size_t>(r->w) * r->h);
    for (Coord y = r->y0; y < r->y0 + r->h; ++y)
      for (Coord x = r->x0; x < r->x0 + r->w; ++x)
        cells.emplace_back(m.apply({x, y}), at({x, y}));
  } else {
    CellSet dom = *domain_cells();
    cells.reserve(dom.size());
    for (const Point& p : dom) cells.emplace_back(m.apply(p), at(p));
  }
  return Config::cell_map(impl_->alphabet, std::move(cells));
}

Config Config::with_iterations(int k) const {
  if (impl_->kind != SourceKind::substitution)
    throw std::logic_error("not a substitution source");
  Config out = Config::substitution(impl_->alphabet, impl_->srule, impl_->seed, k);
  if (impl_->aperiodic) out = out.with_aperiodic_tag(*impl_->aperiodic, impl_->note);
  out.offset_ = offset_;
  return out;
}

int Config::iterations() const { return impl_->iters; }

const SubstitutionRule* Config::substitution_rule() const {
  return impl_->kind == SourceKind::substitution ? &impl_->srule : nullptr;
}

Symbol Config::substitution_seed() const { return impl_->seed; }

const std::vector<Symbol>* Config::lift_word() const {
  return impl_->kind == SourceKind::wordlift ? &impl_->word : nullptr;
}

LiftRule Config::lift_rule() const { return impl_->rule; }

std::optional<bool> Config::aperiodic_tag() const { return impl_->aperiodic; }
const std::string& Config::note() const { return impl_->note; }

Config Config::with_aperiodic_tag(bool value, std::string note) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->aperiodic = value;
  impl->note = std::move(note);
  Config c(std::move(impl));
  c.offset_ = offset_;
  return c;
}

bool operator==(const Config& a, const Config& b) {
  return emit_config_text(a) == emit_config_text(b);
}

Pattern restrict_to(const Config& eta, const CellSet& cells, const Vec& u) {
  Vec shift;
  CellSet norm = normalize_cells(cells, &shift);
  Pattern pat;
  pat.cells = std::move(norm);
  pat.colors.reserve(cells.size());
  for (const Point& p : cells) pat.colors.push_back(eta.at(p + u));
  return pat;
}

Pattern restrict_to(const Config& eta, const ConvexLatticeSet& s, const Vec& u) {
  return restrict_to(eta, s.points(), u);
}

std::vector<Symbol> fibonacci_word(std::size_t length) {
  std::vector<Symbol> w{0};
  while (w.size() < length) {
    std::vector<Symbol> next;
    next.reserve(w.size() * 2);
    for (Symbol s : w) {
      if (s == 0) {
        next.push_back(0);
        next.push_back(1);
      } else {
        next.push_back(0);
      }
    }
    w = std::move(next);
  }
  w.resize(length);
  return w;
}

std::vector<Symbol> thue_morse_word(std::size_t length) {
  std::vector<Symbol> w{0};
  while (w.size() < length) {
    std::vector<Symbol> next;
    next.reserve(w.size() * 2);
    for (Symbol s : w) {
      next.push_back(s);
      next.push_back(static_cast<Symbol>(1 - s));
    }
    w = std::move(next);
  }
  w.resize(length);
  return w;
}

SubstitutionRule thue_morse_2d_rule() {
  SubstitutionRule r;
  r.block_size = 2;
  r.blocks = {{0, 1, 1, 0}, {1, 0, 0, 1}};
  return r;
}

// ---------------------------------------------------------------------------
// File formats

namespace {

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct TextDoc {
  std::map<std::string, std::string> fields;
  std::vector<std::string> grid_rows;
  std::map<std::string, std::vector<std::string>> block_rows;
  std::vector<std::string> cell_rows;
};

TextDoc scan_text(const std::string& text) {
  TextDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string section;  // "", "grid", "cells" or "block <sym>"
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string trimmed = line;
    while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t' ||
                                trimmed.back() == '\r'))
      trimmed.pop_back();
    std::size_t start = trimmed.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    trimmed = trimmed.substr(start);
    auto colon = trimmed.find(':');
    bool header = false;
    if (colon != std::string::npos) {
      std::string key = trimmed.substr(0, colon);
      std::string value = trimmed.substr(colon + 1);
      std::size_t vs = value.find_first_not_of(" \t");
      value = vs == std::string::npos ? "" : value.substr(vs);
      if (key == "grid") {
        section = "grid";
        header = true;
      } else if (key == "cells") {
        section = "cells";
        doc.fields["cells"] = value;
        header = true;
      } else if (key.rfind("block ", 0) == 0) {
        section = key;
        doc.block_rows[key.substr(6)];
        header = true;
      } else if (key.find(' ') == std::string::npos) {
        doc.fields[key] = value;
        section.clear();
        header = true;
      }
    }
    if (header) continue;
    if (section == "grid")
      doc.grid_rows.push_back(trimmed);
    else if (section == "cells")
      doc.cell_rows.push_back(trimmed);
    else if (!section.empty())
      doc.block_rows[section.substr(6)].push_back(trimmed);
    else
      throw std::invalid_argument("unexpected line '" + trimmed + "'");
  }
  return doc;
}

std::vector<Symbol> parse_row(const Alphabet& a, const std::string& row, Coord expect) {
  std::vector<std::string> toks = split_tokens(row);
  if (expect >= 0 && static_cast<Coord>(toks.size()) != expect)
    throw std::invalid_argument("grid row '" + row + "' has " +
                                std::to_string(toks.size()) + " tokens, expected " +
                                std::to_string(expect));
  std::vector<Symbol> out;
  out.reserve(toks.size());
  for (const auto& t : toks) out.push_back(a.index_of(t));
  return out;
}

// Grid rows are listed top-down in files; internally y = 0 is the bottom row.
std::vector<Symbol> rows_to_grid(const std::vector<std::vector<Symbol>>& rows) {
  std::vector<Symbol> grid;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it)
    grid.insert(grid.end(), it->begin(), it->end());
  return grid;
}

Config finish_parse(const Alphabet& alphabet, const TextDoc& doc) {
  auto field = [&](const std::string& key) -> std::string {
    auto it = doc.fields.find(key);
    if (it == doc.fields.end())
      throw std::invalid_argument("missing field '" + key + "'");
    return it->second;
  };
  std::string kind = field("kind");
  Config out = [&]() -> Config {
    if (kind == "periodic" || kind == "window") {
      std::vector<std::string> size = split_tokens(field("size"));
      if (size.size() != 2) throw std::invalid_argument("size must be 'W H'");
      Coord w = std::stoll(size[0]), h = std::stoll(size[1]);
      if (static_cast<Coord>(doc.grid_rows.size()) != h)
        throw std::invalid_argument("expected " + std::to_string(h) + " grid rows");
      std::vector<std::vector<Symbol>> rows;
      for (const auto& r : doc.grid_rows) rows.push_back(parse_row(alphabet, r, w));
      auto grid = rows_to_grid(rows);
      return kind == "periodic" ? Config::periodic(alphabet, w, h, std::move(grid))
                                : Config::window(alphabet, w, h, std::move(grid));
    }
    if (kind == "wordlift") {
      LiftRule rule = lift_rule_from_string(field("rule"));
      std::vector<Symbol> word = parse_row(alphabet, field("word"), -1);
      return Config::word_lift(alphabet, std::move(word), rule);
    }
    if (kind == "substitution") {
      SubstitutionRule rule;
      rule.block_size = std::stoll(field("block-size"));
      rule.blocks.resize(alphabet.size());
      for (std::size_t i = 0; i < alphabet.size(); ++i) {
        auto it = doc.block_rows.find(alphabet.symbol(static_cast<Symbol>(i)));
        if (it == doc.block_rows.end())
          throw std::invalid_argument("missing block for symbol '" +
                                      alphabet.symbol(static_cast<Symbol>(i)) + "'");
        if (static_cast<Coord>(it->second.size()) != rule.block_size)
          throw std::invalid_argument("block must have " +
                                      std::to_string(rule.block_size) + " rows");
        std::vector<std::vector<Symbol>> rows;
        for (const auto& r : it->second)
          rows.push_back(parse_row(alphabet, r, rule.block_size));
        rule.blocks[i] = rows_to_grid(rows);
      }
      Symbol seed = alphabet.index_of(field("seed"));
      int iters = std::stoi(field("iterations"));
      return Config::substitution(alphabet, std::move(rule), seed, iters);
    }
    if (kind == "cellmap") {
      std::size_t count = std::stoull(field("cells"));
      if (doc.cell_rows.size() != count)
        throw std::invalid_argument("expected " + std::to_string(count) + " cell rows");
      std::vector<std::pair<Point, Symbol>> cells;
      for (const auto& r : doc.cell_rows) {
        std::vector<std::string> toks = split_tokens(r);
        if (toks.size() != 3)
          throw std::invalid_argument("cell row must be 'x y token': '" + r + "'");
        cells.emplace_back(Point{std::stoll(toks[0]), std::stoll(toks[1])},
                           alphabet.index_of(toks[2]));
      }
      return Config::cell_map(alphabet, std::move(cells));
    }
    throw std::invalid_argument("unknown kind '" + kind + "'");
  }();
  if (auto it = doc.fields.find("origin"); it != doc.fields.end()) {
    std::vector<std::string> toks = split_tokens(it->second);
    if (toks.size() != 2) throw std::invalid_argument("origin must be 'x y'");
    // Domain starts at origin: view = base translated by -origin.
    out = out.translated({-std::stoll(toks[0]), -std::stoll(toks[1])});
  }
  if (auto it = doc.fields.find("aperiodic"); it != doc.fields.end()) {
    bool v = it->second == "true";
    if (!v && it->second != "false")
      throw std::invalid_argument("aperiodic must be true or false");
    std::string note;
    if (auto nt = doc.fields.find("note"); nt != doc.fields.end()) note = nt->second;
    out = out.with_aperiodic_tag(v, note);
  }
  return out;
}

}  // namespace

Config parse_config_text(const std::string& text) {
  TextDoc doc = scan_text(text);
  auto it = doc.fields.find("alphabet");
  if (it == doc.fields.end()) throw std::invalid_argument("missing field 'alphabet'");
  Alphabet alphabet(split_tokens(it->second));
  return finish_parse(alphabet, doc);
}

namespace {

std::string join_row(const Config& c, Coord y, Coord x0, Coord w) {
  std::string out;
  for (Coord x = 0; x < w; ++x) {
    if (x) out += ' ';
    out += c.alphabet().symbol(c.at({x0 + x, y}));
  }
  return out;
}

std::string grid_lines_top_down(const Config& c, const Rect& r) {
  std::string out;
  for (Coord y = r.y0 + r.h - 1; y >= r.y0; --y) {
    out += join_row(c, y, r.x0, r.w);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string emit_config_text(const Config& c) {
  const Alphabet& a = c.alphabet();
  std::string out = "alphabet:";
  for (const auto& s : a.symbols()) {
    out += ' ';
    out += s;
  }
  out += "\nkind: " + to_string(c.kind()) + "\n";
  if (c.aperiodic_tag()) {
    out += std::string("aperiodic: ") + (*c.aperiodic_tag() ? "true" : "false") + "\n";
    if (!c.note().empty()) out += "note: " + c.note() + "\n";
  }
  switch (c.kind()) {
    case SourceKind::periodic: {
      Coord w = c.period_w(), h = c.period_h();
      out += "size: " + std::to_string(w) + " " + std::to_string(h) + "\n";
      out += "grid:\n";
      out += grid_lines_top_down(c, Rect{0, 0, w, h});
      break;
    }
    case SourceKind::window: {
      Rect r = *c.domain_rect();
      out += "size: " + std::to_string(r.w) + " " + std::to_string(r.h) + "\n";
      if (r.x0 != 0 || r.y0 != 0)
        out += "origin: " + std::to_string(r.x0) + " " + std::to_string(r.y0) + "\n";
      out += "grid:\n";
      out += grid_lines_top_down(c, r);
      break;
    }
    case SourceKind::wordlift: {
      out += "rule: " + to_string(c.lift_rule()) + "\n";
      Rect r = *c.domain_rect();
      if (r.x0 != 0 || r.y0 != 0)
        out += "origin: " + std::to_string(r.x0) + " " + std::to_string(r.y0) + "\n";
      out += "word:";
      for (Symbol s : *c.lift_word()) {
        out += ' ';
        out += a.symbol(s);
      }
      out += '\n';
      break;
    }
    case SourceKind::substitution: {
      const SubstitutionRule* rule = c.substitution_rule();
      out += "block-size: " + std::to_string(rule->block_size) + "\n";
      out += "seed: " + a.symbol(c.substitution_seed()) + "\n";
      out += "iterations: " + std::to_string(c.iterations()) + "\n";
      Rect r = *c.domain_rect();
      if (r.x0 != 0 || r.y0 != 0)
        out += "origin: " + std::to_string(r.x0) + " " + std::to_string(r.y0) + "\n";
      for (std::size_t i = 0; i < a.size(); ++i) {
        out += "block " + a.symbol(static_cast<Symbol>(i)) + ":\n";
        Coord m = rule->block_size;
        for (Coord y = m - 1; y >= 0; --y) {
          for (Coord x = 0; x < m; ++x) {
            if (x) out += ' ';
            out += a.symbol(rule->blocks[i][y * m + x]);
          }
          out += '\n';
        }
      }
      break;
    }
    case SourceKind::cellmap: {
      CellSet dom = *c.domain_cells();
      out += "cells: " + std::to_string(dom.size()) + "\n";
      for (const Point& p : dom) {
        out += std::to_string(p.x) + " " + std::to_string(p.y) + " ";
        out += a.symbol(c.at(p));
        out += '\n';
      }
      break;
    }
  }
  return out;
}

Config parse_config_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  Alphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
  TextDoc doc;
  doc.fields["kind"] = j.at("kind").get<std::string>();
  auto rows_from = [&](const nlohmann::json& rows) {
    std::vector<std::string> out;
    for (const auto& row : rows) {
      std::string line;
      for (const auto& tok : row) {
        if (!line.empty()) line += ' ';
        line += tok.get<std::string>();
      }
      out.push_back(line);
    }
    return out;
  };
  if (j.contains("size")) {
    doc.fields["size"] = std::to_string(j["size"][0].get<Coord>()) + " " +
                         std::to_string(j["size"][1].get<Coord>());
  }
  if (j.contains("grid")) doc.grid_rows = rows_from(j["grid"]);
  if (j.contains("origin"))
    doc.fields["origin"] = std::to_string(j["origin"][0].get<Coord>()) + " " +
                           std::to_string(j["origin"][1].get<Coord>());
  if (j.contains("rule")) doc.fields["rule"] = j["rule"].get<std::string>();
  if (j.contains("word")) {
    std::string line;
    for (const auto& tok : j["word"]) {
      if (!line.empty()) line += ' ';
      line += tok.get<std::string>();
    }
    doc.fields["word"] = line;
  }
  if (j.contains("block-size"))
    doc.fields["block-size"] = std::to_string(j["block-size"].get<Coord>());
  if (j.contains("seed")) doc.fields["seed"] = j["seed"].get<std::string>();
  if (j.contains("iterations"))
    doc.fields["iterations"] = std::to_string(j["iterations"].get<int>());
  if (j.contains("blocks"))
    for (auto it = j["blocks"].begin(); it != j["blocks"].end(); ++it)
      doc.block_rows[it.key()] = rows_from(it.value());
  if (j.contains("cells")) {
    doc.fields["cells"] = std::to_string(j["cells"].size());
    for (const auto& cell : j["cells"])
      doc.cell_rows.push_back(std::to_string(cell[0].get<Coord>()) + " " +
                              std::to_string(cell[1].get<Coord>()) + " " +
                              cell[2].get<std::string>());
  }
  if (j.contains("aperiodic")) {
    doc.fields["aperiodic"] = j["aperiodic"].get<bool>() ? "true" : "false";
    if (j.contains("note")) doc.fields["note"] = j["note"].get<std::string>();
  }
  return finish_parse(alphabet, doc);
}

std::string emit_config_json(const Config& c) {
  nlohmann::json j;
  const Alphabet& a = c.alphabet();
  j["alphabet"] = a.symbols();
  j["kind"] = to_string(c.kind());
  if (c.aperiodic_tag()) {
    j["aperiodic"] = *c.aperiodic_tag();
    if (!c.note().empty()) j["note"] = c.note();
  }
  auto grid_rows = [&](const Rect& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (Coord y = r.y0 + r.h - 1; y >= r.y0; --y) {
      nlohmann::json row = nlohmann::json::array();
      for (Coord x = r.x0; x < r.x0 + r.w; ++x) row.push_back(a.symbol(c.at({x, y})));
      rows.push_back(row);
    }
    return rows;
  };
  switch (c.kind()) {
    case SourceKind::periodic: {
      Coord w = c.period_w(), h = c.period_h();
      j["size"] = {w, h};
      j["grid"] = grid_rows(Rect{0, 0, w, h});
      break;
    }
    case SourceKind::window: {
      Rect r = *c.domain_rect();
      j["size"] = {r.w, r.h};
      if (r.x0 != 0 || r.y0 != 0) j["origin"] = {r.x0, r.y0};
      j["grid"] = grid_rows(r);
      break;
    }
    case SourceKind::wordlift: {
      j["rule"] = to_string(c.lift_rule());
      Rect r = *c.domain_rect();
      if (r.x0 != 0 || r.y0 != 0) j["origin"] = {r.x0, r.y0};
      nlohmann::json word = nlohmann::json::array();
      for (Symbol s : *c.lift_word()) word.push_back(a.symbol(s));
      j["word"] = word;
      break;
    }
    case SourceKind::substitution: {
      const SubstitutionRule* rule = c.substitution_rule();
      j["block-size"] = rule->block_size;
      j["seed"] = a.symbol(c.substitution_seed());
      j["iterations"] = c.iterations();
      Rect r = *c.domain_rect();
      if (r.x0 != 0 || r.y0 != 0) j["origin"] = {r.x0, r.y0};
      nlohmann::json blocks;
      Coord m = rule->block_size;
      for (std::size_t i = 0; i < a.size(); ++i) {
        nlohmann::json rows = nlohmann::json::array();
        for (Coord y = m - 1; y >= 0; --y) {
          nlohmann::json row = nlohmann::json::array();
          for (Coord x = 0; x < m; ++x)
            row.push_back(a.symbol(rule->blocks[i][y * m + x]));
          rows.push_back(row);
        }
        blocks[a.symbol(static_cast<Symbol>(i))] = rows;
      }
      j["blocks"] = blocks;
      break;
    }
    case SourceKind::cellmap: {
      CellSet dom = *c.domain_cells();
      nlohmann::json cells = nlohmann::json::array();
      for (const Point& p : dom) cells.push_back({p.x, p.y, a.symbol(c.at(p))});
      j["cells"] = cells;
      break;
    }
  }
  return j.dump(2) + "\n";
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text[i] == '{') return parse_config_json(text);
  return parse_config_text(text);
}

void save_config_file(const Config& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
    out << emit_config_json(c);
  else
    out << emit_config_text(c);
}

}  // namespace nivat
