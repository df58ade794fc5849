#include "nivat/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <stdexcept>

#include "nivat/complexity.hpp"
#include "nivat/extension.hpp"
#include "nivat/periodicity.hpp"
#include "nivat/rng.hpp"

namespace nivat {

namespace fs = std::filesystem;
using nlohmann::json;

bool EntryReport::pass() const {
  if (!loaded) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

bool CampaignReport::pass() const {
  for (const auto& e : entries)
    if (!e.pass()) return false;
  return true;
}

std::vector<DirectedLine> census_probe_lines() {
  return {DirectedLine{{0, 1}}, DirectedLine{{1, 0}}, DirectedLine{{1, 1}},
          DirectedLine{{1, -1}}};
}

namespace {

json point_json(const Point& p) { return json::array({p.x, p.y}); }

Point point_from_json(const json& j) { return {j.at(0).get<Coord>(), j.at(1).get<Coord>()}; }

json cells_json(const CellSet& cells) {
  json arr = json::array();
  for (const Point& p : cells) arr.push_back(point_json(p));
  return arr;
}

std::string colors_string(const Alphabet& a, const std::vector<Symbol>& colors) {
  std::string out;
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (i) out += ' ';
    out += a.symbol(colors[i]);
  }
  return out;
}

std::vector<Symbol> colors_from_string(const Alphabet& a, const std::string& s) {
  std::vector<Symbol> out;
  std::string tok;
  for (char ch : s) {
    if (ch == ' ') {
      if (!tok.empty()) out.push_back(a.index_of(tok));
      tok.clear();
    } else {
      tok += ch;
    }
  }
  if (!tok.empty()) out.push_back(a.index_of(tok));
  return out;
}

}  // namespace

json verdict_to_json(const ExpansivityVerdict& v, const Alphabet& a) {
  json j;
  j["direction"] = point_json(v.line.direction);
  j["anchor"] = point_json(v.line.anchor);
  j["directed"] = v.directed;
  j["depth"] = v.depth;
  j["extent"] = v.extent;
  j["verdict"] = v.witnessed() ? "nonexpansive-witnessed" : "expansive-at-radius";
  if (v.witness) {
    const Witness& w = *v.witness;
    json wj;
    wj["agree_cells"] = cells_json(w.agree_cells);
    wj["differ_cell"] = point_json(w.differ_cell);
    wj["translate_a"] = point_json(w.translate_a);
    wj["translate_b"] = point_json(w.translate_b);
    wj["colors_a"] = colors_string(a, w.colors_a);
    wj["colors_b"] = colors_string(a, w.colors_b);
    j["witness"] = wj;
  }
  return j;
}

ExpansivityVerdict verdict_from_json(const json& j, const Alphabet& a) {
  ExpansivityVerdict v;
  v.line = DirectedLine{point_from_json(j.at("direction")), point_from_json(j.at("anchor"))};
  v.directed = j.at("directed").get<bool>();
  v.depth = j.at("depth").get<Coord>();
  v.extent = j.at("extent").get<Coord>();
  v.kind = j.at("verdict").get<std::string>() == "nonexpansive-witnessed"
               ? VerdictKind::nonexpansive_witnessed
               : VerdictKind::expansive_at_scale;
  if (j.contains("witness")) {
    const json& wj = j.at("witness");
    Witness w;
    for (const auto& c : wj.at("agree_cells")) w.agree_cells.push_back(point_from_json(c));
    w.differ_cell = point_from_json(wj.at("differ_cell"));
    w.translate_a = point_from_json(wj.at("translate_a"));
    w.translate_b = point_from_json(wj.at("translate_b"));
    w.colors_a = colors_from_string(a, wj.at("colors_a").get<std::string>());
    w.colors_b = colors_from_string(a, wj.at("colors_b").get<std::string>());
    v.witness = std::move(w);
  }
  return v;
}

CampaignSpec parse_campaign_json(const std::string& text, const std::string& base_dir) {
  json j = json::parse(text);
  CampaignSpec spec;
  spec.seed = j.value("seed", 0ULL);
  if (j.contains("scales")) {
    const json& s = j["scales"];
    spec.scales.n_max = s.value("n_max", spec.scales.n_max);
    spec.scales.k = s.value("k", spec.scales.k);
    spec.scales.radius = s.value("radius", spec.scales.radius);
    spec.scales.extent = s.value("extent", spec.scales.extent);
    if (s.contains("balanced_n"))
      spec.scales.balanced_n = s["balanced_n"].get<std::vector<Coord>>();
    spec.scales.lemma_trials = s.value("lemma_trials", spec.scales.lemma_trials);
  }
  spec.checks = j.value("checks", std::vector<std::string>{});
  for (const auto& e : j.at("corpus")) {
    CorpusEntry entry;
    entry.name = e.at("name").get<std::string>();
    if (e.contains("path")) {
      fs::path p = e["path"].get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
      entry.path = p.string();
    } else if (e.contains("config")) {
      entry.inline_config = parse_config_json(e["config"].dump());
    } else {
      throw std::invalid_argument("corpus entry '" + entry.name +
                                  "' needs a path or an inline config");
    }
    spec.corpus.push_back(std::move(entry));
  }
  return spec;
}

namespace {

struct EntryContext {
  Config eta;
  const CampaignScales& scales;
  std::uint64_t seed;
};

bool exact_low_complexity(const Config& eta, Coord n_max, Coord k, Coord* n_found) {
  if (!eta.exhaustive()) return false;
  for (Coord n = 1; n <= n_max; ++n) {
    ComplexityReport r = rect_complexity(eta, n, k);
    if (r.pattern_count <= n * k) {
      if (n_found) *n_found = n;
      return true;
    }
  }
  return false;
}

CheckResult check_profile(const EntryContext& ctx) {
  CheckResult res;
  res.name = "profile";
  json rows_j = json::array();
  bool pass = true;
  for (Coord k : {ctx.scales.k, Coord{2}}) {
    std::vector<ProfileRow> rows = complexity_profile(ctx.eta, ctx.scales.n_max, k);
    for (const ProfileRow& r : rows) {
      json jr;
      jr["n"] = r.n;
      jr["k"] = r.k;
      jr["P"] = r.pattern_count;
      jr["bound"] = r.bound;
      jr["D"] = r.discrepancy;
      jr["within_bound"] = r.within_bound;
      jr["exhaustive"] = r.exhaustive;
      rows_j.push_back(jr);
    }
    if (ctx.eta.exhaustive()) {
      // Forward direction: a bound met at any n forces a nonzero period
      // lattice.
      bool low = std::any_of(rows.begin(), rows.end(),
                             [](const ProfileRow& r) { return r.within_bound; });
      if (low) {
        PeriodLattice lat = period_lattice(ctx.eta);
        if (lat.generators.empty()) pass = false;
        res.details["period_generators"] = lat.generators.size();
      }
    } else if (ctx.eta.aperiodic_tag().value_or(false) && k == 3) {
      // Contrapositive: declared-aperiodic entries must exceed the bound
      // at every n >= 2 (lower-bound counts suffice).
      for (const ProfileRow& r : rows)
        if (r.n >= 2 && r.within_bound) pass = false;
    }
  }
  res.details["rows"] = rows_j;
  res.pass = pass;
  return res;
}

CheckResult check_lemma_suite(const EntryContext& ctx) {
  CheckResult res;
  res.name = "lemma-suite";
  if (!ctx.eta.exhaustive()) {
    res.pass = true;
    res.skipped = true;
    res.details["reason"] = "requires exact counts";
    return res;
  }
  CounterRng rng(ctx.seed);
  ConvexLatticeSet seed = rect(6, 3);
  std::vector<CellSet> subsets = enumerate_convex_subsets(seed);
  std::vector<CellSet> usable;
  for (const CellSet& s : subsets)
    if (s.size() >= 2) usable.push_back(s);
  int removal_trials = 0, edge_trials = 0, chain_trials = 0;
  std::string failure;
  try {
    for (int t = 0; t < ctx.scales.lemma_trials; ++t) {
      const CellSet& cells = usable[rng.below(usable.size())];
      ConvexLatticeSet s = ConvexLatticeSet::from_convex_points(cells);
      const Point& x = s.vertices()[rng.below(s.vertices().size())];
      discrepancy_step(ctx.eta, s, x);  // throws on a violation
      ++removal_trials;
      if (!s.edges().empty()) {
        const auto& w = s.edges()[rng.below(s.edges().size())];
        if (s.size() > static_cast<std::size_t>(w.lattice_points())) {
          EdgeBoundReport r = verify_edge_bound(ctx.eta, s, w);
          if (!r.holds) throw std::logic_error("edge bound violated");
          ++edge_trials;
        }
      }
      // Short random removal chain.
      std::vector<Point> chain;
      ConvexLatticeSet cur = s;
      int len = static_cast<int>(rng.below(3));
      for (int i = 0; i < len && cur.size() > 1; ++i) {
        Point v = cur.vertices()[rng.below(cur.vertices().size())];
        chain.push_back(v);
        cur = cur.remove_vertex(v);
      }
      chain_discrepancy(ctx.eta, s, chain);  // throws on a violation
      ++chain_trials;
    }
  } catch (const std::exception& e) {
    failure = e.what();
  }
  res.details["removal_trials"] = removal_trials;
  res.details["edge_trials"] = edge_trials;
  res.details["chain_trials"] = chain_trials;
  if (!failure.empty()) res.details["failure"] = failure;
  res.pass = failure.empty();
  return res;
}

std::vector<DirectedLine> census_candidates(const EntryContext& ctx) {
  std::vector<DirectedLine> lines = census_probe_lines();
  // Edge directions of a greedy generating set, when one exists.
  if (ctx.eta.exhaustive()) {
    for (Coord n = 1; n <= ctx.scales.n_max; ++n) {
      GenSetOutcome out = find_generating_set(ctx.eta, n, 3, SearchMode::greedy);
      if (!out.found()) continue;
      for (const DirectedLine& l : candidate_nonexpansive_lines(*out.result)) {
        bool seen = false;
        for (const DirectedLine& known : lines)
          if (known.same_line_as(l)) {
            seen = true;
            break;
          }
        if (!seen) lines.push_back(l);
      }
      break;
    }
  }
  return lines;
}

CheckResult check_census(const EntryContext& ctx) {
  CheckResult res;
  res.name = "expansivity-census";
  std::vector<DirectedLine> lines = census_candidates(ctx);
  Coord n_low = 0;
  bool exact_low = exact_low_complexity(ctx.eta, ctx.scales.n_max, 3, &n_low);

  json verdicts_j = json::array();
  std::vector<ExpansivityVerdict> directional;
  int witnessed_lines = 0;
  for (const DirectedLine& l : lines) {
    ExpansivityVerdict lv =
        line_nonexpansive_at_scale(ctx.eta, l, ctx.scales.radius, ctx.scales.extent);
    if (lv.witnessed()) ++witnessed_lines;
    verdicts_j.push_back(verdict_to_json(lv, ctx.eta.alphabet()));
    for (const DirectedLine& oriented : {l, l.antiparallel()}) {
      ExpansivityVerdict dv = direction_nonexpansive_at_scale(
          ctx.eta, oriented, ctx.scales.radius, ctx.scales.extent);
      verdicts_j.push_back(verdict_to_json(dv, ctx.eta.alphabet()));
      directional.push_back(std::move(dv));
    }
  }
  PairingReport pairing = antiparallel_pairing_check(ctx.eta, directional, exact_low);
  json pairing_j = json::array();
  for (const PairingEntry& e : pairing.entries) {
    json pj;
    pj["line"] = point_json(e.line_direction);
    pj["forward"] = e.forward_witnessed;
    pj["backward"] = e.backward_witnessed;
    pj["flagged"] = e.flagged;
    pairing_j.push_back(pj);
  }
  res.details["verdicts"] = verdicts_j;
  res.details["pairing"] = pairing_j;
  res.details["witnessed_lines"] = witnessed_lines;
  res.details["exact_low_complexity"] = exact_low;
  // Doubly periodic entries must show no witnessed lines at any scale.
  res.pass = true;
  if (ctx.eta.exhaustive()) {
    PeriodLattice lat = period_lattice(ctx.eta);
    if (lat.doubly_periodic() && witnessed_lines != 0) res.pass = false;
  }
  for (const PairingEntry& e : pairing.entries)
    if (e.flagged) res.pass = false;
  return res;
}

json certificate_json(const BalancedCertificate& cert) {
  json j;
  j["points"] = cells_json(cert.set.points());
  j["direction"] = point_json(cert.line.direction);
  j["balanced"] = cert.balanced();
  j["cond_edge"] = cert.cond_edge;
  j["cond_endpoints"] = cert.cond_endpoints;
  j["cond_discrepancy"] = cert.cond_discrepancy;
  j["cond_line_counts"] = cert.cond_line_counts;
  j["D_without_edge"] = cert.d_without;
  j["D"] = cert.d_with;
  j["edge_cells"] = cert.edge_cells;
  if (cert.edge) {
    j["edge_from"] = point_json(cert.edge->from);
    j["edge_to"] = point_json(cert.edge->to);
  }
  return j;
}

struct BalancedFinding {
  DirectedLine line;
  BalancedCertificate cert;
};

std::vector<BalancedFinding> balanced_findings(const EntryContext& ctx, json* detail_rows) {
  std::vector<BalancedFinding> found;
  SearchOptions opts;
  opts.allow_window_counts = !ctx.eta.exhaustive();
  std::vector<DirectedLine> directions;
  for (const DirectedLine& l : census_probe_lines()) {
    directions.push_back(l);
    directions.push_back(l.antiparallel());
  }
  for (const DirectedLine& l : directions) {
    for (Coord n : ctx.scales.balanced_n) {
      BalancedSearchResult r = find_balanced_set(ctx.eta, l, n, opts);
      json row;
      row["direction"] = point_json(l.direction);
      row["n"] = n;
      if (r.found) {
        row["certificate"] = certificate_json(*r.found);
        found.push_back({l, *r.found});
      } else {
        row["not_found"] = r.not_found_reason;
      }
      if (detail_rows) detail_rows->push_back(row);
      if (r.found) break;  // one certificate per direction suffices
    }
  }
  return found;
}

CheckResult check_balanced(const EntryContext& ctx) {
  CheckResult res;
  res.name = "balanced";
  json rows = json::array();
  std::vector<BalancedFinding> found = balanced_findings(ctx, &rows);
  res.details["rows"] = rows;
  res.details["found"] = found.size();
  // Every returned set must pass validation (already re-validated inside
  // the search); re-assert here against the certificate flags.
  res.pass = std::all_of(found.begin(), found.end(),
                         [](const BalancedFinding& f) { return f.cert.balanced(); });
  return res;
}

CheckResult check_period_bounds(const EntryContext& ctx) {
  CheckResult res;
  res.name = "period-bounds";
  std::vector<BalancedFinding> found = balanced_findings(ctx, nullptr);
  json rows = json::array();
  bool pass = true;
  for (const BalancedFinding& f : found) {
    // Period bounds describe half-plane witnesses; assert them only for
    // directions that are witnessed nonexpansive at the campaign scale.
    ExpansivityVerdict dv = direction_nonexpansive_at_scale(ctx.eta, f.line,
                                                            ctx.scales.radius,
                                                            ctx.scales.extent);
    Rect window;
    if (auto r = ctx.eta.domain_rect()) {
      window = *r;
    } else {
      Coord e = ctx.scales.extent * 2;
      window = Rect{-e, -e, 2 * e + 1, 2 * e + 1};
    }
    StripBoundReport sb = strip_period_bound_check(ctx.eta, f.cert, window);
    json row;
    row["direction"] = point_json(f.line.direction);
    row["hypothesis_met"] = dv.witnessed();
    row["edge_cells"] = sb.edge_cells;
    row["rows_checked"] = sb.rows.size();
    row["any_violation"] = sb.any_violation;
    if (dv.witnessed() && sb.any_violation) pass = false;
    if (ctx.eta.kind() == SourceKind::periodic) {
      PropagationReport prop =
          periodic_strip_propagation_check(ctx.eta, f.line, f.cert.set, *f.cert.edge);
      row["strip_period"] = prop.strip_period;
      row["global_multiple"] = prop.global_multiple;
      row["propagation_holds"] = prop.holds;
      if (!prop.holds) pass = false;
    }
    rows.push_back(row);
  }
  res.details["rows"] = rows;
  res.pass = pass;
  return res;
}

}  // namespace

CampaignReport run_campaign(const CampaignSpec& spec) {
  auto t0 = std::chrono::steady_clock::now();
  CampaignReport report;
  report.spec = spec;
  report.entries.resize(spec.corpus.size());

  auto process = [&](std::size_t idx) {
    const CorpusEntry& entry = spec.corpus[idx];
    EntryReport er;
    er.name = entry.name;
    std::optional<Config> eta;
    try {
      eta = entry.inline_config ? *entry.inline_config : load_config_file(entry.path);
      er.loaded = true;
    } catch (const std::exception& e) {
      er.error = e.what();
      return er;
    }
    EntryContext ctx{*eta, spec.scales, spec.seed ^ (0x9e37ULL * (idx + 1))};
    auto want = [&](const std::string& c) {
      return spec.checks.empty() ||
             std::find(spec.checks.begin(), spec.checks.end(), c) != spec.checks.end();
    };
    auto run_check = [&](const std::string& name, auto&& fn) {
      if (!want(name)) return;
      try {
        er.checks.push_back(fn(ctx));
      } catch (const std::exception& e) {
        CheckResult failed;
        failed.name = name;
        failed.pass = false;
        failed.details["error"] = e.what();
        er.checks.push_back(std::move(failed));
      }
    };
    run_check("profile", check_profile);
    run_check("lemma-suite", check_lemma_suite);
    run_check("expansivity-census", check_census);
    run_check("balanced", check_balanced);
    run_check("period-bounds", check_period_bounds);
    return er;
  };

  int workers = effective_workers(0);
  if (workers <= 1 || spec.corpus.size() <= 1) {
    for (std::size_t i = 0; i < spec.corpus.size(); ++i) report.entries[i] = process(i);
  } else {
    std::vector<std::future<EntryReport>> futures;
    futures.reserve(spec.corpus.size());
    for (std::size_t i = 0; i < spec.corpus.size(); ++i)
      futures.push_back(std::async(std::launch::async, process, i));
    for (std::size_t i = 0; i < spec.corpus.size(); ++i)
      report.entries[i] = futures[i].get();
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

json report_to_json(const CampaignReport& report) {
  json j;
  json spec_j;
  spec_j["seed"] = report.spec.seed;
  spec_j["checks"] = report.spec.checks;
  json scales_j;
  scales_j["n_max"] = report.spec.scales.n_max;
  scales_j["k"] = report.spec.scales.k;
  scales_j["radius"] = report.spec.scales.radius;
  scales_j["extent"] = report.spec.scales.extent;
  scales_j["balanced_n"] = report.spec.scales.balanced_n;
  scales_j["lemma_trials"] = report.spec.scales.lemma_trials;
  spec_j["scales"] = scales_j;
  json corpus_j = json::array();
  for (const auto& e : report.spec.corpus) corpus_j.push_back(e.name);
  spec_j["corpus"] = corpus_j;
  j["campaign"] = spec_j;

  json entries = json::array();
  for (const EntryReport& er : report.entries) {
    json ej;
    ej["name"] = er.name;
    ej["loaded"] = er.loaded;
    if (!er.error.empty()) ej["error"] = er.error;
    json checks = json::array();
    for (const CheckResult& c : er.checks) {
      json cj;
      cj["check"] = c.name;
      cj["pass"] = c.pass;
      if (c.skipped) cj["skipped"] = true;
      cj["details"] = c.details;
      checks.push_back(cj);
    }
    ej["checks"] = checks;
    ej["pass"] = er.pass();
    entries.push_back(ej);
  }
  j["entries"] = entries;
  j["pass"] = report.pass();
  return j;
}

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << content;
}

std::string genset_svg(const ConvexLatticeSet& s) {
  Coord scale = 40, margin = 40;
  Coord maxx = 1, maxy = 1;
  for (const Point& p : s.points()) {
    maxx = std::max(maxx, p.x);
    maxy = std::max(maxy, p.y);
  }
  Coord w = margin * 2 + maxx * scale, h = margin * 2 + maxy * scale;
  auto sx = [&](Coord x) { return margin + x * scale; };
  auto sy = [&](Coord y) { return h - margin - y * scale; };
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(w) + "\" height=\"" + std::to_string(h) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!s.vertices().empty()) {
    std::string pts;
    for (const Point& v : s.vertices())
      pts += std::to_string(sx(v.x)) + "," + std::to_string(sy(v.y)) + " ";
    svg += "<polygon fill=\"none\" stroke=\"black\" points=\"" + pts + "\"/>\n";
  }
  for (const Point& p : s.points())
    svg += "<circle cx=\"" + std::to_string(sx(p.x)) + "\" cy=\"" +
           std::to_string(sy(p.y)) + "\" r=\"4\" fill=\"steelblue\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace

void emit_report(const CampaignReport& report, const std::string& out_dir,
                 const std::vector<std::string>& formats) {
  fs::create_directories(out_dir);
  auto want = [&](const std::string& f) {
    return formats.empty() || std::find(formats.begin(), formats.end(), f) != formats.end();
  };
  if (want("json")) write_file(fs::path(out_dir) / "report.json", report_to_json(report).dump(2) + "\n");

  for (std::size_t i = 0; i < report.spec.corpus.size(); ++i) {
    const CorpusEntry& entry = report.spec.corpus[i];
    const EntryReport& er = report.entries[i];
    if (!er.loaded) continue;
    std::string name = sanitize(entry.name);
    Config eta = entry.inline_config ? *entry.inline_config : load_config_file(entry.path);
    if (want("json")) {
      write_file(fs::path(out_dir) / ("corpus_" + name + ".json"), emit_config_json(eta));
      write_file(fs::path(out_dir) / ("corpus_" + name + ".cfg"), emit_config_text(eta));
    }
    for (const CheckResult& c : er.checks) {
      if (c.name != "profile" || !c.details.contains("rows")) continue;
      std::vector<ProfileRow> rows;
      for (const auto& r : c.details["rows"]) {
        ProfileRow row;
        row.n = r["n"].get<Coord>();
        row.k = r["k"].get<Coord>();
        row.pattern_count = r["P"].get<long long>();
        row.bound = r["bound"].get<long long>();
        row.discrepancy = r["D"].get<long long>();
        row.within_bound = r["within_bound"].get<bool>();
        row.exhaustive = r["exhaustive"].get<bool>();
        rows.push_back(row);
      }
      if (want("csv"))
        write_file(fs::path(out_dir) / ("profile_" + name + ".csv"), profile_csv(rows));
      if (want("svg"))
        write_file(fs::path(out_dir) / ("growth_" + name + ".svg"), profile_svg(rows));
    }
    if (want("svg") && eta.exhaustive()) {
      for (Coord n = 1; n <= report.spec.scales.n_max; ++n) {
        GenSetOutcome out = find_generating_set(eta, n, 3, SearchMode::greedy);
        if (out.found()) {
          write_file(fs::path(out_dir) / ("genset_" + name + ".svg"),
                     genset_svg(out.result->set));
          write_file(fs::path(out_dir) / ("genset_" + name + ".shape"),
                     emit_shape_text(out.result->set));
          break;
        }
      }
    }
  }
}

}  // namespace nivat
