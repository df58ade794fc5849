#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nivat/campaign.hpp"
#include "nivat/complexity.hpp"
#include "nivat/configuration.hpp"
#include "nivat/expansivity.hpp"
#include "nivat/extension.hpp"
#include "nivat/geometry.hpp"
#include "nivat/periodicity.hpp"

namespace fs = std::filesystem;
using namespace nivat;

namespace {

Vec parse_direction(const std::string& s) {
  std::istringstream in(s);
  Coord p, q;
  if (!(in >> p >> q)) throw CLI::ValidationError("direction must be 'p q': '" + s + "'");
  Vec d{p, q};
  if (d.x == 0 && d.y == 0) throw CLI::ValidationError("direction must be nonzero");
  return primitive(d);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

int cmd_complexity(const std::string& config_path, Coord n, Coord k,
                   const std::string& shape_path, const std::string& out_path,
                   const std::vector<std::string>& formats) {
  Config eta = load_config_file(config_path);
  if (!shape_path.empty()) {
    std::ifstream in(shape_path);
    if (!in) throw std::runtime_error("cannot open '" + shape_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    ConvexLatticeSet s = parse_shape_text(buf.str(), ShapeStrictness::complete);
    ComplexityReport r = complexity(eta, s);
    std::cout << r.shape_desc << ": P = " << r.pattern_count << ", |S| = " << r.cells
              << ", D = " << r.discrepancy
              << (r.exhaustive ? " (exact)" : " (lower bound)") << "\n";
    return 0;
  }
  std::vector<ProfileRow> rows = complexity_profile(eta, n, k);
  std::cout << "n\tk\tP\tbound\tD\twithin\n";
  for (const ProfileRow& r : rows)
    std::cout << r.n << "\t" << r.k << "\t" << r.pattern_count << "\t" << r.bound << "\t"
              << r.discrepancy << "\t" << (r.within_bound ? "yes" : "no") << "\n";
  if (!rows.empty() && !rows.front().exhaustive)
    std::cout << "(counts are window lower bounds)\n";
  if (!out_path.empty()) {
    auto want = [&](const std::string& f) {
      return formats.empty() || std::find(formats.begin(), formats.end(), f) != formats.end();
    };
    fs::create_directories(fs::path(out_path).parent_path().empty()
                               ? fs::path(".")
                               : fs::path(out_path).parent_path());
    if (want("csv")) write_text(out_path + ".csv", profile_csv(rows));
    if (want("json")) write_text(out_path + ".json", profile_json(rows));
    if (want("svg")) write_text(out_path + ".svg", profile_svg(rows));
  }
  return 0;
}

int cmd_generate_set(const std::string& config_path, Coord n, Coord k,
                     const std::string& mode, bool allow_window) {
  Config eta = load_config_file(config_path);
  SearchOptions opts;
  opts.allow_window_counts = allow_window;
  GenSetOutcome out = find_generating_set(
      eta, n, k, mode == "exhaustive" ? SearchMode::exhaustive : SearchMode::greedy, opts);
  nlohmann::json j;
  if (!out.found()) {
    j["found"] = false;
    j["reason"] = out.not_found_reason;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  const GenSetResult& r = *out.result;
  j["found"] = true;
  j["mode"] = mode;
  j["D"] = r.discrepancy;
  j["minimality_certified"] = r.minimality_certified;
  nlohmann::json pts = nlohmann::json::array();
  for (const Point& p : r.set.points()) pts.push_back({p.x, p.y});
  j["points"] = pts;
  nlohmann::json dirs = nlohmann::json::array();
  for (const auto& e : r.set.edges()) dirs.push_back({e.direction.x, e.direction.y});
  j["edge_directions"] = dirs;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_expansivity(const std::string& config_path, Coord radius, Coord extent,
                    const std::string& directions, const std::string& out_path) {
  Config eta = load_config_file(config_path);
  std::vector<DirectedLine> lines;
  if (directions == "auto") {
    lines = census_probe_lines();
  } else {
    std::stringstream ss(directions);
    std::string part;
    while (std::getline(ss, part, ';'))
      if (!part.empty()) lines.push_back(DirectedLine{parse_direction(part)});
  }
  nlohmann::json verdicts = nlohmann::json::array();
  for (const DirectedLine& l : lines) {
    ExpansivityVerdict lv = line_nonexpansive_at_scale(eta, l, radius, extent);
    verdicts.push_back(verdict_to_json(lv, eta.alphabet()));
    for (const DirectedLine& o : {l, l.antiparallel()}) {
      ExpansivityVerdict dv = direction_nonexpansive_at_scale(eta, o, radius, extent);
      verdicts.push_back(verdict_to_json(dv, eta.alphabet()));
    }
    std::cout << "line (" << l.direction.x << "," << l.direction.y << "): "
              << (lv.witnessed() ? "nonexpansive-witnessed" : "expansive-at-radius")
              << "\n";
  }
  nlohmann::json j;
  j["radius"] = radius;
  j["extent"] = extent;
  j["verdicts"] = verdicts;
  if (!out_path.empty())
    write_text(out_path, j.dump(2) + "\n");
  else
    std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_balanced(const std::string& config_path, const std::string& direction, Coord n,
                 bool allow_window) {
  Config eta = load_config_file(config_path);
  DirectedLine l{parse_direction(direction)};
  SearchOptions opts;
  opts.allow_window_counts = allow_window;
  BalancedSearchResult r = find_balanced_set(eta, l, n, opts);
  nlohmann::json j;
  if (!r.found) {
    j["found"] = false;
    j["reason"] = r.not_found_reason;
  } else {
    j["found"] = true;
    nlohmann::json pts = nlohmann::json::array();
    for (const Point& p : r.found->set.points()) pts.push_back({p.x, p.y});
    j["points"] = pts;
    j["D"] = r.found->d_with;
    j["D_without_edge"] = r.found->d_without;
    j["edge_cells"] = r.found->edge_cells;
    j["balanced"] = r.found->balanced();
  }
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& [label, cells] : r.steps) {
    nlohmann::json sj;
    sj["step"] = label;
    sj["cells"] = cells.size();
    steps.push_back(sj);
  }
  j["steps"] = steps;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_periodicity(const std::string& config_path, const std::string& vector_arg,
                    Coord bound) {
  Config eta = load_config_file(config_path);
  nlohmann::json j;
  if (!vector_arg.empty()) {
    Vec u = parse_direction(vector_arg);
    CellSet region;
    if (auto r = eta.domain_rect()) {
      for (Coord y = r->y0; y < r->y0 + r->h; ++y)
        for (Coord x = r->x0; x < r->x0 + r->w; ++x) region.push_back({x, y});
    } else if (eta.kind() == SourceKind::periodic) {
      for (Coord y = 0; y < 2 * eta.period_h(); ++y)
        for (Coord x = 0; x < 2 * eta.period_w(); ++x) region.push_back({x, y});
    } else {
      region = *eta.domain_cells();
    }
    region = make_cell_set(std::move(region));
    RegionPeriodicityReport r = is_periodic_on_region(eta, region, u);
    j["vector"] = {u.x, u.y};
    j["holds"] = r.holds;
    if (r.first_violation) j["first_violation"] = {r.first_violation->x, r.first_violation->y};
    j["checked_pairs"] = r.checked_pairs;
  } else if (eta.kind() == SourceKind::periodic) {
    PeriodLattice lat = period_lattice(eta);
    nlohmann::json gens = nlohmann::json::array();
    for (const Vec& g : lat.generators) gens.push_back({g.x, g.y});
    j["generators"] = gens;
  } else {
    CellSet region;
    Rect r = *eta.domain_rect();
    for (Coord y = r.y0; y < r.y0 + r.h; ++y)
      for (Coord x = r.x0; x < r.x0 + r.w; ++x) region.push_back({x, y});
    region = make_cell_set(std::move(region));
    PeriodLattice lat = region_period_lattice(eta, region, bound);
    nlohmann::json gens = nlohmann::json::array();
    for (const Vec& g : lat.generators) gens.push_back({g.x, g.y});
    j["generators"] = gens;
    j["region"] = "window";
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_nivat_check(const std::string& campaign_path, const std::string& out_dir,
                    const std::string& formats_arg) {
  std::ifstream in(campaign_path);
  if (!in) throw std::runtime_error("cannot open '" + campaign_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  CampaignSpec spec =
      parse_campaign_json(buf.str(), fs::path(campaign_path).parent_path().string());
  CampaignReport report = run_campaign(spec);
  std::vector<std::string> formats;
  std::stringstream ss(formats_arg);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) formats.push_back(part);
  if (!out_dir.empty()) emit_report(report, out_dir, formats);
  for (const EntryReport& er : report.entries) {
    std::cout << er.name << ": " << (er.pass() ? "pass" : "FAIL");
    if (!er.error.empty()) std::cout << " (" << er.error << ")";
    std::cout << "\n";
    for (const CheckResult& c : er.checks)
      std::cout << "  " << c.name << ": "
                << (c.skipped ? "skipped" : (c.pass ? "pass" : "FAIL")) << "\n";
  }
  std::cout << "wall time: " << report.wall_seconds << " s\n";
  return report.pass() ? 0 : 1;
}

Config make_generated(const std::string& family, const std::string& word_name, Coord length,
                      const std::string& rule, int iterations, Coord modulus) {
  Alphabet binary({"0", "1"});
  if (family == "substitution") {
    if (word_name != "tm2d") throw std::runtime_error("unknown substitution rule '" + word_name + "'");
    Config c = Config::substitution(binary, thue_morse_2d_rule(), 0, iterations);
    return c.with_aperiodic_tag(true, "two-dimensional Thue-Morse fixed point");
  }
  if (family == "wordlift") {
    std::vector<Symbol> w;
    if (word_name == "fibonacci")
      w = fibonacci_word(static_cast<std::size_t>(length));
    else if (word_name == "thuemorse")
      w = thue_morse_word(static_cast<std::size_t>(length));
    else
      throw std::runtime_error("unknown word '" + word_name + "'");
    return Config::word_lift(binary, std::move(w), lift_rule_from_string(rule));
  }
  if (family == "periodic") {
    if (word_name == "checkerboard")
      return Config::periodic(binary, 2, 2, {0, 1, 1, 0});
    if (word_name == "constant") return Config::periodic(binary, 1, 1, {0});
    if (word_name == "stripes") {
      std::vector<std::string> toks;
      for (Coord i = 0; i < modulus; ++i) toks.push_back(std::to_string(i));
      Alphabet a(toks);
      std::vector<Symbol> grid;
      for (Coord x = 0; x < modulus; ++x) grid.push_back(static_cast<Symbol>(x));
      return Config::periodic(a, modulus, 1, std::move(grid));
    }
    if (word_name == "diagonal") {
      std::vector<std::string> toks;
      for (Coord i = 0; i < modulus; ++i) toks.push_back(std::to_string(i));
      Alphabet a(toks);
      std::vector<Symbol> grid;
      for (Coord y = 0; y < modulus; ++y)
        for (Coord x = 0; x < modulus; ++x)
          grid.push_back(static_cast<Symbol>((x + y) % modulus));
      return Config::periodic(a, modulus, modulus, std::move(grid));
    }
    throw std::runtime_error("unknown periodic pattern '" + word_name + "'");
  }
  throw std::runtime_error("unknown generator family '" + family + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact combinatorial analysis of two-dimensional configurations"};
  app.require_subcommand(1);

  std::string config_path, shape_path, out_path, out_dir, formats, directions = "auto";
  std::string mode = "greedy", direction, vector_arg, campaign_path;
  std::string gen_rule = "x", gen_name;
  Coord n = 4, k = 3, radius = 4, extent = 9, length = 200, bound = 8, modulus = 2;
  int iterations = 3;
  bool allow_window = false;

  auto* c_complexity = app.add_subcommand("complexity", "rectangular complexity profile");
  c_complexity->add_option("--config", config_path)->required();
  c_complexity->add_option("--n", n);
  c_complexity->add_option("--k", k);
  c_complexity->add_option("--shape", shape_path);
  c_complexity->add_option("--out", out_path);
  c_complexity->add_option("--format", formats);

  auto* c_genset = app.add_subcommand("generate-set", "search for a generating set");
  c_genset->add_option("--config", config_path)->required();
  c_genset->add_option("--n", n)->required();
  c_genset->add_option("--k", k);
  c_genset->add_option("--mode", mode)->check(CLI::IsMember({"greedy", "exhaustive"}));
  c_genset->add_flag("--allow-window", allow_window);

  auto* c_exp = app.add_subcommand("expansivity", "finite-radius expansivity verdicts");
  c_exp->add_option("--config", config_path)->required();
  c_exp->add_option("--radius", radius);
  c_exp->add_option("--extent", extent);
  c_exp->add_option("--directions", directions);
  c_exp->add_option("--out", out_path);

  auto* c_bal = app.add_subcommand("balanced", "balanced-set construction");
  c_bal->add_option("--config", config_path)->required();
  c_bal->add_option("--direction", direction)->required();
  c_bal->add_option("--n", n)->required();
  c_bal->add_flag("--allow-window", allow_window);

  auto* c_per = app.add_subcommand("periodicity", "period lattice and region checks");
  c_per->add_option("--config", config_path)->required();
  c_per->add_option("--vector", vector_arg);
  c_per->add_option("--bound", bound);

  auto* c_check = app.add_subcommand("nivat-check", "run a verification campaign");
  c_check->add_option("--campaign", campaign_path)->required();
  c_check->add_option("--out", out_dir);
  c_check->add_option("--format", formats);

  auto* c_gen = app.add_subcommand("gen", "generate corpus configurations");
  auto* g_sub = c_gen->add_subcommand("substitution", "block substitution window");
  g_sub->add_option("--rule", gen_name)->required();
  g_sub->add_option("--iterations", iterations);
  g_sub->add_option("--out", out_path)->required();
  auto* g_word = c_gen->add_subcommand("wordlift", "one-dimensional word lift");
  g_word->add_option("--word", gen_name)->required();
  g_word->add_option("--length", length);
  g_word->add_option("--rule", gen_rule)->check(CLI::IsMember({"x", "y", "x+y"}));
  g_word->add_option("--out", out_path)->required();
  auto* g_per = c_gen->add_subcommand("periodic", "periodic fundamental domain");
  g_per->add_option("--name", gen_name)->required();
  g_per->add_option("--modulus", modulus);
  g_per->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
    if (c_complexity->parsed())
      return cmd_complexity(config_path, n, k, shape_path, out_path,
                            [&] {
                              std::vector<std::string> fs_;
                              std::stringstream ss(formats);
                              std::string part;
                              while (std::getline(ss, part, ','))
                                if (!part.empty()) fs_.push_back(part);
                              return fs_;
                            }());
    if (c_genset->parsed()) return cmd_generate_set(config_path, n, k, mode, allow_window);
    if (c_exp->parsed())
      return cmd_expansivity(config_path, radius, extent, directions, out_path);
    if (c_bal->parsed()) return cmd_balanced(config_path, direction, n, allow_window);
    if (c_per->parsed()) return cmd_periodicity(config_path, vector_arg, bound);
    if (c_check->parsed()) return cmd_nivat_check(campaign_path, out_dir, formats);
    if (c_gen->parsed()) {
      std::string family = g_sub->parsed()    ? "substitution"
                           : g_word->parsed() ? "wordlift"
                                              : "periodic";
      Config c = make_generated(family, gen_name, length, gen_rule, iterations, modulus);
      save_config_file(c, out_path);
      std::cout << "wrote " << out_path << "\n";
      return 0;
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
