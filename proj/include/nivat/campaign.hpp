#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nivat/configuration.hpp"
#include "nivat/expansivity.hpp"
#include "nivat/geometry.hpp"

namespace nivat {

struct CampaignScales {
  Coord n_max = 8;
  Coord k = 3;
  Coord radius = 4;
  Coord extent = 9;
  std::vector<Coord> balanced_n = {2, 3};
  int lemma_trials = 100;
};

struct CorpusEntry {
  std::string name;
  std::string path;                     // file reference, or
  std::optional<Config> inline_config;  // inline configuration
};

struct CampaignSpec {
  std::vector<CorpusEntry> corpus;
  std::vector<std::string> checks;  // profile, lemma-suite, expansivity-census,
                                    // balanced, period-bounds
  CampaignScales scales;
  std::uint64_t seed = 0;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;
  nlohmann::json details;
};

struct EntryReport {
  std::string name;
  bool loaded = false;
  std::string error;
  std::vector<CheckResult> checks;
  bool pass() const;
};

struct CampaignReport {
  CampaignSpec spec;
  std::vector<EntryReport> entries;
  double wall_seconds = 0;  // stdout only, never emitted to files
  bool pass() const;
};

CampaignSpec parse_campaign_json(const std::string& text, const std::string& base_dir);
CampaignReport run_campaign(const CampaignSpec& spec);

// Deterministic serialization (no timing data).
nlohmann::json report_to_json(const CampaignReport& report);

// Writes report.json plus per-entry CSV profiles, SVG plots, canonical
// corpus copies and generating-set shape files.  Formats is a subset of
// {"csv", "json", "svg"}.
void emit_report(const CampaignReport& report, const std::string& out_dir,
                 const std::vector<std::string>& formats);

nlohmann::json verdict_to_json(const ExpansivityVerdict& v, const Alphabet& a);
ExpansivityVerdict verdict_from_json(const nlohmann::json& j, const Alphabet& a);

// Probe directions every census tests in addition to generating-set edges.
std::vector<DirectedLine> census_probe_lines();

}  // namespace nivat
