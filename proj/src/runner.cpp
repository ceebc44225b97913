#include "padelab/runner.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "padelab/format.hpp"
#include "padelab/report_io.hpp"

namespace padelab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kLevelGridCells = 200;

class StageWriter {
 public:
  StageWriter(RunManifest& manifest, Stage stage) : manifest_(manifest) {
    manifest_.stages.push_back({stage, {}});
  }

  template <class Fn>
  void text(const std::string& suffix, Fn&& write) {
    const std::string name = manifest_.stem() + "_" + suffix;
    std::ofstream out(manifest_.dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + (manifest_.dir / name).string());
    write(out);
    if (!out) throw ConfigError("write failed: " + (manifest_.dir / name).string());
    manifest_.stages.back().files.push_back(name);
  }

  void json_file(const std::string& suffix, const json& doc) {
    text(suffix, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  }

 private:
  RunManifest& manifest_;
};

template <class Fn>
auto in_stage(Stage s, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(to_string(s), e.what());
  }
}

}  // namespace

bool RunManifest::has(Stage s) const {
  for (const auto& st : stages)
    if (st.stage == s) return true;
  return false;
}

json RunManifest::to_json() const {
  json st = json::array();
  for (const auto& s : stages) st.push_back({{"stage", to_string(s.stage)}, {"files", s.files}});
  return {{"id", id}, {"hash", hash}, {"version", version}, {"stages", st}, {"warnings", warnings}, {"config", config}};
}

RunManifest manifest_from_json(const json& j, const fs::path& dir) {
  try {
    RunManifest m;
    m.id = j.at("id").get<std::string>();
    m.hash = j.at("hash").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.dir = dir;
    for (const auto& s : j.at("stages"))
      m.stages.push_back({parse_stage(s.at("stage").get<std::string>()), s.at("files").get<std::vector<std::string>>()});
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    m.config = j.at("config");
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

RunManifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read manifest " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed manifest " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

RunManifest run_experiment(const ExperimentConfig& cfg) {
  RunManifest manifest;
  manifest.id = cfg.id;
  manifest.hash = cfg.hash();
  manifest.dir = cfg.output_dir;
  manifest.config = cfg.doc;
  std::error_code ec;
  fs::create_directories(manifest.dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + manifest.dir.string() + ": " + ec.message());

  const LabSetup setup = make_setup(cfg);
  auto& warnings = manifest.warnings;

  const bool need_sweep = cfg.wants(Stage::sweep) || cfg.wants(Stage::rates) || cfg.wants(Stage::exactness) ||
                          cfg.wants(Stage::clusters);
  std::optional<BuildSweep> sweep;
  if (need_sweep) {
    sweep = in_stage(Stage::sweep, [&] { return build_sweep(setup, cfg.n_range); });
    for (const auto& e : sweep->entries)
      if (!e.approx) warnings.push_back("n=" + std::to_string(e.n) + ": build failed: " + e.error);
  }
  if (cfg.wants(Stage::sweep)) {
    StageWriter w(manifest, Stage::sweep);
    std::optional<LevelGrid> grid;
    if (std::isfinite(sweep->meromorphy.radius)) {
      const LevelRegion D = meromorphy_region(setup, sweep->meromorphy);
      grid = in_stage(Stage::sweep, [&] {
        return level_grid(D, level_region_box(D), kLevelGridCells, kLevelGridCells);
      });
    }
    json summary = sweep_summary(*sweep);
    const SupportClass support = setup.table.support_class(setup.E, cfg.n_range.hi + cfg.m + 1);
    summary["table_support"] = to_string(support);
    if (support == SupportClass::outside) warnings.push_back("sweep: table has nodes outside E");
    if (grid) {
      const int components = count_components(*grid);
      summary["D_components"] = components;
      if (components != 1) warnings.push_back("sweep: D_{m,mu} is not connected on the grid");
    } else {
      summary["D_components"] = nullptr;
    }
    w.json_file("sweep.json", summary);
    w.json_file("approximants.json", approximants_json(*sweep));
    w.text("roots.csv", [&](std::ostream& out) { write_roots_csv(out, *sweep); });
    if (grid) w.text("level_grid.csv", [&](std::ostream& out) { write_level_grid_csv(out, *grid); });
  }

  if (cfg.wants(Stage::rates)) {
    const RateSeries s = in_stage(Stage::rates, [&] { return rate_sequence(setup, *sweep, cfg.eps, cfg.tail); });
    if (s.omega_radius_sum > cfg.eps) warnings.push_back("rates: exceptional set radius sum exceeds eps");
    if (!s.upper_bound_ok) warnings.push_back("rates: inferred radius exceeds R_m beyond tolerance");
    StageWriter w(manifest, Stage::rates);
    w.json_file("rates.json", rates_summary(s));
    w.text("rates.csv", [&](std::ostream& out) { write_rates_csv(out, s); });
  }

  std::optional<ExactnessReport> exact;
  if (cfg.wants(Stage::exactness) || cfg.wants(Stage::clusters)) {
    exact = in_stage(Stage::exactness, [&] { return exactness_subsequence(setup, *sweep, cfg.delta, cfg.tail); });
    if (!exact->diagnostic.empty()) warnings.push_back("exactness: " + exact->diagnostic);
  }
  if (cfg.wants(Stage::exactness)) {
    StageWriter w(manifest, Stage::exactness);
    w.json_file("exactness.json", exactness_summary(*exact));
    w.text("exactness.csv", [&](std::ostream& out) { write_exactness_csv(out, *exact); });
  }

  if (cfg.wants(Stage::distribution)) {
    const auto rows = in_stage(Stage::distribution, [&] {
      return interpolation_distribution_test(setup.table, setup.mu, setup.E, cfg.distribution.n,
                                             cfg.distribution.test_points);
    });
    for (const auto& r : rows)
      if (r.skipped > 0)
        warnings.push_back("distribution: n=" + std::to_string(r.n) + ": " + std::to_string(r.skipped) +
                           " test points on atoms skipped");
    StageWriter w(manifest, Stage::distribution);
    w.json_file("distribution.json", distribution_summary(rows, cfg.distribution.test_points));
    w.text("distribution.csv", [&](std::ostream& out) { write_distribution_csv(out, rows); });
  }

  if (cfg.wants(Stage::clusters)) {
    if (!std::isfinite(sweep->meromorphy.radius))
      throw StageError("clusters", "D_{m,mu} is the whole plane; its boundary is empty");
    const LevelRegion D = meromorphy_region(setup, sweep->meromorphy);
    const std::optional<NRange> tail = cfg.clusters.tail ? cfg.clusters.tail : cfg.tail;
    const ClusterReport r = in_stage(Stage::clusters, [&] {
      return zero_cluster_scan(*exact, *sweep, D, cfg.clusters.radius, cfg.clusters.samples, tail,
                               cfg.clusters.grid_cells);
    });
    if (r.no_lambda) warnings.push_back("clusters: Lambda misses the tail window; scanned every built order");
    StageWriter w(manifest, Stage::clusters);
    w.json_file("clusters.json", clusters_summary(r));
    w.text("clusters.csv", [&](std::ostream& out) { write_clusters_csv(out, r); });
  }

  std::ofstream out(manifest.path(), std::ios::binary);
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw ConfigError("cannot write " + manifest.path().string());
  return manifest;
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw ConfigError("unknown report format '" + name + "' (csv, json)");
}

json report_document(const RunManifest& manifest) {
  std::vector<std::string> gaps;
  json sections = json::array();
  for (const auto& st : manifest.stages) {
    const std::string summary = manifest.stem() + "_" + to_string(st.stage) + ".json";
    for (const auto& f : st.files)
      if (!fs::exists(manifest.dir / f)) gaps.push_back(std::string(to_string(st.stage)) + ": " + f);
    if (!fs::exists(manifest.dir / summary)) {
      if (std::find(st.files.begin(), st.files.end(), summary) == st.files.end())
        gaps.push_back(std::string(to_string(st.stage)) + ": " + summary);
      continue;
    }
    std::ifstream in(manifest.dir / summary, std::ios::binary);
    try {
      sections.push_back({{"section", to_string(st.stage)}, {"summary", json::parse(in)}});
    } catch (const json::parse_error&) {
      gaps.push_back(std::string(to_string(st.stage)) + ": " + summary + " (unreadable)");
    }
  }
  if (!gaps.empty()) {
    std::string msg = "missing stage outputs:";
    for (const auto& g : gaps) msg += "\n  " + g;
    throw ConfigError(msg);
  }
  return {{"id", manifest.id}, {"hash", manifest.hash}, {"version", manifest.version},
          {"warnings", manifest.warnings}, {"sections", sections}};
}

namespace {

std::string scalar_text(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) return format_real(v.get<Real>());
  return v.get<std::string>();
}

void flatten(std::ostream& out, const std::string& section, const std::string& key, const json& v) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(out, section, key.empty() ? k : key + "/" + k, x);
  } else if (v.is_array()) {
    if (v.empty()) out << section << ',' << csv_field(key) << ",\n";
    for (std::size_t i = 0; i < v.size(); ++i) flatten(out, section, key + "/" + std::to_string(i), v[i]);
  } else {
    out << section << ',' << csv_field(key) << ',' << csv_field(scalar_text(v)) << '\n';
  }
}

}  // namespace

fs::path export_report(const RunManifest& manifest, ReportFormat format) {
  const json doc = report_document(manifest);
  const fs::path path =
      manifest.dir / (manifest.stem() + (format == ReportFormat::json ? "_summary.json" : "_summary.csv"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  if (format == ReportFormat::json) {
    out << doc.dump(2) << '\n';
  } else {
    out << "section,key,value\n";
    for (const auto& s : doc.at("sections")) flatten(out, s.at("section").get<std::string>(), "", s.at("summary"));
  }
  return path;
}

}  // namespace padelab
