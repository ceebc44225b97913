#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "padelab/config.hpp"

namespace padelab {

inline constexpr const char* kVersion = PADELAB_VERSION;

// A numerical failure inside one pipeline stage.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct StageOutputs {
  Stage stage;
  std::vector<std::string> files;  // names relative to the manifest directory
};

struct RunManifest {
  std::string id;
  std::string hash;
  std::string version = kVersion;
  std::filesystem::path dir;
  std::vector<StageOutputs> stages;  // pipeline order
  std::vector<std::string> warnings;
  nlohmann::json config;

  // <id>_<hash>
  std::string stem() const { return id + "_" + hash; }
  std::filesystem::path path() const { return dir / (stem() + "_manifest.json"); }
  bool has(Stage s) const;
  nlohmann::json to_json() const;
};

RunManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& dir);
// Throws ConfigError when the file is missing or malformed.
RunManifest load_manifest(const std::filesystem::path& path);

/**
 * Run the configured stages into cfg.output_dir and write the manifest.
 *
 * Stages a requested stage depends on (the sweep for rates, exactness and
 * clusters; exactness for clusters) run as needed but only requested
 * stages write files. Throws StageError on numerical failure and
 * ConfigError when a stage finds the configuration unusable.
 */
RunManifest run_experiment(const ExperimentConfig& cfg);

enum class ReportFormat { csv, json };
ReportFormat parse_report_format(const std::string& name);

/**
 * Consolidated summary, one section per stage in the manifest, written next
 * to the manifest as <stem>_summary.{csv,json}. The CSV form is
 * section,key,value with nested keys joined by '/'.
 *
 * Throws ConfigError listing every missing stage output.
 */
std::filesystem::path export_report(const RunManifest& manifest, ReportFormat format);

// The summary document export_report writes in JSON form.
nlohmann::json report_document(const RunManifest& manifest);

}  // namespace padelab
