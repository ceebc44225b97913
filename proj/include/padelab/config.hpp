#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "padelab/lab.hpp"

namespace padelab {

enum class Stage { sweep, rates, exactness, distribution, clusters };

const char* to_string(Stage s);
// Throws ConfigError for unknown names.
Stage parse_stage(const std::string& name);
// Pipeline order.
std::vector<Stage> all_stages();

struct DistributionSpec {
  std::vector<int> n;
  std::vector<Complex> test_points;
};

struct ClusterSpec {
  Real radius = 0.5;
  int samples = 256;
  std::optional<NRange> tail;
  int grid_cells = 400;  // lattice cells per side for tracing the boundary of D
};

/**
 * A validated experiment description.
 *
 * `doc` is the resolved document: preset merged in and every default
 * written out, so it alone reproduces the experiment. The typed fields
 * mirror it.
 */
struct ExperimentConfig {
  nlohmann::json doc;
  std::filesystem::path base_dir;  // relative paths (explicit tables) resolve here

  std::string id;
  int m = 0;
  NRange n_range;
  Real eps = 0.01;
  Real delta = 0.05;
  std::optional<NRange> tail;
  DistributionSpec distribution;
  ClusterSpec clusters;
  Precision precision = Precision::binary64;
  std::vector<Stage> stages;
  std::filesystem::path output_dir;

  bool wants(Stage s) const;
  // 16 hex digits; see config_hash.
  std::string hash() const;
};

/**
 * FNV-1a (64 bit) of the compact dump of doc without the keys id, preset,
 * output and stages. Object keys are sorted, so the hash does not depend
 * on key order in the source file.
 */
std::string config_hash(const nlohmann::json& doc);

/**
 * Parse and validate config text. A "preset" key loads that preset first
 * and merges the remaining keys over it (RFC 7386 merge patch).
 *
 * Throws ConfigError naming the JSON path and, when known, the line.
 */
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);
// Validate an already-built document (no line information).
ExperimentConfig resolve_config(nlohmann::json doc, const std::filesystem::path& base_dir = ".");

// Built-in presets.
std::vector<std::string> preset_names();
// Raw preset document; throws ConfigError("unknown preset ...").
nlohmann::json preset_document(const std::string& name);
ExperimentConfig preset_config(const std::string& name);

// JSON value constructors (also used by the writers).
Complex parse_complex(const nlohmann::json& j, const std::string& path);
nlohmann::json complex_json(Complex z);
// Finite values as numbers; inf, -inf and nan as strings.
nlohmann::json real_json(Real v);
Real real_from_json(const nlohmann::json& j);

TargetFunction make_function(const nlohmann::json& spec, const std::string& path = "/function");
TriangularTable make_table(const nlohmann::json& spec, int max_row, const std::filesystem::path& base_dir,
                           const std::string& path = "/table");
CompactSet make_set(const nlohmann::json& spec, const std::string& path);
Measure make_measure(const nlohmann::json& spec, const std::string& path = "/measure");

// The lab setup described by the config; the execution policy is parallel.
LabSetup make_setup(const ExperimentConfig& cfg);

}  // namespace padelab
