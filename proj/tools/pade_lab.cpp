// pade-lab: run multipoint Pade experiments from JSON configs or presets.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numerical stage
// failure, 1 anything else.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "padelab/config.hpp"
#include "padelab/report_io.hpp"
#include "padelab/runner.hpp"

namespace {

using namespace padelab;
using nlohmann::json;

struct CommonFlags {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<int> n_min;
  std::optional<int> n_max;
  std::optional<double> eps;
  std::optional<double> delta;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  auto* c = cmd->add_option("--config", f.config, "experiment config (JSON)");
  auto* p = cmd->add_option("--preset", f.preset, "built-in preset name");
  c->excludes(p);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--n-min", f.n_min, "lowest order n");
  cmd->add_option("--n-max", f.n_max, "highest order n");
  cmd->add_option("--eps", f.eps, "exceptional set size");
  cmd->add_option("--delta", f.delta, "Lambda detection band");
}

bool window_fits(const json& w, const NRange& r) {
  return w.is_null() || (w[0].get<int>() >= r.lo && w[1].get<int>() <= r.hi);
}

// Load the config and apply command-line overrides.
ExperimentConfig load(const CommonFlags& f, std::optional<std::vector<Stage>> stages) {
  if (f.config.empty() && f.preset.empty()) throw ConfigError("give --config <path> or --preset <name>");
  ExperimentConfig cfg = f.config.empty() ? preset_config(f.preset) : load_config(f.config);
  json doc = cfg.doc;
  bool changed = false;
  if (f.n_min || f.n_max) {
    NRange r = cfg.n_range;
    if (f.n_min) r.lo = *f.n_min;
    if (f.n_max) r.hi = *f.n_max;
    doc["n_range"] = json::array({r.lo, r.hi});
    if (!window_fits(doc["tail"], r)) {
      std::cerr << "note: tail window " << doc["tail"].dump() << " outside the new n range; using the default\n";
      doc["tail"] = nullptr;
    }
    if (!window_fits(doc["clusters"]["tail"], r)) {
      std::cerr << "note: cluster tail window outside the new n range; using the default\n";
      doc["clusters"]["tail"] = nullptr;
    }
    if (f.n_max && doc["distribution"]["n"] == json::array({cfg.n_range.hi})) {
      doc["distribution"]["n"] = json::array({r.hi});
    }
    changed = true;
  }
  if (f.eps) doc["eps"] = *f.eps, changed = true;
  if (f.delta) doc["delta"] = *f.delta, changed = true;
  if (!f.out.empty()) doc["output"] = {{"dir", f.out}}, changed = true;
  if (stages) {
    doc["stages"] = json::array();
    for (const Stage s : *stages) doc["stages"].push_back(to_string(s));
    changed = true;
  }
  if (!changed) return cfg;
  // The resolved document already contains the preset's content.
  doc.erase("preset");
  return resolve_config(doc, cfg.base_dir);
}

int run(const CommonFlags& f, std::optional<std::vector<Stage>> stages) {
  const ExperimentConfig cfg = load(f, std::move(stages));
  const RunManifest m = run_experiment(cfg);
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << m.path().string() << '\n';
  return 0;
}

int compute(const CommonFlags& f, int n) {
  ExperimentConfig cfg = load(f, std::nullopt);
  LabSetup setup = make_setup(cfg);
  const auto report = radius_of_meromorphy(setup.f, setup.mu, setup.m, &setup.E);
  setup.pade.domain = meromorphy_region(setup, report);
  if (n + setup.m + 1 > setup.table.max_row()) {
    json doc = cfg.doc;
    doc.erase("preset");
    doc["table"]["max_row"] = n + setup.m + 1;
    setup.table = make_table(doc["table"], n + setup.m + 1, cfg.base_dir);
  }
  PadeApproximant a;
  try {
    if (setup.precision == Precision::quad)
      a = to_binary64(build_pade<Quad>(setup.f, setup.table, n, setup.m, setup.pade));
    else
      a = build_pade<Real>(setup.f, setup.table, n, setup.m, setup.pade);
  } catch (const NumericalError& e) {
    throw StageError("compute", e.what());
  }
  const json doc = approximant_json(a);
  if (!f.out.empty()) {
    std::filesystem::create_directories(f.out);
    const auto path = std::filesystem::path(f.out) / (cfg.id + "_" + cfg.hash() + "_compute_n" + std::to_string(n) + ".json");
    std::ofstream(path, std::ios::binary) << doc.dump(2) << '\n';
    std::cout << path.string() << '\n';
  } else {
    std::cout << doc.dump(2) << '\n';
  }
  return 0;
}

void apply_thread_cap() {
  const char* env = std::getenv("PADE_LAB_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long t = std::strtol(env, &end, 10);
  if (*end != '\0' || t < 1) throw ConfigError(std::string("PADE_LAB_THREADS must be a positive integer, got '") + env + "'");
  kernels::set_thread_cap(static_cast<int>(t));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipoint Pade approximation experiments", "pade-lab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonFlags flags;
  int n = 0;
  std::string manifest;
  std::string format = "json";

  auto* c_compute = app.add_subcommand("compute", "build one approximant and print it as JSON");
  add_common(c_compute, flags);
  c_compute->add_option("--n", n, "order n")->required()->check(CLI::NonNegativeNumber);
  auto* c_sweep = app.add_subcommand("sweep", "build the order sweep and the convergence rates");
  add_common(c_sweep, flags);
  auto* c_exact = app.add_subcommand("exactness", "detect the subsequence with exact rates");
  add_common(c_exact, flags);
  auto* c_dist = app.add_subcommand("distribution", "compare node distributions with the measure");
  add_common(c_dist, flags);
  auto* c_clusters = app.add_subcommand("clusters", "scan zero clusters along the boundary of D");
  add_common(c_clusters, flags);
  auto* c_run = app.add_subcommand("run", "run every stage the config asks for");
  add_common(c_run, flags);
  auto* c_export = app.add_subcommand("export", "write a consolidated summary of a finished run");
  c_export->add_option("manifest", manifest, "manifest JSON written by a run")->required();
  c_export->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* c_presets = app.add_subcommand("presets", "list the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    apply_thread_cap();
    if (*c_compute) return compute(flags, n);
    if (*c_sweep) return run(flags, std::vector{Stage::sweep, Stage::rates});
    if (*c_exact) return run(flags, std::vector{Stage::exactness});
    if (*c_dist) return run(flags, std::vector{Stage::distribution});
    if (*c_clusters) return run(flags, std::vector{Stage::clusters});
    if (*c_run) return run(flags, std::nullopt);
    if (*c_export) {
      const RunManifest m = load_manifest(manifest);
      std::cout << export_report(m, parse_report_format(format)).string() << '\n';
      return 0;
    }
    if (*c_presets) {
      for (const auto& name : preset_names()) std::cout << name << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "pade-lab: " << e.what() << '\n';
    return 2;
  } catch (const StageError& e) {
    std::cerr << "pade-lab: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "pade-lab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
