#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "padelab/errors.hpp"
#include "padelab/runner.hpp"

using namespace padelab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("padelab_test_runner_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_montessus(const fs::path& out) {
  return parse_config(json{{"preset", "montessus-m2"},
                           {"precision", "binary64"},
                           {"n_range", {10, 30}},
                           {"tail", {16, 28}},
                           {"clusters", {{"tail", {16, 30}}, {"samples", 64}}},
                           {"distribution", {{"n", {8, 16}}}},
                           {"grid", {{"interior", 100}, {"boundary", 512}}},
                           {"output", {{"dir", out.string()}}}}
                          .dump());
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PADE_LAB_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("identical configs give byte-identical outputs") {
  const auto a = scratch("a"), b = scratch("b");
  json doc = preset_document("classical-exp");
  doc["output"] = {{"dir", a.string()}};
  const auto ma = run_experiment(resolve_config(doc));
  doc["output"] = {{"dir", b.string()}};
  const auto mb = run_experiment(resolve_config(doc));
  CHECK(ma.stem() == mb.stem());
  REQUIRE(ma.stages.size() == 2);
  int compared = 0;
  for (const auto& st : ma.stages)
    for (const auto& file : st.files) {
      CAPTURE(file);
      REQUIRE(fs::exists(a / file));
      CHECK(slurp(a / file) == slurp(b / file));
      ++compared;
    }
  CHECK(compared >= 4);
  const json sweep = json::parse(slurp(a / (ma.stem() + "_sweep.json")));
  CHECK(sweep.at("table_support") == "interior");
  CHECK(sweep.at("D_components").is_null());
  const auto loaded = load_manifest(ma.path());
  CHECK(loaded.hash == ma.hash);
  CHECK(loaded.has(Stage::rates));
  CHECK(!loaded.has(Stage::clusters));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("only requested stages write files") {
  const auto dir = scratch("rates_only");
  json doc = preset_document("classical-exp");
  doc["stages"] = {"rates"};
  doc["output"] = {{"dir", dir.string()}};
  const auto m = run_experiment(resolve_config(doc));
  REQUIRE(m.stages.size() == 1);
  CHECK(m.stages[0].stage == Stage::rates);
  CHECK(!fs::exists(dir / (m.stem() + "_sweep.json")));
  const auto report = report_document(m);
  CHECK(report.at("sections").size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("full pipeline export in both formats") {
  const auto dir = scratch("full");
  const auto m = run_experiment(small_montessus(dir));
  CHECK(m.stages.size() == 5);
  const auto json_path = export_report(m, ReportFormat::json);
  const auto csv_path = export_report(m, ReportFormat::csv);
  const json report = json::parse(slurp(json_path));
  CHECK(report.at("sections").size() == 5);
  CHECK(report.at("hash") == m.hash);
  const json sweep = json::parse(slurp(dir / (m.stem() + "_sweep.json")));
  CHECK(sweep.at("table_support") == "boundary");
  CHECK(sweep.at("D_components") == 1);

  // Every numeric CSV value agrees with the JSON summary to 15 significant digits.
  std::map<std::string, std::string> csv;
  std::istringstream lines(slurp(csv_path));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "section,key,value");
  while (std::getline(lines, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    csv[line.substr(0, c1) + "/" + line.substr(c1 + 1, c2 - c1 - 1)] = line.substr(c2 + 1);
  }
  int numbers = 0;
  for (const auto& s : report.at("sections")) {
    const auto section = s.at("section").get<std::string>();
    const json flat = s.at("summary").flatten();
    for (const auto& [pointer, value] : flat.items()) {
      if (!value.is_number_float()) continue;
      const auto key = section + pointer;
      CAPTURE(key);
      REQUIRE(csv.count(key) == 1);
      const double back = std::stod(csv[key]);
      const double v = value.get<double>();
      CHECK(std::abs(back - v) <= 1e-15 * std::abs(v));
      ++numbers;
    }
  }
  CHECK(numbers > 10);

  fs::remove(dir / (m.stem() + "_clusters.csv"));
  fs::remove(dir / (m.stem() + "_rates.json"));
  CHECK_THROWS_WITH_AS(export_report(m, ReportFormat::json), doctest::Contains("clusters"), ConfigError);
  CHECK_THROWS_WITH_AS(report_document(m), doctest::Contains("rates"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("clusters without a finite R_m is a stage failure") {
  const auto dir = scratch("no_r");
  json doc = preset_document("classical-exp");
  doc["stages"] = {"clusters"};
  doc["output"] = {{"dir", dir.string()}};
  CHECK_THROWS_AS(run_experiment(resolve_config(doc)), StageError);
  fs::remove_all(dir);
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch("cli");
  const std::string out = " --out " + dir.string();
  CHECK(run_cli("presets") == 0);
  CHECK(run_cli("sweep --preset classical-exp" + out) == 0);
  CHECK(run_cli("compute --preset classical-exp --n 4" + out) == 0);
  CHECK(run_cli("run --preset no-such-preset" + out) == 2);
  CHECK(run_cli("sweep --preset classical-exp --eps -1" + out) == 2);
  CHECK(run_cli("frobnicate") == 2);
  std::ofstream(dir / "bad.json") << "{\n  \"preset\": \"classical-exp\",\n  \"colour\": 1\n}\n";
  CHECK(run_cli("run --config " + (dir / "bad.json").string() + out) == 2);
  CHECK(run_cli("clusters --preset classical-exp" + out) == 3);
  CHECK(run_cli("export " + (dir / "missing_manifest.json").string() + " --format csv") == 2);
  fs::remove_all(dir);
}
