#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "padelab/config.hpp"
#include "padelab/errors.hpp"

using namespace padelab;
using nlohmann::json;

namespace {

const char* kSmall = R"({
  "id": "small",
  "function": {"partial_fractions": {"poles": [2, 3], "residues": [1, 1]}},
  "table": {"kind": "roots_of_unity"},
  "E": {"kind": "circle", "radius": 1},
  "measure": {"kind": "uniform_circle"},
  "m": 1,
  "n_range": [4, 12],
  "K": {"kind": "circle", "radius": 1.5},
  "stages": ["sweep", "rates"]
})";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("every preset resolves and round-trips through its resolved document") {
  const auto names = preset_names();
  CHECK(names.size() == 6);
  for (const auto& name : names) {
    CAPTURE(name);
    const auto cfg = preset_config(name);
    CHECK(cfg.id == name);
    CHECK(!cfg.stages.empty());
    const auto again = resolve_config(cfg.doc);
    CHECK(again.doc == cfg.doc);
    CHECK(again.hash() == cfg.hash());
    CHECK(cfg.hash().size() == 16);
    CHECK_NOTHROW(make_setup(cfg));
  }
  CHECK_THROWS_WITH_AS(preset_config("nope"), doctest::Contains("unknown preset"), ConfigError);
}

TEST_CASE("defaults are written into the resolved document") {
  const auto cfg = parse_config(kSmall);
  CHECK(cfg.doc.at("eps") == 0.01);
  CHECK(cfg.doc.at("delta") == 0.05);
  CHECK(cfg.doc.at("grid").at("interior") == 400);
  CHECK(cfg.doc.at("grid").at("boundary") == 2048);
  CHECK(cfg.doc.at("precision") == "binary64");
  CHECK(cfg.doc.at("table").at("max_row") == 14);
  CHECK(cfg.doc.at("output").at("dir") == "out");
  CHECK(cfg.n_range.lo == 4);
  CHECK(cfg.n_range.hi == 12);
  CHECK(!cfg.tail.has_value());
  CHECK(cfg.wants(Stage::rates));
  CHECK(!cfg.wants(Stage::clusters));
}

TEST_CASE("config hash") {
  const auto a = parse_config(kSmall);
  SUBCASE("independent of key order and formatting") {
    const auto b = parse_config(R"({"stages": ["sweep", "rates"], "n_range": [4, 12], "m": 1,
      "K": {"radius": 1.5, "kind": "circle"}, "measure": {"kind": "uniform_circle"},
      "E": {"radius": 1, "kind": "circle"}, "table": {"kind": "roots_of_unity"},
      "function": {"partial_fractions": {"residues": [1, 1], "poles": [2, 3]}}, "id": "small"})");
    CHECK(a.hash() == b.hash());
  }
  SUBCASE("ignores id, output and stages") {
    json doc = json::parse(kSmall);
    doc["id"] = "other";
    doc["output"] = {{"dir", "elsewhere"}};
    doc["stages"] = {"sweep"};
    CHECK(resolve_config(doc).hash() == a.hash());
  }
  SUBCASE("changes with the experiment") {
    json doc = json::parse(kSmall);
    doc["eps"] = 0.02;
    CHECK(resolve_config(doc).hash() != a.hash());
    doc = json::parse(kSmall);
    doc["function"]["partial_fractions"]["poles"] = {2, 3.5};
    CHECK(resolve_config(doc).hash() != a.hash());
  }
  SUBCASE("default written out equals default omitted") {
    json doc = json::parse(kSmall);
    doc["eps"] = 0.01;
    CHECK(resolve_config(doc).hash() == a.hash());
  }
}

TEST_CASE("presets merge with overrides") {
  const auto cfg = parse_config(R"({"preset": "montessus-m2", "eps": 0.001, "n_range": [10, 30], "tail": null,
                                        "clusters": {"tail": null}})");
  CHECK(cfg.id == "montessus-m2");
  CHECK(cfg.eps == 0.001);
  CHECK(cfg.n_range.hi == 30);
  CHECK(!cfg.tail.has_value());
  CHECK(cfg.precision == Precision::quad);
  CHECK(cfg.m == 2);
  CHECK(error_of(R"({"preset": "missing"})").find("unknown preset") != std::string::npos);
}

TEST_CASE("errors name the path and line") {
  const std::string bad_radius = "{\n  \"id\": \"x\",\n  \"function\": {\"partial_fractions\": {\"poles\": [2], \"residues\": [1]}},\n"
                                 "  \"E\": {\"kind\": \"disk\", \"radius\": -1},\n  \"table\": {\"kind\": \"roots_of_unity\"},\n"
                                 "  \"measure\": {\"kind\": \"uniform_circle\"},\n  \"m\": 0,\n  \"n_range\": [2, 4],\n"
                                 "  \"K\": {\"kind\": \"disk\", \"radius\": 1.5}\n}";
  const auto msg = error_of(bad_radius);
  CHECK(msg.find("/E") != std::string::npos);
  CHECK(msg.find("line 4") != std::string::npos);

  json doc = json::parse(kSmall);
  doc["colour"] = "red";
  const auto unknown = error_of(doc.dump(2));
  CHECK(unknown.find("/colour") != std::string::npos);
  CHECK(unknown.find("unknown key") != std::string::npos);

  CHECK(!error_of("{ not json").empty());
  CHECK(!error_of("[1, 2]").empty());
}

TEST_CASE("validation rejects inconsistent experiments") {
  auto with = [](const std::string& pointer, const json& value) {
    json doc = json::parse(kSmall);
    doc[json::json_pointer(pointer)] = value;
    return doc;
  };
  CHECK_THROWS_AS(resolve_config(with("/n_range", {12, 4})), ConfigError);
  CHECK_THROWS_AS(resolve_config(with("/m", -1)), ConfigError);
  CHECK_THROWS_AS(resolve_config(with("/eps", 0.0)), ConfigError);
  CHECK_THROWS_AS(resolve_config(with("/precision", "octuple")), ConfigError);
  CHECK_THROWS_AS(resolve_config(with("/stages", {"plot"})), ConfigError);
  CHECK_THROWS_AS(resolve_config(with("/table/kind", "chebyshev")), ConfigError);
  // A pole on E.
  CHECK_THROWS_AS(resolve_config(with("/function/partial_fractions/poles", {1, 3})), ConfigError);
  // The distribution stage needs test points off E.
  json dist = with("/stages", {"distribution"});
  CHECK_THROWS_AS(resolve_config(dist), ConfigError);
  dist["distribution"] = {{"n", {8}}, {"test_points", {1}}};
  CHECK_THROWS_AS(resolve_config(dist), ConfigError);
  dist["distribution"] = {{"n", {8}}, {"test_points", {2}}};
  CHECK_NOTHROW(resolve_config(dist));
}

TEST_CASE("explicit tables load relative to the config file") {
  const auto dir = std::filesystem::temp_directory_path() / "padelab_test_config";
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "nodes.csv");
    csv << "row,k,re,im\n";
    for (int row = 1; row <= 8; ++row)
      for (int k = 1; k <= row; ++k) {
        const Complex z = std::polar(1.0, 2.0 * kPi * (k - 1) / row);
        csv << row << ',' << k << ',' << z.real() << ',' << z.imag() << '\n';
      }
  }
  json doc = json::parse(kSmall);
  doc["n_range"] = {2, 6};
  doc["table"] = {{"kind", "explicit"}, {"path", "nodes.csv"}};
  {
    std::ofstream cfg(dir / "exp.json");
    cfg << doc.dump(2);
  }
  const auto cfg = load_config(dir / "exp.json");
  const auto setup = make_setup(cfg);
  CHECK(setup.table.max_row() >= 8);
  CHECK(std::abs(setup.table.row(4)[1] - Complex(0.0, 1.0)) < 1e-12);

  doc["n_range"] = {2, 9};
  std::ofstream(dir / "short.json") << doc.dump(2);
  CHECK_THROWS_WITH_AS(load_config(dir / "short.json"), doctest::Contains("rows"), ConfigError);
  std::filesystem::remove_all(dir);
}
