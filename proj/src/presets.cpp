#include <map>

#include "padelab/config.hpp"

namespace padelab {

namespace {

// f = 1/(z-2) + 1/(z-3) + 1/(z-4)
constexpr const char* kMontessusFunction = R"({
  "partial_fractions": {"poles": [2, 3, 4], "residues": [1, 1, 1]}
})";

const std::map<std::string, std::string>& preset_sources() {
  static const std::map<std::string, std::string> presets = {
      {"classical-exp", R"({
        "function": {"entire": {"exp": {"c": 1, "a": 1}}},
        "table": {"kind": "confluent", "point": 0},
        "E": {"kind": "disk", "center": 0, "radius": 0.1},
        "measure": {"kind": "discrete", "points": [0]},
        "K": {"kind": "circle", "center": 0, "radius": 0.5},
        "m": 1,
        "n_range": [1, 11],
        "stages": ["sweep", "rates"]
      })"},
      {"rational-exact", R"({
        "function": {"rational": {"num": [1, 0.5, 0, 0.25], "den": [[0, -3], [-1.5, 2], 1]}},
        "table": {"kind": "roots_of_unity", "center": 0, "radius": 1},
        "E": {"kind": "circle", "center": 0, "radius": 1},
        "measure": {"kind": "uniform_circle", "center": 0, "radius": 1},
        "K": {"kind": "circle", "center": 0, "radius": 1.2},
        "m": 2,
        "n_range": [3, 12],
        "stages": ["sweep", "rates", "exactness"]
      })"},
      {"montessus-m2", R"({
        "function": )" + std::string(kMontessusFunction) + R"(,
        "table": {"kind": "roots_of_unity", "center": 0, "radius": 1},
        "E": {"kind": "circle", "center": 0, "radius": 1},
        "measure": {"kind": "uniform_circle", "center": 0, "radius": 1},
        "K": {"kind": "circle", "center": 0, "radius": 1.5},
        "m": 2,
        "n_range": [10, 48],
        "tail": [24, 44],
        "eps": 0.01,
        "delta": 0.05,
        "precision": "quad",
        "distribution": {"n": [8, 16, 32, 64], "test_points": [2, [0, 1.8], -2.5]},
        "clusters": {"radius": 0.5, "samples": 256, "tail": [20, 48]}
      })"},
      {"equidistribution-roots", R"({
        "function": )" + std::string(kMontessusFunction) + R"(,
        "table": {"kind": "roots_of_unity", "center": 0, "radius": 1},
        "E": {"kind": "circle", "center": 0, "radius": 1},
        "measure": {"kind": "uniform_circle", "center": 0, "radius": 1},
        "K": {"kind": "circle", "center": 0, "radius": 1.5},
        "m": 2,
        "n_range": [60, 64],
        "distribution": {"n": [8, 16, 32, 64], "test_points": [2, [0, 1.8], -2.5]},
        "stages": ["distribution"]
      })"},
      {"arc-control", R"({
        "function": )" + std::string(kMontessusFunction) + R"(,
        "table": {"kind": "arc", "center": 0, "radius": 1, "theta0": -0.7853981633974483,
                  "theta1": 0.7853981633974483},
        "E": {"kind": "circle", "center": 0, "radius": 1},
        "measure": {"kind": "uniform_circle", "center": 0, "radius": 1},
        "K": {"kind": "circle", "center": 0, "radius": 1.5},
        "m": 2,
        "n_range": [10, 48],
        "tail": [24, 44],
        "precision": "quad",
        "distribution": {"n": [8, 16, 32, 64], "test_points": [2, [0, 1.8], -2.5]},
        "stages": ["sweep", "exactness", "distribution"]
      })"},
      {"interpolation-m0", R"({
        "function": {"partial_fractions": {"poles": [2], "residues": [1]}},
        "table": {"kind": "roots_of_unity", "center": 0, "radius": 1},
        "E": {"kind": "disk", "center": 0, "radius": 1},
        "measure": {"kind": "uniform_circle", "center": 0, "radius": 1},
        "K": {"kind": "disk", "center": 0, "radius": 1},
        "m": 0,
        "n_range": [4, 30],
        "stages": ["sweep", "rates"]
      })"},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : preset_sources()) names.push_back(name);
  return names;
}

nlohmann::json preset_document(const std::string& name) {
  const auto& presets = preset_sources();
  const auto it = presets.find(name);
  if (it == presets.end()) {
    std::string known;
    for (const auto& [n, t] : presets) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (" + known + ")");
  }
  nlohmann::json doc = nlohmann::json::parse(it->second);
  doc["id"] = name;
  return doc;
}

}  // namespace padelab
