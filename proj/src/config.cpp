#include "padelab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace padelab {

using nlohmann::json;

namespace {

// ConfigError tied to a JSON pointer; parse_config adds the source line.
class PathError : public ConfigError {
 public:
  PathError(std::string path, const std::string& detail)
      : ConfigError("config error at " + (path.empty() ? std::string("/") : path) + ": " + detail),
        path_(std::move(path)),
        detail_(detail) {}
  const std::string& path() const { return path_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string path_;
  std::string detail_;
};

[[noreturn]] void fail(const std::string& path, const std::string& detail) { throw PathError(path, detail); }

// Input iterator over a string that counts the newlines it has passed.
class LineCountingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator() = default;
  LineCountingIterator(const char* p, int* line) : p_(p), line_(line) {}
  reference operator*() const { return *p_; }
  LineCountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    auto old = *this;
    ++*this;
    return old;
  }
  bool operator==(const LineCountingIterator& o) const { return p_ == o.p_; }

 private:
  const char* p_ = nullptr;
  int* line_ = nullptr;
};

// Records the line on which every key and array element starts.
class LineMapper : public nlohmann::json_sax<json> {
 public:
  explicit LineMapper(const int* line) : line_(line) {}
  std::map<std::string, int> lines;

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }
  bool start_object(std::size_t) override {
    open(false);
    return true;
  }
  bool key(string_t& k) override {
    stack_.back().key = k;
    lines.emplace(path(), *line_);
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override {
    open(true);
    return true;
  }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  struct Frame {
    bool array;
    std::size_t index = 0;
    std::string key;
  };

  std::string path() const {
    std::string p;
    for (const auto& f : stack_) {
      p += '/';
      p += f.array ? std::to_string(f.index) : f.key;
    }
    return p;
  }
  void element_start() {
    if (!stack_.empty() && stack_.back().array) lines.emplace(path(), *line_);
  }
  void element_end() {
    if (!stack_.empty() && stack_.back().array) ++stack_.back().index;
  }
  bool scalar() {
    element_start();
    element_end();
    return true;
  }
  void open(bool array) {
    element_start();
    stack_.push_back(Frame{array, 0, {}});
  }
  bool close() {
    stack_.pop_back();
    element_end();
    return true;
  }

  const int* line_;
  std::vector<Frame> stack_;
};

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      fail(join(path, k), "unknown key '" + k + "'");
  }
}

const json& require(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path, std::string("missing required key '") + key + "'");
  return j.at(key);
}

Real get_real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<Real>();
}

Real get_real(const json& obj, const std::string& path, const char* key, Real fallback) {
  return obj.contains(key) ? get_real(obj.at(key), join(path, key)) : fallback;
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  return obj.contains(key) ? get_int(obj.at(key), join(path, key)) : fallback;
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<Complex> get_complex_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of complex numbers");
  std::vector<Complex> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_complex(j[k], join(path, std::to_string(k))));
  return out;
}

json complex_list_json(std::span<const Complex> v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(complex_json(z));
  return a;
}

NRange get_range(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [lo, hi]");
  NRange r{get_int(j[0], path + "/0"), get_int(j[1], path + "/1")};
  if (r.lo < 0 || r.lo > r.hi) fail(path, "expected 0 <= lo <= hi");
  return r;
}

json range_json(const NRange& r) { return json::array({r.lo, r.hi}); }

// Wrap library validation errors in the path of the spec being built.
template <class Fn>
auto at_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const PathError&) {
    throw;
  } catch (const ConfigError& e) {
    fail(path, e.what());
  } catch (const NumericalError& e) {
    fail(path, e.what());
  }
}

TargetFunction parse_function(const json& spec, const std::string& path, json* normalized) {
  check_keys(spec, path, {"rational", "partial_fractions", "entire", "scale"});
  if (spec.contains("rational") && spec.contains("partial_fractions"))
    fail(path, "give either 'rational' or 'partial_fractions', not both");
  if (!spec.contains("rational") && !spec.contains("partial_fractions") && !spec.contains("entire"))
    fail(path, "function needs 'rational', 'partial_fractions' or 'entire'");

  json norm = json::object();
  Polynomial num, den = Polynomial::constant(1.0);
  if (spec.contains("rational")) {
    const std::string p = join(path, "rational");
    const json& r = spec.at("rational");
    check_keys(r, p, {"num", "den"});
    const auto n = get_complex_list(require(r, p, "num"), join(p, "num"));
    const auto d = get_complex_list(require(r, p, "den"), join(p, "den"));
    num = Polynomial(n);
    den = Polynomial(d);
    if (den.is_zero()) fail(join(p, "den"), "denominator is identically zero");
    norm["rational"] = {{"num", complex_list_json(n)}, {"den", complex_list_json(d)}};
  }
  if (spec.contains("partial_fractions")) {
    const std::string p = join(path, "partial_fractions");
    const json& r = spec.at("partial_fractions");
    check_keys(r, p, {"poles", "residues"});
    const auto poles = get_complex_list(require(r, p, "poles"), join(p, "poles"));
    const auto res = get_complex_list(require(r, p, "residues"), join(p, "residues"));
    const auto pf = at_path(p, [&] { return TargetFunction::partial_fractions(poles, res); });
    num = pf.numerator();
    den = pf.denominator();
    norm["partial_fractions"] = {{"poles", complex_list_json(poles)}, {"residues", complex_list_json(res)}};
  }
  std::optional<ExpTerm> exp_term;
  Polynomial entire;
  if (spec.contains("entire")) {
    const std::string p = join(path, "entire");
    const json& e = spec.at("entire");
    check_keys(e, p, {"exp", "poly"});
    json ne = json::object();
    if (e.contains("exp")) {
      const std::string pe = join(p, "exp");
      check_keys(e.at("exp"), pe, {"c", "a"});
      const Complex c = e.at("exp").contains("c") ? parse_complex(e.at("exp").at("c"), join(pe, "c")) : 1.0;
      const Complex a = e.at("exp").contains("a") ? parse_complex(e.at("exp").at("a"), join(pe, "a")) : 1.0;
      exp_term = ExpTerm{c, a};
      ne["exp"] = {{"c", complex_json(c)}, {"a", complex_json(a)}};
    }
    if (e.contains("poly")) {
      const auto c = get_complex_list(e.at("poly"), join(p, "poly"));
      entire = Polynomial(c);
      ne["poly"] = complex_list_json(c);
    }
    norm["entire"] = ne;
  }
  Complex scale = 1.0;
  if (spec.contains("scale")) {
    scale = parse_complex(spec.at("scale"), join(path, "scale"));
    if (scale == Complex(0.0)) fail(join(path, "scale"), "scale must be nonzero");
  }
  norm["scale"] = complex_json(scale);
  if (normalized) *normalized = norm;
  return at_path(path, [&] {
    TargetFunction f(num, den, exp_term, entire);
    return scale == Complex(1.0) ? f : f.scaled(scale);
  });
}

TriangularTable parse_table(const json& spec, int max_row, const std::filesystem::path& base_dir,
                            const std::string& path, json* normalized) {
  if (!spec.is_object()) fail(path, "expected an object");
  const std::string kind = get_string(require(spec, path, "kind"), join(path, "kind"));
  json norm{{"kind", kind}};
  if (spec.contains("max_row")) max_row = std::max(max_row, get_int(spec.at("max_row"), join(path, "max_row")));
  auto complex_or = [&](const char* key, Complex fallback) {
    return spec.contains(key) ? parse_complex(spec.at(key), join(path, key)) : fallback;
  };
  TriangularTable::Kind k;
  if (kind == "roots_of_unity") {
    check_keys(spec, path, {"kind", "center", "radius", "rotation", "max_row"});
    RootsOfUnityTable t{complex_or("center", 0.0), get_real(spec, path, "radius", 1.0),
                        get_real(spec, path, "rotation", 0.0)};
    norm.update({{"center", complex_json(t.center)}, {"radius", t.radius}, {"rotation", t.rotation}});
    k = t;
  } else if (kind == "confluent") {
    check_keys(spec, path, {"kind", "point", "max_row"});
    ConfluentTable t{complex_or("point", 0.0)};
    norm["point"] = complex_json(t.point);
    k = t;
  } else if (kind == "arc") {
    check_keys(spec, path, {"kind", "center", "radius", "theta0", "theta1", "max_row"});
    ArcTable t{complex_or("center", 0.0), get_real(spec, path, "radius", 1.0), get_real(spec, path, "theta0", 0.0),
               get_real(spec, path, "theta1", kPi)};
    norm.update({{"center", complex_json(t.center)},
                 {"radius", t.radius},
                 {"theta0", t.theta0},
                 {"theta1", t.theta1}});
    k = t;
  } else if (kind == "explicit") {
    check_keys(spec, path, {"kind", "path", "max_row"});
    const std::string file = get_string(require(spec, path, "path"), join(path, "path"));
    norm["path"] = file;
    const std::filesystem::path full = std::filesystem::path(file).is_absolute() ? std::filesystem::path(file) : base_dir / file;
    auto loaded = at_path(join(path, "path"), [&] { return load_explicit_table(full); });
    if (loaded.max_row() < max_row)
      fail(join(path, "path"), "explicit table has " + std::to_string(loaded.max_row()) + " rows, " +
                                   std::to_string(max_row) + " needed");
    norm["max_row"] = max_row;
    if (normalized) *normalized = norm;
    return loaded;
  } else {
    fail(join(path, "kind"), "unknown table kind '" + kind + "' (roots_of_unity, confluent, arc, explicit)");
  }
  norm["max_row"] = max_row;
  if (normalized) *normalized = norm;
  return at_path(path, [&] { return TriangularTable(k, max_row); });
}

CompactSet parse_set(const json& spec, const std::string& path, json* normalized) {
  if (!spec.is_object()) fail(path, "expected an object");
  const std::string kind = get_string(require(spec, path, "kind"), join(path, "kind"));
  json norm{{"kind", kind}};
  CompactSet::Shape shape;
  if (kind == "disk" || kind == "circle") {
    check_keys(spec, path, {"kind", "center", "radius"});
    const Complex c = spec.contains("center") ? parse_complex(spec.at("center"), join(path, "center")) : 0.0;
    const Real r = get_real(require(spec, path, "radius"), join(path, "radius"));
    norm.update({{"center", complex_json(c)}, {"radius", r}});
    if (kind == "disk")
      shape = DiskSet{c, r};
    else
      shape = CircleSet{c, r};
  } else if (kind == "interval") {
    check_keys(spec, path, {"kind", "a", "b"});
    const Complex a = parse_complex(require(spec, path, "a"), join(path, "a"));
    const Complex b = parse_complex(require(spec, path, "b"), join(path, "b"));
    norm.update({{"a", complex_json(a)}, {"b", complex_json(b)}});
    shape = IntervalSet{a, b};
  } else if (kind == "polygon") {
    check_keys(spec, path, {"kind", "vertices"});
    const auto v = get_complex_list(require(spec, path, "vertices"), join(path, "vertices"));
    norm["vertices"] = complex_list_json(v);
    shape = PolygonSet{v};
  } else {
    fail(join(path, "kind"), "unknown set kind '" + kind + "' (disk, circle, interval, polygon)");
  }
  if (normalized) *normalized = norm;
  return at_path(path, [&] { return CompactSet(shape); });
}

Measure parse_measure(const json& spec, const std::string& path, json* normalized) {
  if (!spec.is_object()) fail(path, "expected an object");
  const std::string kind = get_string(require(spec, path, "kind"), join(path, "kind"));
  json norm{{"kind", kind}};
  Measure::Kind k;
  if (kind == "uniform_circle") {
    check_keys(spec, path, {"kind", "center", "radius"});
    const Complex c = spec.contains("center") ? parse_complex(spec.at("center"), join(path, "center")) : 0.0;
    const Real r = get_real(spec, path, "radius", 1.0);
    norm.update({{"center", complex_json(c)}, {"radius", r}});
    k = UniformCircleMeasure{c, r};
  } else if (kind == "arcsine") {
    check_keys(spec, path, {"kind", "a", "b"});
    const Real a = get_real(require(spec, path, "a"), join(path, "a"));
    const Real b = get_real(require(spec, path, "b"), join(path, "b"));
    norm.update({{"a", a}, {"b", b}});
    k = ArcsineMeasure{a, b};
  } else if (kind == "discrete") {
    check_keys(spec, path, {"kind", "points"});
    const auto pts = get_complex_list(require(spec, path, "points"), join(path, "points"));
    norm["points"] = complex_list_json(pts);
    k = CountingMeasure(pts);
  } else {
    fail(join(path, "kind"), "unknown measure kind '" + kind + "' (uniform_circle, arcsine, discrete)");
  }
  if (normalized) *normalized = norm;
  return at_path(path, [&] { return Measure(k); });
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

const char* to_string(Stage s) {
  switch (s) {
    case Stage::sweep: return "sweep";
    case Stage::rates: return "rates";
    case Stage::exactness: return "exactness";
    case Stage::distribution: return "distribution";
    case Stage::clusters: return "clusters";
  }
  return "?";
}

Stage parse_stage(const std::string& name) {
  for (const Stage s : all_stages())
    if (name == to_string(s)) return s;
  throw ConfigError("unknown stage '" + name + "' (sweep, rates, exactness, distribution, clusters)");
}

std::vector<Stage> all_stages() {
  return {Stage::sweep, Stage::rates, Stage::exactness, Stage::distribution, Stage::clusters};
}

bool ExperimentConfig::wants(Stage s) const { return std::find(stages.begin(), stages.end(), s) != stages.end(); }

std::string ExperimentConfig::hash() const { return config_hash(doc); }

std::string config_hash(const json& doc) {
  json semantic = doc;
  for (const char* k : {"id", "preset", "output", "stages"}) semantic.erase(k);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(semantic.dump())));
  return buf;
}

Complex parse_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<Real>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<Real>(), j[1].get<Real>()};
  fail(path, "expected a number or [re, im]");
}

json complex_json(Complex z) { return json::array({real_json(z.real()), real_json(z.imag())}); }

json real_json(Real v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Real real_from_json(const json& j) {
  if (j.is_number()) return j.get<Real>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::numeric_limits<Real>::quiet_NaN();
  }
  throw ConfigError("expected a number, \"inf\", \"-inf\" or \"nan\"");
}

TargetFunction make_function(const json& spec, const std::string& path) {
  return parse_function(spec, path, nullptr);
}

TriangularTable make_table(const json& spec, int max_row, const std::filesystem::path& base_dir,
                           const std::string& path) {
  return parse_table(spec, max_row, base_dir, path, nullptr);
}

CompactSet make_set(const json& spec, const std::string& path) { return parse_set(spec, path, nullptr); }

Measure make_measure(const json& spec, const std::string& path) { return parse_measure(spec, path, nullptr); }

ExperimentConfig resolve_config(json doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail("", "config must be a JSON object");
  std::optional<std::string> preset;
  if (doc.contains("preset")) {
    preset = get_string(doc.at("preset"), "/preset");
    json base = preset_document(*preset);
    json patch = doc;
    patch.erase("preset");
    base.merge_patch(patch);
    doc = std::move(base);
  }
  check_keys(doc, "", {"id", "preset", "function", "table", "E", "measure", "m", "n_range", "K", "eps", "delta",
                       "grid", "tail", "distribution", "clusters", "precision", "pade", "stages", "output"});

  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  json out = json::object();

  cfg.id = doc.contains("id") ? get_string(doc.at("id"), "/id") : preset.value_or("experiment");
  if (cfg.id.empty() || cfg.id.find_first_of("/\\ ") != std::string::npos)
    fail("/id", "id must be non-empty without spaces or path separators");
  out["id"] = cfg.id;
  if (preset) out["preset"] = *preset;

  cfg.m = get_int(require(doc, "", "m"), "/m");
  if (cfg.m < 0) fail("/m", "m must be non-negative");
  out["m"] = cfg.m;
  cfg.n_range = get_range(require(doc, "", "n_range"), "/n_range");
  out["n_range"] = range_json(cfg.n_range);

  cfg.eps = get_real(doc, "", "eps", 0.01);
  if (!(cfg.eps > 0.0)) fail("/eps", "eps must be positive");
  out["eps"] = cfg.eps;
  cfg.delta = get_real(doc, "", "delta", 0.05);
  if (!(cfg.delta >= 0.0)) fail("/delta", "delta must be non-negative");
  out["delta"] = cfg.delta;

  GridSpec grid;
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    check_keys(g, "/grid", {"interior", "boundary"});
    grid.interior = get_int(g, "/grid", "interior", grid.interior);
    grid.boundary = get_int(g, "/grid", "boundary", grid.boundary);
    if (grid.interior < 1) fail("/grid/interior", "must be positive");
    if (grid.boundary < 3) fail("/grid/boundary", "must be at least 3");
  }
  out["grid"] = {{"interior", grid.interior}, {"boundary", grid.boundary}};

  auto sub_range = [&](const json& j, const std::string& path) -> std::optional<NRange> {
    if (j.is_null()) return std::nullopt;
    const NRange r = get_range(j, path);
    if (r.lo < cfg.n_range.lo || r.hi > cfg.n_range.hi) fail(path, "window must lie inside n_range");
    return r;
  };
  cfg.tail = doc.contains("tail") ? sub_range(doc.at("tail"), "/tail") : std::nullopt;
  out["tail"] = cfg.tail ? range_json(*cfg.tail) : json(nullptr);

  cfg.distribution.n = {cfg.n_range.hi};
  if (doc.contains("distribution")) {
    const json& d = doc.at("distribution");
    check_keys(d, "/distribution", {"n", "test_points"});
    if (d.contains("n")) {
      const json& nl = d.at("n");
      if (!nl.is_array() || nl.empty()) fail("/distribution/n", "expected a non-empty array of row indices");
      cfg.distribution.n.clear();
      for (std::size_t k = 0; k < nl.size(); ++k) {
        const int n = get_int(nl[k], "/distribution/n/" + std::to_string(k));
        if (n < 1) fail("/distribution/n/" + std::to_string(k), "row index must be at least 1");
        cfg.distribution.n.push_back(n);
      }
    }
    if (d.contains("test_points"))
      cfg.distribution.test_points = get_complex_list(d.at("test_points"), "/distribution/test_points");
  }
  out["distribution"] = {{"n", cfg.distribution.n}, {"test_points", complex_list_json(cfg.distribution.test_points)}};

  if (doc.contains("clusters")) {
    const json& c = doc.at("clusters");
    check_keys(c, "/clusters", {"radius", "samples", "tail", "grid_cells"});
    cfg.clusters.radius = get_real(c, "/clusters", "radius", cfg.clusters.radius);
    cfg.clusters.samples = get_int(c, "/clusters", "samples", cfg.clusters.samples);
    cfg.clusters.grid_cells = get_int(c, "/clusters", "grid_cells", cfg.clusters.grid_cells);
    if (c.contains("tail")) cfg.clusters.tail = sub_range(c.at("tail"), "/clusters/tail");
    if (!(cfg.clusters.radius > 0.0)) fail("/clusters/radius", "must be positive");
    if (cfg.clusters.samples < 1) fail("/clusters/samples", "must be positive");
    if (cfg.clusters.grid_cells < 4) fail("/clusters/grid_cells", "must be at least 4");
  }
  out["clusters"] = {{"radius", cfg.clusters.radius},
                     {"samples", cfg.clusters.samples},
                     {"grid_cells", cfg.clusters.grid_cells},
                     {"tail", cfg.clusters.tail ? range_json(*cfg.clusters.tail) : json(nullptr)}};

  cfg.precision = Precision::binary64;
  if (doc.contains("precision"))
    cfg.precision = at_path("/precision", [&] { return parse_precision(get_string(doc.at("precision"), "/precision")); });
  out["precision"] = std::string(to_string(cfg.precision));

  PadeOptions pade;
  if (doc.contains("pade")) {
    const json& p = doc.at("pade");
    check_keys(p, "/pade", {"tol_gcd", "tol_residual", "rank_tol", "ill_condition", "leja"});
    pade.tol_gcd = get_real(p, "/pade", "tol_gcd", pade.tol_gcd);
    pade.tol_residual = get_real(p, "/pade", "tol_residual", pade.tol_residual);
    pade.rank_tol = get_real(p, "/pade", "rank_tol", pade.rank_tol);
    pade.ill_condition = get_real(p, "/pade", "ill_condition", pade.ill_condition);
    if (p.contains("leja")) {
      if (!p.at("leja").is_boolean()) fail("/pade/leja", "expected true or false");
      pade.leja = p.at("leja").get<bool>();
    }
  }
  out["pade"] = {{"tol_gcd", pade.tol_gcd},
                 {"tol_residual", pade.tol_residual},
                 {"rank_tol", pade.rank_tol},
                 {"ill_condition", pade.ill_condition},
                 {"leja", pade.leja}};

  if (doc.contains("stages")) {
    const json& s = doc.at("stages");
    if (!s.is_array() || s.empty()) fail("/stages", "expected a non-empty array of stage names");
    std::set<Stage> seen;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::string path = "/stages/" + std::to_string(k);
      seen.insert(at_path(path, [&] { return parse_stage(get_string(s[k], path)); }));
    }
    for (const Stage st : all_stages())
      if (seen.count(st)) cfg.stages.push_back(st);
  } else {
    cfg.stages = all_stages();
  }
  out["stages"] = json::array();
  for (const Stage st : cfg.stages) out["stages"].push_back(to_string(st));

  std::string dir = "out";
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    if (o.is_string()) {
      dir = o.get<std::string>();
    } else {
      check_keys(o, "/output", {"dir"});
      dir = get_string(require(o, "/output", "dir"), "/output/dir");
    }
  }
  cfg.output_dir = dir;
  out["output"] = {{"dir", dir}};

  // Mathematical objects; building them validates them.
  int max_row = cfg.n_range.hi + cfg.m + 1;
  for (const int n : cfg.distribution.n) max_row = std::max(max_row, n);
  json norm;
  const TargetFunction f = parse_function(require(doc, "", "function"), "/function", &norm);
  out["function"] = norm;
  parse_table(require(doc, "", "table"), max_row, base_dir, "/table", &norm);
  out["table"] = norm;
  const CompactSet E = parse_set(require(doc, "", "E"), "/E", &norm);
  out["E"] = norm;
  parse_measure(require(doc, "", "measure"), "/measure", &norm);
  out["measure"] = norm;
  parse_set(require(doc, "", "K"), "/K", &norm);
  out["K"] = norm;

  for (const auto& p : f.poles())
    if (E.contains(p.location, 1e-12)) fail("/function", "f has a pole on E");
  if (cfg.wants(Stage::distribution)) {
    if (cfg.distribution.test_points.empty())
      fail("/distribution/test_points", "the distribution stage needs test points");
    for (std::size_t k = 0; k < cfg.distribution.test_points.size(); ++k)
      if (E.contains(cfg.distribution.test_points[k], 0.0))
        fail("/distribution/test_points/" + std::to_string(k), "test point lies in E");
  }

  cfg.doc = std::move(out);
  return cfg;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  int line = 1;
  LineMapper mapper(&line);
  const bool ok = json::sax_parse(LineCountingIterator(text.data(), &line),
                                  LineCountingIterator(text.data() + text.size(), &line), &mapper);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config error: invalid JSON: ") + e.what());
  }
  (void)ok;
  try {
    return resolve_config(std::move(doc), base_dir);
  } catch (const PathError& e) {
    // Nearest ancestor with a recorded line.
    std::string p = e.path();
    while (!p.empty() && !mapper.lines.count(p)) p = p.substr(0, p.rfind('/'));
    if (p.empty() && !mapper.lines.count(p)) throw;
    throw ConfigError("config error at " + (e.path().empty() ? std::string("/") : e.path()) + " (line " +
                      std::to_string(mapper.lines.at(p)) + "): " + e.detail());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config error: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

ExperimentConfig preset_config(const std::string& name) {
  return resolve_config(json{{"preset", name}});
}

LabSetup make_setup(const ExperimentConfig& cfg) {
  const json& d = cfg.doc;
  const int max_row = d.at("table").at("max_row").get<int>();
  PadeOptions pade;
  const json& p = d.at("pade");
  pade.tol_gcd = p.at("tol_gcd").get<Real>();
  pade.tol_residual = p.at("tol_residual").get<Real>();
  pade.rank_tol = p.at("rank_tol").get<Real>();
  pade.ill_condition = p.at("ill_condition").get<Real>();
  pade.leja = p.at("leja").get<bool>();
  GridSpec grid{d.at("grid").at("interior").get<int>(), d.at("grid").at("boundary").get<int>()};
  return LabSetup{make_function(d.at("function")),
                  make_table(d.at("table"), max_row, cfg.base_dir),
                  make_set(d.at("E"), "/E"),
                  make_measure(d.at("measure")),
                  cfg.m,
                  make_set(d.at("K"), "/K"),
                  grid,
                  cfg.precision,
                  pade,
                  kernels::Exec::parallel};
}

}  // namespace padelab
