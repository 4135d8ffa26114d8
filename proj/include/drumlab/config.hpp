#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drumlab/grid.hpp"
#include "drumlab/shape.hpp"

namespace drumlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace cfg {

struct Value {
  enum Kind { Num, Str, Bool, Arr } kind = Num;
  double num = 0.0;
  std::string str;
  bool flag = false;
  std::vector<Value> arr;
  int line = 0;
};

struct Entry {
  std::string key;
  Value value;
  int line = 0;
  mutable bool used = false;
};

using SectionMap = std::map<std::string, std::vector<Entry>>;

inline void fail(const std::string& file, int line, const std::string& msg) {
  std::ostringstream os;
  os << file << ":" << line << ": " << msg;
  throw ConfigError(os.str());
}

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline Value parse_value(const std::string& file, int line, const std::string& text,
                         std::size_t& pos);

inline void skip_ws(const std::string& text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

inline Value parse_value(const std::string& file, int line, const std::string& text,
                         std::size_t& pos) {
  skip_ws(text, pos);
  if (pos >= text.size()) fail(file, line, "missing value");
  Value v;
  v.line = line;
  const char c = text[pos];
  if (c == '"') {
    v.kind = Value::Str;
    ++pos;
    while (pos < text.size() && text[pos] != '"') v.str.push_back(text[pos++]);
    if (pos >= text.size()) fail(file, line, "unterminated string");
    ++pos;
    return v;
  }
  if (c == '[') {
    v.kind = Value::Arr;
    ++pos;
    skip_ws(text, pos);
    if (pos < text.size() && text[pos] == ']') {
      ++pos;
      return v;
    }
    for (;;) {
      v.arr.push_back(parse_value(file, line, text, pos));
      skip_ws(text, pos);
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ']') {
        ++pos;
        return v;
      }
      fail(file, line, "expected ',' or ']' in array");
    }
  }
  if (text.compare(pos, 4, "true") == 0) {
    v.kind = Value::Bool;
    v.flag = true;
    pos += 4;
    return v;
  }
  if (text.compare(pos, 5, "false") == 0) {
    v.kind = Value::Bool;
    v.flag = false;
    pos += 5;
    return v;
  }
  char* end = nullptr;
  const double num = std::strtod(text.c_str() + pos, &end);
  if (end == text.c_str() + pos) fail(file, line, "cannot parse value '" + text.substr(pos) + "'");
  v.kind = Value::Num;
  v.num = num;
  pos = static_cast<std::size_t>(end - text.c_str());
  return v;
}

inline SectionMap parse_sections(const std::string& file, const std::string& text) {
  SectionMap sections;
  std::string section;  // "" = top level
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    // strip comments outside strings
    std::string stripped;
    bool in_str = false;
    for (char ch : raw) {
      if (ch == '"') in_str = !in_str;
      if (ch == '#' && !in_str) break;
      stripped.push_back(ch);
    }
    const std::string s = trim(stripped);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(file, line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail(file, line, "empty section name");
      sections[section];  // record even if empty
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(file, line, "expected 'key = value'");
    Entry e;
    e.key = trim(s.substr(0, eq));
    e.line = line;
    if (e.key.empty()) fail(file, line, "empty key");
    std::size_t pos = 0;
    const std::string rhs = trim(s.substr(eq + 1));
    e.value = parse_value(file, line, rhs, pos);
    skip_ws(rhs, pos);
    if (pos != rhs.size()) fail(file, line, "trailing characters after value");
    sections[section].push_back(std::move(e));
  }
  return sections;
}

// Typed access with unknown-key detection.
class Section {
 public:
  Section(const std::string& file, std::string name, const std::vector<Entry>* entries)
      : file_(file), name_(std::move(name)), entries_(entries) {}

  const Value* find(const std::string& key) const {
    if (!entries_) return nullptr;
    for (const Entry& e : *entries_)
      if (e.key == key) {
        e.used = true;
        return &e.value;
      }
    return nullptr;
  }

  bool has(const std::string& key) const { return find(key) != nullptr; }

  double num(const std::string& key, double fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Num) fail(file_, v->line, "key '" + key + "' must be a number");
    return v->num;
  }
  double require_num(const std::string& key) const {
    const Value* v = find(key);
    if (!v) fail(file_, 0, "missing key '" + key + "' in " + label());
    if (v->kind != Value::Num) fail(file_, v->line, "key '" + key + "' must be a number");
    return v->num;
  }
  std::string str(const std::string& key, const std::string& fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Str) fail(file_, v->line, "key '" + key + "' must be a string");
    return v->str;
  }
  std::string require_str(const std::string& key) const {
    const Value* v = find(key);
    if (!v) fail(file_, 0, "missing key '" + key + "' in " + label());
    if (v->kind != Value::Str) fail(file_, v->line, "key '" + key + "' must be a string");
    return v->str;
  }
  Vec2 pair(const std::string& key, int line_hint = 0) const {
    const Value* v = find(key);
    if (!v) fail(file_, line_hint, "missing key '" + key + "' in " + label());
    return to_pair(*v, key);
  }
  std::vector<Vec2> pair_list(const std::string& key) const {
    const Value* v = find(key);
    if (!v) fail(file_, 0, "missing key '" + key + "' in " + label());
    if (v->kind != Value::Arr) fail(file_, v->line, "key '" + key + "' must be an array");
    std::vector<Vec2> out;
    out.reserve(v->arr.size());
    for (const Value& e : v->arr) out.push_back(to_pair(e, key));
    return out;
  }

  void check_no_unknown(const std::vector<std::string>& known) const {
    if (!entries_) return;
    for (const Entry& e : *entries_) {
      if (e.used) continue;
      bool ok = false;
      for (const std::string& k : known)
        if (k == e.key) ok = true;
      if (!ok) fail(file_, e.line, "unknown key '" + e.key + "' in " + label());
    }
  }

  bool present() const { return entries_ != nullptr; }

 private:
  std::string label() const { return name_.empty() ? "top level" : "[" + name_ + "]"; }

  Vec2 to_pair(const Value& v, const std::string& key) const {
    if (v.kind != Value::Arr || v.arr.size() != 2 || v.arr[0].kind != Value::Num ||
        v.arr[1].kind != Value::Num)
      fail(file_, v.line, "key '" + key + "' must be a [x, y] pair");
    return {v.arr[0].num, v.arr[1].num};
  }

  std::string file_;
  std::string name_;
  const std::vector<Entry>* entries_;
};

}  // namespace cfg

struct ExperimentConfig {
  Shape domain = Shape::rectangle(0, 0, 1, 1);
  bool has_domain = false;
  std::optional<Shape> obstacle;
  double h = 1.0 / 64;
  std::optional<BBox> grid_box;
  double tol = 1e-8;
  int max_iter = 500;
  double lattice_step = 0.05;
  double refine_shrink = 0.5;
  int refine_levels = 0;
  int heart_directions = 64;
  double heart_tol = 1e-5;
  int asym_boundary = 200;
  int asym_radii = 20;
  int asym_samples = 4000;
  double asym_min_radius = 0.0;  // 0 = diameter/512
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  std::string constants_profile = "analytic-2d";  // or a profile file path
  std::vector<std::pair<std::string, Shape>> family;
  std::string raw_text;

  GridSpec make_grid(const Shape& shape) const {
    if (grid_box) return GridSpec(grid_box->lo, grid_box->hi, h);
    const BBox bb = shape.bbox();
    return GridSpec(bb.lo, bb.hi, h);
  }
};

namespace cfg {

inline Shape shape_from_section(const std::string& file, const Section& sec) {
  const std::string kind = sec.require_str("kind");
  if (kind == "disc") {
    const Vec2 center = sec.has("center") ? sec.pair("center") : Vec2{0, 0};
    const double radius = sec.require_num("radius");
    sec.check_no_unknown({"kind", "center", "radius"});
    if (!(radius > 0)) fail(file, 0, "disc radius must be positive");
    return Shape::disc(center, radius);
  }
  if (kind == "convex_polygon" || kind == "polygon") {
    const std::vector<Vec2> verts = sec.pair_list("vertices");
    sec.check_no_unknown({"kind", "vertices"});
    return Shape::polygon(verts, kind == "convex_polygon");
  }
  fail(file, 0, "unknown shape kind '" + kind + "' (expected disc, convex_polygon, polygon)");
  return Shape::disc({0, 0}, 1);  // unreachable
}

}  // namespace cfg

inline ExperimentConfig parse_config_text(const std::string& text, const std::string& file) {
  ExperimentConfig c;
  c.raw_text = text;
  cfg::SectionMap sections;
  try {
    sections = cfg::parse_sections(file, text);
  } catch (const ConfigError&) {
    throw;
  }
  auto section = [&](const std::string& name) {
    const auto it = sections.find(name);
    return cfg::Section(file, name, it == sections.end() ? nullptr : &it->second);
  };

  const cfg::Section top = section("");
  c.seed = static_cast<std::uint64_t>(top.num("seed", 42));
  top.check_no_unknown({"seed"});

  const cfg::Section dom = section("domain");
  if (dom.present()) {
    c.domain = cfg::shape_from_section(file, dom);
    c.has_domain = true;
  }
  const cfg::Section obs = section("obstacle");
  if (obs.present()) c.obstacle = cfg::shape_from_section(file, obs);

  const cfg::Section grid = section("grid");
  if (grid.present()) {
    c.h = grid.num("h", c.h);
    if (grid.has("box")) {
      const cfg::Value* v = grid.find("box");
      if (v->kind != cfg::Value::Arr || v->arr.size() != 2)
        cfg::fail(file, v->line, "key 'box' must be [[x0, y0], [x1, y1]]");
      const cfg::Value& lo = v->arr[0];
      const cfg::Value& hi = v->arr[1];
      if (lo.kind != cfg::Value::Arr || lo.arr.size() != 2 || hi.kind != cfg::Value::Arr ||
          hi.arr.size() != 2)
        cfg::fail(file, v->line, "key 'box' must be [[x0, y0], [x1, y1]]");
      c.grid_box = BBox{{lo.arr[0].num, lo.arr[1].num}, {hi.arr[0].num, hi.arr[1].num}};
    }
    grid.check_no_unknown({"h", "box"});
  }

  const cfg::Section solver = section("solver");
  if (solver.present()) {
    c.tol = solver.num("tol", c.tol);
    c.max_iter = static_cast<int>(solver.num("max_iter", c.max_iter));
    solver.check_no_unknown({"tol", "max_iter"});
  }

  const cfg::Section sweep = section("sweep");
  if (sweep.present()) {
    c.lattice_step = sweep.num("lattice_step", c.lattice_step);
    c.refine_shrink = sweep.num("refine_shrink", c.refine_shrink);
    c.refine_levels = static_cast<int>(sweep.num("refine_levels", c.refine_levels));
    sweep.check_no_unknown({"lattice_step", "refine_shrink", "refine_levels"});
  }

  const cfg::Section heart_sec = section("heart");
  if (heart_sec.present()) {
    c.heart_directions = static_cast<int>(heart_sec.num("n_directions", c.heart_directions));
    c.heart_tol = heart_sec.num("tol", c.heart_tol);
    heart_sec.check_no_unknown({"n_directions", "tol"});
  }

  const cfg::Section asym = section("asymmetry");
  if (asym.present()) {
    c.asym_boundary = static_cast<int>(asym.num("n_boundary", c.asym_boundary));
    c.asym_radii = static_cast<int>(asym.num("n_radii", c.asym_radii));
    c.asym_samples = static_cast<int>(asym.num("n_samples", c.asym_samples));
    c.asym_min_radius = asym.num("min_radius", c.asym_min_radius);
    asym.check_no_unknown({"n_boundary", "n_radii", "n_samples", "min_radius"});
  }

  const cfg::Section output = section("output");
  if (output.present()) {
    c.out_dir = output.str("dir", c.out_dir);
    output.check_no_unknown({"dir"});
  }

  const cfg::Section consts = section("constants");
  if (consts.present()) {
    c.constants_profile = consts.str("profile", c.constants_profile);
    consts.check_no_unknown({"profile"});
  }

  for (const auto& [name, entries] : sections) {
    if (name.rfind("family.", 0) == 0) {
      const cfg::Section fam(file, name, &entries);
      c.family.emplace_back(name.substr(7), cfg::shape_from_section(file, fam));
    } else if (name != "" && name != "domain" && name != "obstacle" && name != "grid" &&
               name != "solver" && name != "sweep" && name != "heart" &&
               name != "asymmetry" && name != "output" && name != "constants") {
      cfg::fail(file, 0, "unknown section [" + name + "]");
    }
  }

  if (!(c.h > 0)) cfg::fail(file, 0, "grid spacing 'h' must be positive");
  if (!(c.tol > 0)) cfg::fail(file, 0, "solver 'tol' must be positive");
  if (!(c.lattice_step > 0)) cfg::fail(file, 0, "'lattice_step' must be positive");
  if (c.heart_directions < 8) cfg::fail(file, 0, "'n_directions' must be at least 8");
  if (!(c.heart_tol > 0)) cfg::fail(file, 0, "heart 'tol' must be positive");
  if (c.asym_boundary < 1 || c.asym_radii < 1 || c.asym_samples < 1)
    cfg::fail(file, 0, "asymmetry sample counts must be positive");
  return c;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace drumlab
