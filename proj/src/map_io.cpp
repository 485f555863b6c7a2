#include "ltlnav/map_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

namespace ltlnav {

using nlohmann::json;

FormatError::FormatError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s, const std::string& source, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError(source, line, "expected a number, got '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& source, std::size_t line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError(source, line, "expected an integer, got '" + s + "'");
  }
}

Cell to_cell(const std::string& s, const std::string& source, std::size_t line) {
  auto parts = split(s, ',');
  if (parts.size() != 2) throw FormatError(source, line, "expected 'x,y', got '" + s + "'");
  return {to_int(parts[0], source, line), to_int(parts[1], source, line)};
}

Point2 to_point(const std::string& s, const std::string& source, std::size_t line) {
  auto parts = split(s, ',');
  if (parts.size() != 2) throw FormatError(source, line, "expected 'x,y', got '" + s + "'");
  return {to_double(parts[0], source, line), to_double(parts[1], source, line)};
}

bool reserved_char(char c) { return c == '.' || c == '#' || c == '?'; }

/// `chair,r=0.75,walkable,id=object_7,alias=a|b` -> ClassInfo
ClassInfo parse_class_spec(const std::string& spec, const std::string& source, std::size_t line) {
  auto fields = split(spec, ',');
  ClassInfo info;
  info.name = fields.at(0);
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const std::string& f = fields[i];
    const auto eq = f.find('=');
    const std::string key = trim(f.substr(0, eq));
    const std::string value = eq == std::string::npos ? std::string() : trim(f.substr(eq + 1));
    if (key == "r") {
      info.radius = to_double(value, source, line);
    } else if (key == "walkable") {
      info.walkable = true;
    } else if (key == "id") {
      info.object_id = value;
    } else if (key == "alias") {
      for (auto& a : split(value, '|')) {
        if (!a.empty()) info.aliases.push_back(a);
      }
    } else {
      throw FormatError(source, line, "unknown class attribute '" + key + "'");
    }
  }
  return info;
}

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  // Prefer the shortest representation that round-trips.
  for (int p = 1; p <= 17; ++p) {
    std::ostringstream s;
    s.precision(p);
    s << v;
    if (std::stod(s.str()) == v) return s.str();
  }
  return out.str();
}

std::map<ClassId, char> assign_chars(const SemanticGrid& g) {
  std::map<ClassId, char> out;
  std::string pool;
  for (char c = 'a'; c <= 'z'; ++c) pool += c;
  for (char c = 'A'; c <= 'Z'; ++c) pool += c;
  for (char c = '0'; c <= '9'; ++c) pool += c;
  std::string used;
  for (ClassId id = kFirstObjectClass; id < g.classes().size(); ++id) {
    const std::string& name = g.classes()[id].name;
    char pick = 0;
    const char first = name.empty() ? 0 : name[0];
    if (first && pool.find(first) != std::string::npos && used.find(first) == std::string::npos) {
      pick = first;
    } else {
      for (char c : pool) {
        if (used.find(c) == std::string::npos) {
          pick = c;
          break;
        }
      }
    }
    if (!pick) throw std::length_error("too many classes for the ASCII map format; use JSON");
    used += pick;
    out[id] = pick;
  }
  return out;
}

MapFile build_map(const std::vector<std::string>& rows, const std::map<char, ClassInfo>& legend, double resolution,
                  Point2 origin, const std::string& source) {
  if (rows.empty()) throw FormatError(source, 0, "map has no grid rows");
  const std::size_t width = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != width) throw FormatError(source, 0, "grid rows have different lengths");
  }
  ClassTable classes;
  std::map<char, ClassId> ids;
  // classes with explicit ids go first, in id order, so a written map reads back identically
  std::vector<std::pair<char, const ClassInfo*>> order;
  for (const auto& [c, info] : legend) order.emplace_back(c, &info);
  auto id_number = [](const ClassInfo* info) {
    const auto us = info->object_id.rfind('_');
    if (info->object_id.empty() || us == std::string::npos) return std::numeric_limits<long>::max();
    return std::strtol(info->object_id.c_str() + us + 1, nullptr, 10);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](const auto& a, const auto& b) { return id_number(a.second) < id_number(b.second); });
  for (const auto& [c, info] : order) {
    try {
      ids[c] = classes.add(*info);
    } catch (const std::exception& e) {
      throw FormatError(source, 0, e.what());
    }
  }
  SemanticGrid grid(static_cast<int>(width), static_cast<int>(rows.size()), resolution, origin, std::move(classes));
  for (std::size_t y = 0; y < rows.size(); ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const char c = rows[y][x];
      ClassId id = kFree;
      if (c == '.') {
        id = kFree;
      } else if (c == '#') {
        id = kNull;
      } else if (c == '?') {
        id = kUnknown;
      } else if (auto it = ids.find(c); it != ids.end()) {
        id = it->second;
      } else {
        throw FormatError(source, 0, std::string("grid character '") + c + "' has no legend entry");
      }
      grid.set({static_cast<int>(x), static_cast<int>(y)}, id);
    }
  }
  return MapFile{std::move(grid), std::nullopt, std::nullopt};
}

void check_start(const MapFile& m, const std::string& source) {
  if (m.start && !m.grid.in_bounds(*m.start)) throw FormatError(source, 0, "start cell is outside the grid");
}

}  // namespace

// ---------------------------------------------------------------------------

MapFile parse_ascii_map(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  double resolution = 1.0;
  Point2 origin;
  std::optional<Cell> start;
  std::optional<double> ro;
  std::map<char, ClassInfo> legend;
  std::vector<std::string> rows;
  bool in_grid = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (!in_grid) {
      if (line.empty() || line[0] == '%') continue;
      if (line.rfind("legend:", 0) == 0) {
        const std::string body = trim(line.substr(7));
        if (body.size() < 3 || body[1] != '=') throw FormatError(source, line_no, "expected 'legend: <char>=<class>'");
        const char c = body[0];
        if (reserved_char(c)) throw FormatError(source, line_no, std::string("legend character '") + c + "' is reserved");
        if (legend.count(c)) throw FormatError(source, line_no, std::string("duplicate legend character '") + c + "'");
        legend[c] = parse_class_spec(body.substr(2), source, line_no);
        continue;
      }
      if (const auto eq = line.find('='); eq != std::string::npos) {
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "resolution") {
          resolution = to_double(value, source, line_no);
          if (!(resolution > 0.0)) throw FormatError(source, line_no, "resolution must be positive");
        } else if (key == "origin") {
          origin = to_point(value, source, line_no);
        } else if (key == "ro") {
          ro = to_double(value, source, line_no);
          if (*ro < 0.0) throw FormatError(source, line_no, "ro must be non-negative");
        } else if (key == "start") {
          start = to_cell(value, source, line_no);
        } else {
          throw FormatError(source, line_no, "unknown header key '" + key + "'");
        }
        continue;
      }
      in_grid = true;
    }
    if (line.empty()) continue;
    rows.push_back(line);
  }
  MapFile m = build_map(rows, legend, resolution, origin, source);
  m.start = start;
  m.safety_margin = ro;
  check_start(m, source);
  return m;
}

std::string write_ascii_map(const MapFile& map) {
  const SemanticGrid& g = map.grid;
  const auto chars = assign_chars(g);
  std::ostringstream out;
  out << "resolution=" << format_number(g.resolution()) << "\n";
  if (g.origin().x != 0.0 || g.origin().y != 0.0) {
    out << "origin=" << format_number(g.origin().x) << "," << format_number(g.origin().y) << "\n";
  }
  if (map.safety_margin) out << "ro=" << format_number(*map.safety_margin) << "\n";
  if (map.start) out << "start=" << map.start->x << "," << map.start->y << "\n";
  for (const auto& [id, c] : chars) {
    const ClassInfo& info = g.classes()[id];
    out << "legend: " << c << "=" << info.name << ",id=" << info.object_id;
    if (info.radius) out << ",r=" << format_number(*info.radius);
    if (info.walkable) out << ",walkable";
    if (!info.aliases.empty()) {
      out << ",alias=";
      for (std::size_t i = 0; i < info.aliases.size(); ++i) out << (i ? "|" : "") << info.aliases[i];
    }
    out << "\n";
  }
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const ClassId id = g.at({x, y});
      out << (id == kFree ? '.' : id == kNull ? '#' : id == kUnknown ? '?' : chars.at(id));
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

MapFile parse_json_map(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(source, 0, e.what());
  }
  try {
    const double resolution = j.value("resolution", 1.0);
    if (!(resolution > 0.0)) throw FormatError(source, 0, "resolution must be positive");
    Point2 origin;
    if (j.contains("origin")) origin = {j["origin"].at(0).get<double>(), j["origin"].at(1).get<double>()};
    std::map<char, ClassInfo> legend;
    if (j.contains("legend")) {
      for (const auto& [key, entry] : j["legend"].items()) {
        if (key.size() != 1 || reserved_char(key[0])) throw FormatError(source, 0, "invalid legend key '" + key + "'");
        ClassInfo info;
        info.name = entry.at("class").get<std::string>();
        info.object_id = entry.value("id", std::string());
        if (entry.contains("r")) info.radius = entry["r"].get<double>();
        info.walkable = entry.value("walkable", false);
        info.aliases = entry.value("aliases", std::vector<std::string>{});
        legend[key[0]] = std::move(info);
      }
    }
    MapFile m = build_map(j.at("rows").get<std::vector<std::string>>(), legend, resolution, origin, source);
    if (j.contains("start")) m.start = Cell{j["start"].at(0).get<int>(), j["start"].at(1).get<int>()};
    if (j.contains("ro")) m.safety_margin = j["ro"].get<double>();
    check_start(m, source);
    return m;
  } catch (const json::exception& e) {
    throw FormatError(source, 0, e.what());
  }
}

std::string write_json_map(const MapFile& map) {
  const SemanticGrid& g = map.grid;
  const auto chars = assign_chars(g);
  json j;
  j["resolution"] = g.resolution();
  j["origin"] = {g.origin().x, g.origin().y};
  if (map.safety_margin) j["ro"] = *map.safety_margin;
  if (map.start) j["start"] = {map.start->x, map.start->y};
  json legend = json::object();
  for (const auto& [id, c] : chars) {
    const ClassInfo& info = g.classes()[id];
    json e{{"class", info.name}, {"id", info.object_id}};
    if (info.radius) e["r"] = *info.radius;
    if (info.walkable) e["walkable"] = true;
    if (!info.aliases.empty()) e["aliases"] = info.aliases;
    legend[std::string(1, c)] = e;
  }
  j["legend"] = legend;
  json rows = json::array();
  for (int y = 0; y < g.height(); ++y) {
    std::string row;
    for (int x = 0; x < g.width(); ++x) {
      const ClassId id = g.at({x, y});
      row += id == kFree ? '.' : id == kNull ? '#' : id == kUnknown ? '?' : chars.at(id);
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

namespace {

bool looks_like_json(const std::string& text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && text[p] == '{';
}

}  // namespace

MapFile load_map(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return looks_like_json(text) ? parse_json_map(text, path.string()) : parse_ascii_map(text, path.string());
}

void save_map(const MapFile& map, const std::filesystem::path& path) {
  write_text_file(path, path.extension() == ".json" ? write_json_map(map) : write_ascii_map(map));
}

// ---------------------------------------------------------------------------

VoxelMap parse_voxel_text(const std::string& text, const std::string& source) {
  VoxelMap v;
  bool have_ground = false;
  bool have_ceiling = false;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '%') continue;
    if (line.rfind("class:", 0) == 0) {
      v.class_info.push_back(parse_class_spec(trim(line.substr(6)), source, line_no));
      continue;
    }
    if (const auto eq = line.find('='); eq != std::string::npos) {
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "resolution") {
        v.resolution = to_double(value, source, line_no);
      } else if (key == "z_ground") {
        v.z_ground = to_double(value, source, line_no);
        have_ground = true;
      } else if (key == "z_ceiling") {
        v.z_ceiling = to_double(value, source, line_no);
        have_ceiling = true;
      } else if (key == "origin") {
        v.origin = to_point(value, source, line_no);
      } else if (key == "bounds") {
        auto parts = split(value, ',');
        if (parts.size() != 4) throw FormatError(source, line_no, "bounds needs x0,y0,x1,y1");
        v.bounds = std::make_pair(Cell{to_int(parts[0], source, line_no), to_int(parts[1], source, line_no)},
                                  Cell{to_int(parts[2], source, line_no), to_int(parts[3], source, line_no)});
      } else {
        throw FormatError(source, line_no, "unknown header key '" + key + "'");
      }
      continue;
    }
    std::istringstream fields(line);
    Voxel vx;
    if (!(fields >> vx.x >> vx.y >> vx.z >> vx.label)) throw FormatError(source, line_no, "expected 'x y z label'");
    std::string extra;
    if (fields >> extra) throw FormatError(source, line_no, "trailing field '" + extra + "'");
    v.voxels.push_back(std::move(vx));
  }
  if (!have_ground || !have_ceiling) throw FormatError(source, 0, "z_ground and z_ceiling are required");
  return v;
}

VoxelMap parse_voxel_json(const std::string& text, const std::string& source) {
  try {
    const json j = json::parse(text);
    VoxelMap v;
    v.resolution = j.value("resolution", 1.0);
    v.z_ground = j.at("z_ground").get<double>();
    v.z_ceiling = j.at("z_ceiling").get<double>();
    if (j.contains("origin")) v.origin = {j["origin"].at(0).get<double>(), j["origin"].at(1).get<double>()};
    if (j.contains("bounds")) {
      const auto& b = j["bounds"];
      v.bounds = std::make_pair(Cell{b.at(0).get<int>(), b.at(1).get<int>()}, Cell{b.at(2).get<int>(), b.at(3).get<int>()});
    }
    if (j.contains("classes")) {
      for (const auto& c : j["classes"]) {
        ClassInfo info;
        info.name = c.at("name").get<std::string>();
        info.object_id = c.value("id", std::string());
        if (c.contains("r")) info.radius = c["r"].get<double>();
        info.walkable = c.value("walkable", false);
        info.aliases = c.value("aliases", std::vector<std::string>{});
        v.class_info.push_back(std::move(info));
      }
    }
    for (const auto& e : j.value("voxels", json::array())) {
      v.voxels.push_back({e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>(), e.at(3).get<std::string>()});
    }
    return v;
  } catch (const json::exception& e) {
    throw FormatError(source, 0, e.what());
  }
}

VoxelMap load_voxels(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return looks_like_json(text) ? parse_voxel_json(text, path.string()) : parse_voxel_text(text, path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace ltlnav
