#include "ltlnav/semmap.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace ltlnav {

ClassTable::ClassTable() {
  classes_.push_back({"FREE", "", std::nullopt, true, {}});
  classes_.push_back({"NULL", "", std::nullopt, false, {}});
  classes_.push_back({"UNKNOWN", "", std::nullopt, false, {}});
}

ClassId ClassTable::add(ClassInfo info) {
  if (!ltl::is_valid_proposition(info.name)) {
    throw std::invalid_argument("class name '" + info.name + "' is not a valid proposition identifier");
  }
  if (find(info.name)) throw std::invalid_argument("duplicate class '" + info.name + "'");
  if (info.radius && *info.radius < 0.0) throw std::invalid_argument("negative radius for class '" + info.name + "'");
  if (info.object_id.empty()) {
    for (std::size_t k = classes_.size() - kFirstObjectClass + 1;; ++k) {
      std::string candidate = "object_" + std::to_string(k);
      if (!find_object_id(candidate)) {
        info.object_id = std::move(candidate);
        break;
      }
    }
  } else if (find_object_id(info.object_id)) {
    throw std::invalid_argument("duplicate object id '" + info.object_id + "'");
  }
  if (classes_.size() >= std::numeric_limits<ClassId>::max()) throw std::length_error("too many classes");
  classes_.push_back(std::move(info));
  return static_cast<ClassId>(classes_.size() - 1);
}

std::optional<ClassId> ClassTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].name == name) return static_cast<ClassId>(i);
  }
  return std::nullopt;
}

std::optional<ClassId> ClassTable::find_object_id(std::string_view object_id) const {
  for (std::size_t i = kFirstObjectClass; i < classes_.size(); ++i) {
    if (classes_[i].object_id == object_id) return static_cast<ClassId>(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

SemanticGrid::SemanticGrid(int width, int height, double resolution, Point2 origin, ClassTable classes)
    : width_(width), height_(height), resolution_(resolution), origin_(origin), classes_(std::move(classes)) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("grid dimensions must be positive");
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  cells_.assign(static_cast<std::size_t>(width) * height, kUnknown);
}

void SemanticGrid::set(Cell c, ClassId id) {
  if (id >= classes_.size()) throw std::out_of_range("class id out of range");
  cells_.at(index(c)) = id;
}

bool SemanticGrid::traversable(Cell c) const {
  if (!in_bounds(c)) return false;
  const ClassId id = cells_[index(c)];
  return id == kFree || (classes_.is_object(id) && classes_[id].walkable);
}

Point2 SemanticGrid::center(Cell c) const {
  return {origin_.x + c.x * resolution_, origin_.y + c.y * resolution_};
}

Cell SemanticGrid::cell_of(Point2 p) const {
  return {static_cast<int>(std::lround((p.x - origin_.x) / resolution_)),
          static_cast<int>(std::lround((p.y - origin_.y) / resolution_))};
}

// ---------------------------------------------------------------------------

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Column {
  bool observed = false;
  bool occupied = false;
  bool only_null = true;
  bool has_object = false;
  double top_z = -std::numeric_limits<double>::infinity();
  std::string top_class;
};

}  // namespace

SemanticGrid project(const VoxelMap& v) {
  if (!(v.z_ground < v.z_ceiling)) throw std::invalid_argument("z_ground must be below z_ceiling");
  if (!(v.resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (v.voxels.empty() && !v.bounds) throw EmptyMap();

  auto cell_of = [&](const Voxel& vx) {
    return Cell{static_cast<int>(std::lround((vx.x - v.origin.x) / v.resolution)),
                static_cast<int>(std::lround((vx.y - v.origin.y) / v.resolution))};
  };

  Cell lo{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
  Cell hi{std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
  if (v.bounds) {
    lo = v.bounds->first;
    hi = v.bounds->second;
  } else {
    for (const Voxel& vx : v.voxels) {
      const Cell c = cell_of(vx);
      lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
      hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
    }
  }
  if (hi.x < lo.x || hi.y < lo.y) throw std::invalid_argument("voxel map bounds are empty");
  const int width = hi.x - lo.x + 1;
  const int height = hi.y - lo.y + 1;

  std::vector<Column> columns(static_cast<std::size_t>(width) * height);
  for (const Voxel& vx : v.voxels) {
    if (!(vx.z > v.z_ground && vx.z < v.z_ceiling)) continue;
    const Cell c = cell_of(vx);
    if (c.x < lo.x || c.y < lo.y || c.x > hi.x || c.y > hi.y) continue;
    const std::string label = lower(vx.label);
    if (label == "unknown") continue;
    Column& col = columns[static_cast<std::size_t>(c.y - lo.y) * width + (c.x - lo.x)];
    col.observed = true;
    if (label == "free") continue;
    col.occupied = true;
    if (label == "null") continue;
    col.only_null = false;
    if (!col.has_object || vx.z > col.top_z || (vx.z == col.top_z && vx.label < col.top_class)) {
      col.has_object = true;
      col.top_z = vx.z;
      col.top_class = vx.label;
    }
  }

  ClassTable classes;
  for (const ClassInfo& info : v.class_info) classes.add(info);
  std::vector<std::string> names;
  for (const Column& col : columns) {
    if (col.has_object) names.push_back(col.top_class);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& n : names) {
    if (!classes.find(n)) classes.add({n, "", std::nullopt, false, {}});
  }

  const Point2 origin{v.origin.x + lo.x * v.resolution, v.origin.y + lo.y * v.resolution};
  SemanticGrid grid(width, height, v.resolution, origin, std::move(classes));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Column& col = columns[static_cast<std::size_t>(y) * width + x];
      ClassId id = kUnknown;
      if (!col.observed) {
        id = kUnknown;
      } else if (!col.occupied) {
        id = kFree;
      } else if (col.only_null) {
        id = kNull;
      } else {
        id = *grid.classes().find(col.top_class);
      }
      grid.set({x, y}, id);
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kFar = 1e20;

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher).
void distance_1d(std::span<const double> f, std::span<double> d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto intersect = [&](int q, int r) {
    return ((f[q] + static_cast<double>(q) * q) - (f[r] + static_cast<double>(r) * r)) / (2.0 * q - 2.0 * r);
  };
  for (int q = 1; q < n; ++q) {
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(int width, int height, std::span<const std::uint8_t> sites) {
  if (width < 0 || height < 0 || sites.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("site mask size mismatch");
  }
  if (sites.empty()) return {};
  std::vector<double> grid(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) grid[i] = sites[i] ? 0.0 : kFar;

  std::vector<int> v;
  std::vector<double> z;
  std::vector<double> in(std::max(width, height));
  std::vector<double> out(std::max(width, height));

  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) in[y] = grid[static_cast<std::size_t>(y) * width + x];
    distance_1d(std::span(in).first(height), std::span(out).first(height), v, z);
    for (int y = 0; y < height; ++y) grid[static_cast<std::size_t>(y) * width + x] = out[y];
  }
  for (int y = 0; y < height; ++y) {
    auto row = std::span(grid).subspan(static_cast<std::size_t>(y) * width, width);
    std::copy(row.begin(), row.end(), in.begin());
    distance_1d(std::span(in).first(width), std::span(out).first(width), v, z);
    std::copy(out.begin(), out.begin() + width, row.begin());
  }
  for (double& d : grid) {
    if (d >= kFar / 2) d = std::numeric_limits<double>::infinity();
  }
  return grid;
}

double default_radius(double resolution) { return 1.5 * resolution; }

LabelGrid build_label_grid(const SemanticGrid& g, const std::map<std::string, double>& thresholds) {
  const ClassTable& classes = g.classes();
  for (const auto& [name, r] : thresholds) {
    if (!classes.find(name) && !classes.find_object_id(name)) {
      throw std::invalid_argument("threshold given for unknown class '" + name + "'");
    }
    if (r < 0.0 || std::isnan(r)) throw std::invalid_argument("negative threshold for class '" + name + "'");
  }

  LabelGrid lg;
  lg.width_ = g.width();
  lg.height_ = g.height();
  lg.resolution_ = g.resolution();

  std::vector<ClassId> prop_class;
  for (ClassId id = kFirstObjectClass; id < classes.size(); ++id) {
    const ClassInfo& info = classes[id];
    double r = info.radius.value_or(default_radius(g.resolution()));
    if (auto it = thresholds.find(info.name); it != thresholds.end()) {
      r = it->second;
    } else if (auto it2 = thresholds.find(info.object_id); it2 != thresholds.end()) {
      r = it2->second;
    }
    lg.props_.push_back(info.name);
    lg.radii_.push_back(r);
    prop_class.push_back(id);
  }

  const std::size_t n = g.size();
  std::vector<std::vector<std::uint16_t>> per_cell(n);
  std::vector<std::uint8_t> sites(n);
  for (std::size_t p = 0; p < prop_class.size(); ++p) {
    for (std::size_t i = 0; i < n; ++i) sites[i] = g.cells()[i] == prop_class[p] ? 1 : 0;
    std::vector<double> dist = squared_distance_transform(g.width(), g.height(), sites);
    const double r = lg.radii_[p];
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::sqrt(dist[i]) * g.resolution();
      if (dist[i] <= r + 1e-9) per_cell[i].push_back(static_cast<std::uint16_t>(p));
    }
    lg.distances_.push_back(std::move(dist));
  }

  std::map<std::vector<std::uint16_t>, std::uint32_t> interned;
  interned.emplace(std::vector<std::uint16_t>{}, 0);
  lg.sets_.emplace_back();
  lg.set_of_cell_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = interned.emplace(per_cell[i], static_cast<std::uint32_t>(lg.sets_.size()));
    if (inserted) {
      Letter l;
      for (std::uint16_t p : per_cell[i]) l.insert(lg.props_[p]);
      lg.sets_.push_back(std::move(l));
    }
    lg.set_of_cell_[i] = it->second;
  }
  return lg;
}

OutOfBounds::OutOfBounds(Cell c)
    : std::out_of_range("cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ") is outside the grid") {}

Word word_of_path(const LabelGrid& lg, std::span<const Cell> path) {
  Word w;
  w.reserve(path.size());
  for (const Cell& c : path) {
    if (!lg.in_bounds(c)) throw OutOfBounds(c);
    w.push_back(lg.label(c));
  }
  return w;
}

}  // namespace ltlnav
