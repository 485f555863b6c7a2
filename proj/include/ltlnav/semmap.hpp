#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlnav/ltl.hpp"

namespace ltlnav {

using ltl::Letter;
using ltl::Word;

using ClassId = std::uint16_t;

inline constexpr ClassId kFree = 0;
inline constexpr ClassId kNull = 1;
inline constexpr ClassId kUnknown = 2;
inline constexpr ClassId kFirstObjectClass = 3;

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct ClassInfo {
  std::string name;
  std::string object_id;  // object_<k>; empty for FREE/NULL/UNKNOWN
  std::optional<double> radius;  // r_c in meters
  bool walkable = false;
  std::vector<std::string> aliases;  // extra surface forms used by grounding
};

/// Class table whose first three entries are FREE, NULL and UNKNOWN.
class ClassTable {
 public:
  ClassTable();

  ClassId add(ClassInfo info);
  std::optional<ClassId> find(std::string_view name) const;
  std::optional<ClassId> find_object_id(std::string_view object_id) const;
  const ClassInfo& operator[](ClassId id) const { return classes_.at(id); }
  ClassInfo& operator[](ClassId id) { return classes_.at(id); }
  std::size_t size() const { return classes_.size(); }
  bool is_object(ClassId id) const { return id >= kFirstObjectClass; }

 private:
  std::vector<ClassInfo> classes_;
};

/// 2D semantic occupancy grid. Cell (0,0) is centered at `origin`; x grows
/// along columns, y along rows.
class SemanticGrid {
 public:
  SemanticGrid(int width, int height, double resolution, Point2 origin, ClassTable classes);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Point2 origin() const { return origin_; }
  const ClassTable& classes() const { return classes_; }
  ClassTable& classes() { return classes_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
  }
  std::size_t size() const { return cells_.size(); }

  ClassId at(Cell c) const { return cells_.at(index(c)); }
  void set(Cell c, ClassId id);
  std::span<const ClassId> cells() const { return cells_; }

  /// FREE cells and cells of walkable classes.
  bool traversable(Cell c) const;

  Point2 center(Cell c) const;
  /// Nearest cell to a world point (may be out of bounds).
  Cell cell_of(Point2 p) const;

 private:
  int width_;
  int height_;
  double resolution_;
  Point2 origin_;
  ClassTable classes_;
  std::vector<ClassId> cells_;
};

struct Voxel {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  std::string label;  // object class, "free" or "null"; absent voxels are unobserved
};

struct VoxelMap {
  double resolution = 1.0;
  Point2 origin;
  double z_ground = 0.0;
  double z_ceiling = 0.0;
  /// Optional cell extent; derived from the voxels when absent.
  std::optional<std::pair<Cell, Cell>> bounds;
  std::vector<Voxel> voxels;
  /// Extra class metadata (ids, radii) carried by structured map files.
  std::vector<ClassInfo> class_info;
};

class EmptyMap : public std::runtime_error {
 public:
  EmptyMap() : std::runtime_error("voxel map contains no voxels and no bounds") {}
};

/// Collapses each vertical column inside (z_ground, z_ceiling): UNKNOWN if
/// nothing observed, FREE if every observed voxel is free, NULL if every
/// occupied voxel is NULL, else the object class of the highest occupied
/// voxel. Equal heights resolve to the lexicographically smallest class.
SemanticGrid project(const VoxelMap& v);

/// Exact squared Euclidean distance transform (in cells^2) to the nearest
/// site. Non-site cells with no site anywhere get +infinity.
std::vector<double> squared_distance_transform(int width, int height, std::span<const std::uint8_t> sites);

/// Per-cell set of true atomic propositions. A proposition exists for every
/// object class declared in the grid (named by the class name); it holds at
/// cell x iff the Euclidean distance between x's center and the nearest cell
/// of that class is at most r_c.
class LabelGrid {
 public:
  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }

  const std::vector<std::string>& propositions() const { return props_; }
  double radius(std::size_t prop) const { return radii_[prop]; }
  /// Distance in meters from each cell to the nearest cell of the class.
  std::span<const double> class_distance(std::size_t prop) const { return distances_[prop]; }

  /// Distinct label sets; entry 0 is always the empty set.
  const std::vector<Letter>& label_sets() const { return sets_; }
  std::uint32_t label_set_id(Cell c) const { return set_of_cell_.at(static_cast<std::size_t>(c.y) * width_ + c.x); }
  const Letter& label(Cell c) const { return sets_[label_set_id(c)]; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }

 private:
  friend LabelGrid build_label_grid(const SemanticGrid&, const std::map<std::string, double>&);

  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  std::vector<std::string> props_;
  std::vector<double> radii_;
  std::vector<std::vector<double>> distances_;
  std::vector<Letter> sets_;
  std::vector<std::uint32_t> set_of_cell_;
};

/// Radius used when neither the override table nor the map sets r_c.
double default_radius(double resolution);

/// `thresholds` overrides r_c per class name; other classes use the map's
/// radius or default_radius(). Throws std::invalid_argument on a negative
/// threshold or an unknown class name.
LabelGrid build_label_grid(const SemanticGrid& g, const std::map<std::string, double>& thresholds = {});

class OutOfBounds : public std::out_of_range {
 public:
  explicit OutOfBounds(Cell c);
};

Word word_of_path(const LabelGrid& lg, std::span<const Cell> path);

}  // namespace ltlnav
