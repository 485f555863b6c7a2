#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "ltlnav/semmap.hpp"

namespace ltlnav {

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& source, std::size_t line, const std::string& what);
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A semantic grid together with the planning defaults a map file may carry.
struct MapFile {
  SemanticGrid grid;
  std::optional<Cell> start;
  std::optional<double> safety_margin;  // r_o in meters
};

/// ASCII map:
///
///     resolution=0.5
///     origin=0,0            (optional, world coords of cell (0,0))
///     ro=0.25               (optional)
///     start=1,2             (optional)
///     legend: c=chair,r=0.75
///     legend: b=bush,walkable,id=object_7,alias=shrub|hedge
///     ....c.
///     .##...
///
/// `.` FREE, `#` NULL, `?` UNKNOWN, legend characters are object classes.
/// The first grid line is row y = 0.
MapFile parse_ascii_map(const std::string& text, const std::string& source = "<map>");
std::string write_ascii_map(const MapFile& map);

/// JSON map: {"resolution", "origin", "ro", "start", "rows": [...],
/// "legend": {"c": {"class", "id", "r", "walkable", "aliases"}}}.
MapFile parse_json_map(const std::string& text, const std::string& source = "<map>");
std::string write_json_map(const MapFile& map);

/// Detects the format from the first non-blank character.
MapFile load_map(const std::filesystem::path& path);
void save_map(const MapFile& map, const std::filesystem::path& path);

/// Voxel text format: `resolution=`, `z_ground=`, `z_ceiling=` header lines,
/// optional `origin=x,y`, `bounds=x0,y0,x1,y1` (cells) and
/// `class: name,id=object_3,r=0.5`, then one `x y z label` voxel per line.
/// The JSON variant uses keys of the same names plus "voxels":
/// [[x, y, z, "label"], ...] and "classes": [{"name", "id", "r"}].
VoxelMap parse_voxel_text(const std::string& text, const std::string& source = "<voxels>");
VoxelMap parse_voxel_json(const std::string& text, const std::string& source = "<voxels>");
VoxelMap load_voxels(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ltlnav
