#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <vector>

#include "mapstruct/raster.hpp"

namespace mapstruct {

// Values of the optional YAML sidecar. Key names follow the common robot
// map-server convention.
struct MapMetadata {
  double resolution = 0.05;
  double occupied_thresh = 0.65;
  double free_thresh = 0.196;
  bool negate = false;
  std::optional<int> width;
  std::optional<int> height;
};

MapMetadata load_metadata(const std::filesystem::path& path);

class OccupancyGrid {
 public:
  static constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();

  // Every cell starts unknown.
  OccupancyGrid(int width, int height, double resolution = 0.05);
  OccupancyGrid(Raster<double> cells, double resolution = 0.05);

  int width() const noexcept { return cells_.width(); }
  int height() const noexcept { return cells_.height(); }
  double resolution() const noexcept { return resolution_; }

  double operator()(int x, int y) const { return cells_(x, y); }
  bool is_unknown(int x, int y) const;
  // Value must be in [0,1] or kUnknown.
  void set(int x, int y, double occupancy);

  const Raster<double>& cells() const noexcept { return cells_; }

 private:
  Raster<double> cells_;
  double resolution_;
};

// Reads an 8-bit grayscale PGM (P2/P5) or PNG. Pixel value v maps to
// occupancy (255 - v) / 255; values strictly between the free and occupied
// thresholds become unknown.
OccupancyGrid load_map(const std::filesystem::path& path,
                       const std::optional<std::filesystem::path>& meta = std::nullopt);

// Occupied iff occupancy >= threshold. Unknown cells are free.
BinaryMap binarize(const OccupancyGrid& grid, double occupied_threshold = 0.65);

struct PaddedMap {
  BinaryMap map;
  int offset_x = 0;
  int offset_y = 0;
  int source_width = 0;
  int source_height = 0;

  int side() const noexcept { return map.width(); }
};

PaddedMap pad_to_square(const BinaryMap& map);

// Cuts the source-sized window back out of a square field.
template <typename T>
Raster<T> crop_to_source(const Raster<T>& square, const PaddedMap& padding) {
  Raster<T> out(padding.source_width, padding.source_height);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out(x, y) = square(x + padding.offset_x, y + padding.offset_y);
    }
  }
  return out;
}

enum class ImageFormat { kPgm, kPng };

// Picks PNG for a ".png" extension, PGM otherwise.
ImageFormat format_from_path(const std::filesystem::path& path);

// Binary maps are written occupied = 0, free = 255.
void save_map(const BinaryMap& map, const std::filesystem::path& path,
              std::optional<ImageFormat> format = std::nullopt);

// Real-valued fields are min-max scaled to 0..255; a constant field is
// written as all zeros.
void save_map(const RealField& field, const std::filesystem::path& path,
              std::optional<ImageFormat> format = std::nullopt);

// Low-level 8-bit gray image I/O shared by the loaders and writers.
Raster<std::uint8_t> read_gray_image(const std::filesystem::path& path);
void write_gray_image(const Raster<std::uint8_t>& pixels,
                      const std::filesystem::path& path, ImageFormat format);

Raster<std::uint8_t> scale_to_gray(const RealField& field);

}  // namespace mapstruct
