#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mapstruct/geometry.hpp"
#include "mapstruct/raster.hpp"
#include "mapstruct/wall_lines.hpp"

namespace mapstruct::synthetic {

struct Wall {
  Point2 a;
  Point2 b;
};

struct SyntheticMap {
  std::string name;
  BinaryMap map;
  std::vector<Wall> walls;
  // Distinct infinite lines through the wall centerlines, in the frame of
  // grid_center(map.width(), map.height()).
  std::vector<WallLine> ground_truth;
};

// Marks every cell whose center lies within thickness / 2 of the segment.
void draw_wall(BinaryMap& map, Point2 a, Point2 b, double thickness);

// Axis-aligned office: outer shell, a corridor and rooms with door gaps.
SyntheticMap rectilinear_office(int size = 200);
// Apartment floor plan rotated by angle_deg about the map center.
SyntheticMap rotated_apartment(int size = 200, double angle_deg = 30.0);
// Rectilinear rooms plus a wing with walls at 45 degrees.
SyntheticMap multi_angle_floor(int size = 200);

// The three structured maps used for sweeps and acceptance runs.
std::vector<SyntheticMap> corpus(int size = 200);
SyntheticMap by_name(const std::string& name, int size = 200);

// Small single room as an 8-bit image: walls 0, interior 255, exterior 205
// (unknown under the default thresholds).
Raster<std::uint8_t> room_image(int size = 64);

// Same number of occupied cells scattered uniformly; destroys all structure.
BinaryMap shuffle_cells(const BinaryMap& map, std::uint64_t seed);

// Nearest-neighbour rotation of the raster about its center.
BinaryMap rotate_map(const BinaryMap& map, double angle_deg);

}  // namespace mapstruct::synthetic
