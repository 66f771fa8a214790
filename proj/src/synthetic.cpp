#include "mapstruct/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "mapstruct/random.hpp"

namespace mapstruct::synthetic {
namespace {

constexpr double kThickness = 2.0;

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * ab));
}

std::vector<WallLine> distinct_lines(const std::vector<Wall>& walls, Point2 center) {
  std::vector<WallLine> out;
  for (const auto& w : walls) {
    WallLine l = line_through(w.a, w.b, center);
    const bool seen = std::any_of(out.begin(), out.end(), [&](const WallLine& o) {
      return axial_difference_deg(o.angle_deg, l.angle_deg) < 1e-6 &&
             std::abs(o.signed_distance(w.a, center)) < 1e-6;
    });
    if (!seen) out.push_back(l);
  }
  return out;
}

SyntheticMap build(std::string name, int size, std::vector<Wall> walls, double rotation_deg = 0.0) {
  const Point2 center = grid_center(size, size);
  if (rotation_deg != 0.0) {
    for (auto& w : walls) {
      w.a = rotate_about(w.a, center, rotation_deg);
      w.b = rotate_about(w.b, center, rotation_deg);
    }
  }
  SyntheticMap m{std::move(name), BinaryMap(size, size), walls, {}};
  for (const auto& w : walls) draw_wall(m.map, w.a, w.b, kThickness);
  m.ground_truth = distinct_lines(walls, center);
  return m;
}

// Wall from a to b along one axis with door gaps [start, start + width).
void add_with_doors(std::vector<Wall>& walls, Point2 a, Point2 b,
                    std::initializer_list<std::pair<double, double>> doors) {
  const bool horizontal = a.y == b.y;
  double cursor = horizontal ? a.x : a.y;
  const double end = horizontal ? b.x : b.y;
  auto emit = [&](double from, double to) {
    if (to - from < 1.0) return;
    walls.push_back(horizontal ? Wall{{from, a.y}, {to, a.y}} : Wall{{a.x, from}, {a.x, to}});
  };
  for (const auto& [start, width] : doors) {
    emit(cursor, start);
    cursor = start + width;
  }
  emit(cursor, end);
}

// Coordinates below are authored for a 200-cell map and scaled.
Point2 at(double x, double y, double k) { return {x * k + 0.5, y * k + 0.5}; }

}  // namespace

void draw_wall(BinaryMap& map, Point2 a, Point2 b, double thickness) {
  const double r = thickness / 2.0;
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - r)));
  const int x1 = std::min(map.width() - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - r)));
  const int y1 = std::min(map.height() - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + r)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (segment_distance({double(x), double(y)}, a, b) <= r) map(x, y) = 1;
    }
  }
}

SyntheticMap rectilinear_office(int size) {
  const double k = size / 200.0;
  std::vector<Wall> w;
  auto P = [k](double x, double y) { return at(x, y, k); };
  const double d = 8 * k;
  // Shell.
  w.push_back({P(10, 10), P(189, 10)});
  w.push_back({P(10, 189), P(189, 189)});
  w.push_back({P(10, 10), P(10, 189)});
  w.push_back({P(189, 10), P(189, 189)});
  // Corridor walls with one door per room.
  add_with_doors(w, P(10, 90), P(189, 90),
                 {{P(30, 0).x, d}, {P(80, 0).x, d}, {P(125, 0).x, d}, {P(165, 0).x, d}});
  add_with_doors(w, P(10, 112), P(189, 112),
                 {{P(25, 0).x, d}, {P(70, 0).x, d}, {P(115, 0).x, d}, {P(160, 0).x, d}});
  // Room dividers.
  for (double x : {60.0, 105.0, 150.0}) w.push_back({P(x, 10), P(x, 90)});
  for (double x : {50.0, 95.0, 140.0}) w.push_back({P(x, 112), P(x, 189)});
  return build("office", size, std::move(w));
}

SyntheticMap rotated_apartment(int size, double angle_deg) {
  const double k = size / 200.0;
  std::vector<Wall> w;
  auto P = [k](double x, double y) { return at(x, y, k); };
  const double d = 7 * k;
  w.push_back({P(40, 40), P(159, 40)});
  w.push_back({P(40, 159), P(159, 159)});
  w.push_back({P(40, 40), P(40, 159)});
  w.push_back({P(159, 40), P(159, 159)});
  add_with_doors(w, P(40, 95), P(159, 95), {{P(60, 0).x, d}, {P(120, 0).x, d}});
  add_with_doors(w, P(100, 40), P(100, 159), {{P(0, 70).y, d}, {P(0, 125).y, d}});
  w.push_back({P(130, 95), P(130, 159)});
  return build("apartment30", size, std::move(w), angle_deg);
}

SyntheticMap multi_angle_floor(int size) {
  const double k = size / 200.0;
  std::vector<Wall> w;
  auto P = [k](double x, double y) { return at(x, y, k); };
  const double d = 8 * k;
  // Rectilinear block.
  w.push_back({P(10, 10), P(110, 10)});
  w.push_back({P(10, 10), P(10, 189)});
  w.push_back({P(10, 189), P(110, 189)});
  add_with_doors(w, P(10, 70), P(110, 70), {{P(40, 0).x, d}});
  add_with_doors(w, P(10, 130), P(110, 130), {{P(60, 0).x, d}});
  add_with_doors(w, P(110, 10), P(110, 189), {{P(0, 35).y, d}, {P(0, 150).y, d}});
  // Wing bounded by 45-degree walls.
  w.push_back({P(110, 10), P(189, 89)});
  w.push_back({P(110, 189), P(189, 110)});
  w.push_back({P(189, 89), P(189, 110)});
  w.push_back({P(120, 60), P(160, 100)});
  w.push_back({P(120, 140), P(150, 110)});
  return build("multiangle", size, std::move(w));
}

std::vector<SyntheticMap> corpus(int size) {
  return {rectilinear_office(size), rotated_apartment(size), multi_angle_floor(size)};
}

SyntheticMap by_name(const std::string& name, int size) {
  if (name == "office") return rectilinear_office(size);
  if (name == "apartment30") return rotated_apartment(size);
  if (name == "multiangle") return multi_angle_floor(size);
  throw Error(ErrorCode::kInvalidArgument, "unknown synthetic map '" + name + "'");
}

Raster<std::uint8_t> room_image(int size) {
  Raster<std::uint8_t> img(size, size, 205);
  const int lo = size / 8;
  const int hi = size - 1 - size / 8;
  for (int y = lo; y <= hi; ++y) {
    for (int x = lo; x <= hi; ++x) {
      const bool wall = x <= lo + 1 || x >= hi - 1 || y <= lo + 1 || y >= hi - 1;
      img(x, y) = wall ? 0 : 255;
    }
  }
  // Door in the bottom wall and an interior partition.
  for (int x = size / 2 - 3; x < size / 2 + 3; ++x) {
    img(x, hi) = 255;
    img(x, hi - 1) = 255;
  }
  for (int y = lo; y <= size / 2; ++y) {
    img(size / 2, y) = 0;
    img(size / 2 + 1, y) = 0;
  }
  return img;
}

BinaryMap shuffle_cells(const BinaryMap& map, std::uint64_t seed) {
  std::vector<std::uint8_t> cells(map.values().begin(), map.values().end());
  Rng rng(seed);
  rng.shuffle(cells.begin(), cells.end());
  BinaryMap out(map.width(), map.height());
  std::copy(cells.begin(), cells.end(), out.values().begin());
  return out;
}

BinaryMap rotate_map(const BinaryMap& map, double angle_deg) {
  BinaryMap out(map.width(), map.height());
  const Point2 c = grid_center(map.width(), map.height());
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const Point2 src = rotate_about({double(x), double(y)}, c, -angle_deg);
      const int sx = static_cast<int>(std::lround(src.x));
      const int sy = static_cast<int>(std::lround(src.y));
      if (map.contains(sx, sy)) out(x, y) = map(sx, sy);
    }
  }
  return out;
}

}  // namespace mapstruct::synthetic
