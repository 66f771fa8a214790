#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mapstruct/geometry.hpp"
#include "mapstruct/raster.hpp"
#include "mapstruct/structure.hpp"

namespace mapstruct {

struct Segment {
  Point2 p1;
  Point2 p2;

  double length() const { return norm(p2 - p1); }
  Point2 midpoint() const { return 0.5 * (p1 + p2); }
  double angle_deg() const { return axial_deg(rad2deg(std::atan2(p2.y - p1.y, p2.x - p1.x))); }
};

struct HoughConfig {
  int votes = 20;
  int min_length = 10;
  int max_gap = 3;
  double theta_step_deg = 1.0;
  double rho_step = 1.0;
  std::uint64_t seed = 0;
};

// Progressive probabilistic Hough transform over the occupied cells.
std::vector<Segment> detect_segments(const BinaryMap& map, const HoughConfig& config = {});

// Infinite line: direction angle in [0, 180) and signed distance of the line
// from the frame center along line_normal(angle).
struct WallLine {
  double angle_deg = 0.0;
  double offset = 0.0;
  std::vector<Segment> support;

  Point2 foot(Point2 center) const { return center + offset * line_normal(angle_deg); }
  // Length-weighted centroid of the support, projected onto the line. Falls
  // back to the foot point for lines without support.
  Point2 anchor(Point2 center) const;
  double signed_distance(Point2 p, Point2 center) const {
    return dot(line_normal(angle_deg), p - center) - offset;
  }
};

// Greedy grouping by angle and perpendicular offset; each group is fused with
// a length-weighted circular mean of doubled angles and a weighted offset.
std::vector<WallLine> cluster_wall_lines(std::span<const Segment> segments, Point2 center,
                                         double angle_tol_deg = 5.0, double offset_tol = 5.0);

// Snaps lines within snap_tol of a dominant wall angle, refits their offset
// from the support, and merges snapped lines sharing an angle whose offsets
// differ by at most offset_tol.
std::vector<WallLine> align_to_directions(std::span<const WallLine> lines,
                                          std::span<const double> wall_angles_deg, Point2 center,
                                          double snap_tol_deg = 5.0, double offset_tol = 5.0);

struct LineCost {
  double cost = 0.0;         // theta * |T| / 2
  double theta = 0.0;        // radians, in [0, pi/2]
  double translation = 0.0;  // |T|, cells
  int reference = -1;
  bool degenerate = false;  // rotation without translation, cost collapses to 0
};

struct WallEvalResult {
  double mean_cost = 0.0;
  std::vector<LineCost> per_line;
  int unmatched_reference_count = 0;
};

// For every test line the cheapest reference under the arc cost theta*|T|/2,
// with |T| the distance from the test anchor to the reference line. Ties go
// to the smaller |T|, then the lower index.
WallEvalResult wall_error(std::span<const WallLine> test, std::span<const WallLine> reference,
                          Point2 center);

// Line through two points expressed in the given frame.
WallLine line_through(Point2 a, Point2 b, Point2 center);

}  // namespace mapstruct
