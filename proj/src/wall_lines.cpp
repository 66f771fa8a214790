#include "mapstruct/wall_lines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include "mapstruct/random.hpp"

namespace mapstruct {

std::vector<Segment> detect_segments(const BinaryMap& map, const HoughConfig& cfg) {
  if (cfg.votes < 1 || cfg.min_length < 1 || cfg.max_gap < 0 || !(cfg.theta_step_deg > 0.0) ||
      !(cfg.rho_step > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid Hough configuration");
  }
  const int w = map.width();
  const int h = map.height();
  const int num_angle = static_cast<int>(std::lround(180.0 / cfg.theta_step_deg));
  const int num_rho = static_cast<int>(std::lround(((w + h) * 2 + 1) / cfg.rho_step));
  const int rho_offset = (num_rho - 1) / 2;

  std::vector<double> cos_t(num_angle), sin_t(num_angle);
  for (int k = 0; k < num_angle; ++k) {
    const double t = deg2rad(k * cfg.theta_step_deg);
    cos_t[k] = std::cos(t) / cfg.rho_step;
    sin_t[k] = std::sin(t) / cfg.rho_step;
  }

  std::vector<int> accum(static_cast<std::size_t>(num_angle) * num_rho, 0);
  BinaryMap mask = map;
  BinaryMap voted(w, h, 0);
  std::vector<std::pair<int, int>> points;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (map(x, y)) points.emplace_back(x, y);
    }
  }
  Rng rng(cfg.seed);
  rng.shuffle(points.begin(), points.end());

  auto rho_bin = [&](int x, int y, int k) {
    return static_cast<int>(std::lround(x * cos_t[k] + y * sin_t[k])) + rho_offset;
  };
  auto vote = [&](int x, int y, int delta) {
    for (int k = 0; k < num_angle; ++k) {
      accum[static_cast<std::size_t>(k) * num_rho + rho_bin(x, y, k)] += delta;
    }
  };

  std::vector<Segment> segments;
  for (const auto& [px, py] : points) {
    if (!mask(px, py)) continue;

    int best_k = 0;
    int best_votes = 0;
    for (int k = 0; k < num_angle; ++k) {
      int& cell = accum[static_cast<std::size_t>(k) * num_rho + rho_bin(px, py, k)];
      ++cell;
      if (cell > best_votes) {
        best_votes = cell;
        best_k = k;
      }
    }
    voted(px, py) = 1;
    if (best_votes < cfg.votes) continue;

    // Walk along the line direction, perpendicular to the normal (cos, sin).
    const double t = deg2rad(best_k * cfg.theta_step_deg);
    const double ax = -std::sin(t);
    const double ay = std::cos(t);
    double sx, sy;
    if (std::abs(ax) > std::abs(ay)) {
      sx = ax > 0 ? 1.0 : -1.0;
      sy = ay / std::abs(ax);
    } else {
      sy = ay > 0 ? 1.0 : -1.0;
      sx = ax / std::abs(ay);
    }

    std::array<std::pair<int, int>, 2> ends{{{px, py}, {px, py}}};
    for (int dir = 0; dir < 2; ++dir) {
      const double dx = dir == 0 ? sx : -sx;
      const double dy = dir == 0 ? sy : -sy;
      int gap = 0;
      for (int step = 1;; ++step) {
        const int x = static_cast<int>(std::lround(px + step * dx));
        const int y = static_cast<int>(std::lround(py + step * dy));
        if (!mask.contains(x, y)) break;
        if (mask(x, y)) {
          gap = 0;
          ends[dir] = {x, y};
        } else if (++gap > cfg.max_gap) {
          break;
        }
      }
    }

    const Segment seg{{static_cast<double>(ends[0].first), static_cast<double>(ends[0].second)},
                      {static_cast<double>(ends[1].first), static_cast<double>(ends[1].second)}};
    const bool good = seg.length() >= cfg.min_length;

    for (int dir = 0; dir < 2; ++dir) {
      const double dx = dir == 0 ? sx : -sx;
      const double dy = dir == 0 ? sy : -sy;
      for (int step = 0;; ++step) {
        const int x = static_cast<int>(std::lround(px + step * dx));
        const int y = static_cast<int>(std::lround(py + step * dy));
        if (mask(x, y)) {
          if (good && voted(x, y)) {
            vote(x, y, -1);
            voted(x, y) = 0;
          }
          mask(x, y) = 0;
        }
        if (x == ends[dir].first && y == ends[dir].second) break;
      }
    }
    if (good) segments.push_back(seg);
  }
  return segments;
}

Point2 WallLine::anchor(Point2 center) const {
  double total = 0.0;
  Point2 acc;
  for (const auto& s : support) {
    const double l = s.length();
    acc = acc + l * s.midpoint();
    total += l;
  }
  if (!(total > 0.0)) return foot(center);
  const Point2 m = (1.0 / total) * acc;
  return m - signed_distance(m, center) * line_normal(angle_deg);
}

namespace {

double weighted_offset(const std::vector<Segment>& support, double angle_deg, Point2 center) {
  const Point2 n = line_normal(angle_deg);
  double total = 0.0;
  double acc = 0.0;
  for (const auto& s : support) {
    const double l = s.length();
    acc += l * dot(n, s.midpoint() - center);
    total += l;
  }
  return total > 0.0 ? acc / total : 0.0;
}

void refit(WallLine& line, Point2 center) {
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& s : line.support) {
    const double l = s.length();
    const double a2 = deg2rad(2.0 * s.angle_deg());
    cx += l * std::cos(a2);
    cy += l * std::sin(a2);
  }
  line.angle_deg = axial_deg(rad2deg(std::atan2(cy, cx)) / 2.0);
  line.offset = weighted_offset(line.support, line.angle_deg, center);
}

}  // namespace

std::vector<WallLine> cluster_wall_lines(std::span<const Segment> segments, Point2 center,
                                         double angle_tol_deg, double offset_tol) {
  if (!(angle_tol_deg > 0.0) || !(offset_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "clustering tolerances must be positive");
  }
  std::vector<Segment> ordered(segments.begin(), segments.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const Segment& a, const Segment& b) {
    return a.length() > b.length();
  });

  std::vector<WallLine> lines;
  for (const auto& seg : ordered) {
    WallLine* home = nullptr;
    for (auto& line : lines) {
      if (axial_difference_deg(seg.angle_deg(), line.angle_deg) <= angle_tol_deg &&
          std::abs(line.signed_distance(seg.midpoint(), center)) <= offset_tol) {
        home = &line;
        break;
      }
    }
    if (!home) {
      lines.push_back(WallLine{});
      home = &lines.back();
    }
    home->support.push_back(seg);
    refit(*home, center);
  }
  return lines;
}

std::vector<WallLine> align_to_directions(std::span<const WallLine> lines,
                                          std::span<const double> wall_angles_deg, Point2 center,
                                          double snap_tol_deg, double offset_tol) {
  if (!(snap_tol_deg > 0.0)) throw Error(ErrorCode::kInvalidArgument, "snap tolerance must be > 0");
  std::vector<WallLine> out;
  std::vector<bool> snapped;
  for (const auto& line : lines) {
    double best = std::numeric_limits<double>::infinity();
    double target = 0.0;
    for (double a : wall_angles_deg) {
      const double d = axial_difference_deg(line.angle_deg, a);
      if (d < best) {
        best = d;
        target = axial_deg(a);
      }
    }
    WallLine moved = line;
    const bool snap = best <= snap_tol_deg;
    if (snap) {
      const Point2 foot = line.foot(center);
      moved.angle_deg = target;
      moved.offset = moved.support.empty() ? dot(line_normal(target), foot - center)
                                           : weighted_offset(moved.support, target, center);
    }
    out.push_back(std::move(moved));
    snapped.push_back(snap);
  }

  std::vector<WallLine> merged;
  std::vector<bool> merged_snapped;
  for (std::size_t i = 0; i < out.size(); ++i) {
    bool absorbed = false;
    if (snapped[i]) {
      for (std::size_t j = 0; j < merged.size(); ++j) {
        if (merged_snapped[j] && merged[j].angle_deg == out[i].angle_deg &&
            std::abs(merged[j].offset - out[i].offset) <= offset_tol) {
          auto& m = merged[j];
          const bool had_support = !m.support.empty() || !out[i].support.empty();
          m.support.insert(m.support.end(), out[i].support.begin(), out[i].support.end());
          m.offset = had_support ? weighted_offset(m.support, m.angle_deg, center)
                                 : 0.5 * (m.offset + out[i].offset);
          absorbed = true;
          break;
        }
      }
    }
    if (!absorbed) {
      merged.push_back(out[i]);
      merged_snapped.push_back(snapped[i]);
    }
  }
  return merged;
}

WallEvalResult wall_error(std::span<const WallLine> test, std::span<const WallLine> reference,
                          Point2 center) {
  if (reference.empty()) throw Error(ErrorCode::kInvalidArgument, "empty reference line set");
  WallEvalResult out;
  std::vector<bool> used(reference.size(), false);
  double total = 0.0;
  for (const auto& t : test) {
    const Point2 anchor = t.anchor(center);
    LineCost best;
    auto key = [](const LineCost& c) { return std::tie(c.cost, c.translation); };
    for (std::size_t r = 0; r < reference.size(); ++r) {
      LineCost c;
      c.theta = deg2rad(axial_difference_deg(t.angle_deg, reference[r].angle_deg));
      c.translation = std::abs(reference[r].signed_distance(anchor, center));
      c.cost = c.theta * c.translation / 2.0;
      c.reference = static_cast<int>(r);
      c.degenerate = c.theta > 1e-12 && c.translation < 1e-12;
      if (best.reference < 0 || key(c) < key(best)) best = c;
    }
    used[best.reference] = true;
    total += best.cost;
    out.per_line.push_back(best);
  }
  out.mean_cost = test.empty() ? 0.0 : total / static_cast<double>(test.size());
  out.unmatched_reference_count =
      static_cast<int>(std::count(used.begin(), used.end(), false));
  return out;
}

WallLine line_through(Point2 a, Point2 b, Point2 center) {
  WallLine line;
  line.angle_deg = Segment{a, b}.angle_deg();
  line.offset = dot(line_normal(line.angle_deg), a - center);
  return line;
}

}  // namespace mapstruct
