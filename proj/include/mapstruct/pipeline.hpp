#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mapstruct/global_score.hpp"
#include "mapstruct/grid_map.hpp"
#include "mapstruct/local_score.hpp"
#include "mapstruct/spectral.hpp"
#include "mapstruct/structure.hpp"
#include "mapstruct/wall_lines.hpp"

namespace mapstruct {

struct PipelineConfig {
  double occupied_threshold = 0.65;
  int angle_bins = 720;
  int radius_bins = 0;  // 0: every integer radius inside the inscribed circle
  DirectionConfig directions;
  double mask_half_width_deg = 0.0;  // <= 0: one angular bin
  EmConfig em;
  std::optional<double> threshold_override;

  double effective_half_width_deg() const {
    return mask_half_width_deg > 0.0 ? mask_half_width_deg : 360.0 / angle_bins;
  }
};

struct Analysis {
  PaddedMap padded;
  Spectrum spectrum;
  PolarAmplitude polar;
  DirectionalProfile profile;
  std::vector<double> scaled;  // empty for a flat profile
  DominantDirections directions;
  GlobalScore score;
};

// Detection and global scoring: pad, transform, unfold, find peaks, score.
Analysis analyze_map(const BinaryMap& map, const PipelineConfig& config = {});

inline constexpr const char* kFlagNoStructure = "NO_STRUCTURE";
inline constexpr const char* kFlagNoSeparation = "NO_SEPARATION";
inline constexpr const char* kFlagThresholdFallback = "THRESHOLD_FALLBACK";
inline constexpr const char* kFlagVarianceCollapse = "VARIANCE_COLLAPSE";
inline constexpr const char* kFlagNotConverged = "EM_NOT_CONVERGED";
inline constexpr const char* kFlagThresholdOverride = "THRESHOLD_OVERRIDE";

struct DeclutterResult {
  Analysis analysis;
  std::optional<NominalMap> nominal;  // cropped to the source size
  std::optional<GmmFit> gmm;
  std::optional<double> threshold;
  DeclutteredMap decluttered;  // source size; equals the input when a stage bails out
  std::vector<std::string> flags;
  std::size_t occupied = 0;
  std::size_t kept = 0;
  std::size_t removed = 0;

  bool no_structure() const;
  bool no_separation() const;
  bool has_flag(const std::string& flag) const;
};

// Full structure scoring and clutter removal. Never throws for a map without
// structure or without a separable score distribution; those are reported
// through flags and the input is passed through unchanged.
DeclutterResult declutter_map(const BinaryMap& map, const PipelineConfig& config = {});

struct WallConfig {
  HoughConfig hough;
  double angle_tol_deg = 5.0;
  double offset_tol = 5.0;
  double snap_tol_deg = 5.0;
};

struct WallExtraction {
  bool filtered = false;
  std::optional<DeclutterResult> declutter;  // set when filtered
  std::vector<Segment> segments;
  std::vector<WallLine> lines;
  Point2 center;
};

// Hough segments clustered into wall lines. With filtering the segments come
// from the decluttered map and the lines are aligned to the dominant wall
// angles; without it the raw map is used and no alignment happens.
WallExtraction extract_walls(const BinaryMap& map, bool filter, const PipelineConfig& config = {},
                             const WallConfig& walls = {});

}  // namespace mapstruct
