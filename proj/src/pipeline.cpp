#include "mapstruct/pipeline.hpp"

#include <algorithm>

namespace mapstruct {

Analysis analyze_map(const BinaryMap& map, const PipelineConfig& config) {
  Analysis a;
  a.padded = pad_to_square(map);
  a.spectrum = dft2(a.padded.map);
  a.polar = unfold(a.spectrum, config.angle_bins, config.radius_bins);
  a.profile = directional_profile(a.polar);
  a.directions = find_dominant_directions(a.profile, config.directions);
  try {
    a.scaled = scale_profile(a.profile.values);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerate) throw;
  }
  if (!a.scaled.empty()) a.score = structure_score(a.scaled, a.directions);
  return a;
}

bool DeclutterResult::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}
bool DeclutterResult::no_structure() const { return has_flag(kFlagNoStructure); }
bool DeclutterResult::no_separation() const { return has_flag(kFlagNoSeparation); }

DeclutterResult declutter_map(const BinaryMap& map, const PipelineConfig& config) {
  DeclutterResult r;
  r.analysis = analyze_map(map, config);
  r.occupied = count_occupied(map);
  r.decluttered = map;

  auto finish = [&r]() {
    r.kept = count_occupied(r.decluttered);
    r.removed = r.occupied - r.kept;
    return std::move(r);
  };

  if (r.analysis.directions.empty()) {
    r.flags.emplace_back(kFlagNoStructure);
    return finish();
  }

  const auto& padded = r.analysis.padded;
  const auto mask = structure_mask(r.analysis.directions, padded.side(),
                                   config.effective_half_width_deg());
  const NominalMap square = reconstruct_nominal(r.analysis.spectrum, mask, padded.map);
  NominalMap nominal{crop_to_source(square.scores, padded),
                     crop_to_source(square.normalized, padded)};

  if (config.threshold_override) {
    r.threshold = *config.threshold_override;
    r.flags.emplace_back(kFlagThresholdOverride);
  } else {
    try {
      r.gmm = fit_gmm(occupied_scores(nominal, map), config.em);
      if (r.gmm->variance_collapsed) r.flags.emplace_back(kFlagVarianceCollapse);
      if (!r.gmm->converged) r.flags.emplace_back(kFlagNotConverged);
      const ScoreThreshold t = gmm_threshold(*r.gmm);
      if (t.fallback) r.flags.emplace_back(kFlagThresholdFallback);
      r.threshold = t.s;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoSeparation && e.code() != ErrorCode::kInvalidArgument) throw;
      r.flags.emplace_back(kFlagNoSeparation);
      r.nominal = std::move(nominal);
      return finish();
    }
  }

  r.decluttered = declutter(map, nominal, *r.threshold);
  r.nominal = std::move(nominal);
  return finish();
}

WallExtraction extract_walls(const BinaryMap& map, bool filter, const PipelineConfig& config,
                             const WallConfig& walls) {
  WallExtraction w;
  w.filtered = filter;
  w.center = grid_center(map.width(), map.height());
  if (!filter) {
    w.segments = detect_segments(map, walls.hough);
    w.lines = cluster_wall_lines(w.segments, w.center, walls.angle_tol_deg, walls.offset_tol);
    return w;
  }
  w.declutter = declutter_map(map, config);
  w.segments = detect_segments(w.declutter->decluttered, walls.hough);
  const auto clustered =
      cluster_wall_lines(w.segments, w.center, walls.angle_tol_deg, walls.offset_tol);
  const auto angles = w.declutter->analysis.directions.wall_angles();
  w.lines = align_to_directions(clustered, angles, w.center, walls.snap_tol_deg, walls.offset_tol);
  return w;
}

}  // namespace mapstruct
