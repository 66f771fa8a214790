#pragma once

#include <span>
#include <vector>

#include "mapstruct/spectral.hpp"

namespace mapstruct {

// Circular treats the profile as periodic (wall directions wrap at 360).
// Linear reproduces the usual non-periodic convention: the two end samples
// are never peaks and the contour search stops at the array ends.
enum class ProminenceMode { kCircular, kLinear };

// Indices of local maxima. A plateau counts once, at its middle sample.
std::vector<int> local_maxima(std::span<const double> profile,
                              ProminenceMode mode = ProminenceMode::kCircular);

// Height above the higher of the two lowest points met while walking left and
// right until a strictly higher sample is found. Throws kInvalidArgument if
// index is not a local maximum.
double peak_prominence(std::span<const double> profile, int index,
                       ProminenceMode mode = ProminenceMode::kCircular);

struct DirectionPeak {
  double spectral_angle_deg = 0.0;  // in [0, 180)
  double prominence = 0.0;          // scaled units
  double profile_value = 0.0;       // scaled units
  int bin = 0;
  int partner_bin = -1;  // bin of the 180-degree partner, -1 if unpaired
  bool paired() const noexcept { return partner_bin >= 0; }
  // A wall produces spectral energy along its normal.
  double wall_angle_deg() const;
};

struct DominantDirections {
  std::vector<DirectionPeak> peaks;  // strictly increasing spectral angle
  std::vector<int> peak_bins;        // every selected bin before pair collapsing, sorted
  int angle_bins = 0;

  bool empty() const noexcept { return peaks.empty(); }
  std::vector<double> spectral_angles() const;
  std::vector<double> wall_angles() const;
};

struct DirectionConfig {
  double threshold = 0.5;  // minimum prominence of the min-max scaled profile
  ProminenceMode mode = ProminenceMode::kCircular;
};

DominantDirections find_dominant_directions(const DirectionalProfile& profile,
                                            const DirectionConfig& config = {});

}  // namespace mapstruct
