#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mapstruct/structure.hpp"

namespace mapstruct {

// Min-max scaling to [0,1]. Throws kDegenerate for a constant profile.
std::vector<double> scale_profile(std::span<const double> profile);

enum class TrustClass { kTrusted, kUncertain, kFailed };

// w < 0.2 trusted, w > 0.4 failed, uncertain in between.
TrustClass classify_trust(double w);
std::string_view to_string(TrustClass trust);

struct GlobalScore {
  double w = 1.0;
  double mean_scaled_profile = 0.0;
  double mean_scaled_peak = 0.0;
  int n_peaks = 0;  // peak bins, both members of each symmetric pair
  bool no_structure = true;

  TrustClass trust() const { return classify_trust(w); }
};

// Ratio of the mean scaled profile to the mean scaled value at the peak bins.
// Without peaks the score is 1 and flagged as having no structure.
GlobalScore structure_score(std::span<const double> scaled_profile,
                            const DominantDirections& directions);

}  // namespace mapstruct
